"""Core data model for conceptual systems.

A model gathers essential characteristics (differences), the axes that group
them into subdivision criteria, the concepts they define, descriptive
attributes, reified objects, whole/part and associative links between
concepts, named object classes, and the terms that designate concepts in
natural languages.  Every other module in the package (parser, validator,
hierarchy reasoner, class algebra, definition generator, exporters) operates
on this container.

A freshly built model is *unvalidated*: cross-references are symbolic and the
derived indexes are empty.  ``otl.reasoner.validate`` resolves and checks
everything; afterwards the model is treated as immutable and the read-only
operations here (``intension``, ``extension``, ``resolve``) are safe to call
from multiple threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from typing import TYPE_CHECKING, NamedTuple, Optional, Union

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, typing only
    from .classes import ClassExpression
    from .reasoner import Hierarchy

# Attribute values are typed: text, number (exact decimal), or boolean.
# Plain ints are accepted anywhere a number is (convenient for hand-built
# expressions); parsing and deserialization always produce Decimal.
Value = Union[str, bool, Decimal, int]


class ValueKind(str, Enum):
    TEXT = "text"
    NUMBER = "number"
    BOOLEAN = "boolean"


class TermStatus(str, Enum):
    PREFERRED = "preferred"
    ADMITTED = "admitted"
    DEPRECATED = "deprecated"
    STANDARDIZED = "standardized"


class RelationKind(str, Enum):
    """Built-in taxonomy of associative (non-hierarchical) relation types."""

    ASSOCIATIVE = "associative"
    SEQUENTIAL = "sequential"
    TEMPORAL = "temporal"
    CAUSAL = "causal"
    PRODUCER_PRODUCT = "producer_product"


# causal < sequential < associative; the others sit directly under associative.
RELATION_KIND_PARENT: dict[RelationKind, RelationKind] = {
    RelationKind.CAUSAL: RelationKind.SEQUENTIAL,
    RelationKind.SEQUENTIAL: RelationKind.ASSOCIATIVE,
    RelationKind.TEMPORAL: RelationKind.ASSOCIATIVE,
    RelationKind.PRODUCER_PRODUCT: RelationKind.ASSOCIATIVE,
}

# Accepted spellings that normalize onto the taxonomy.
RELATION_KIND_ALIASES: dict[str, RelationKind] = {
    "cause_effect": RelationKind.CAUSAL,
}


def parse_relation_kind(text: str) -> RelationKind:
    """Map a surface spelling (including aliases) onto the taxonomy."""
    if text in RELATION_KIND_ALIASES:
        return RELATION_KIND_ALIASES[text]
    try:
        return RelationKind(text)
    except ValueError:
        raise UnknownIdentifierError(f"unknown relation type '{text}'") from None


def relation_kind_is_a(kind: RelationKind, ancestor: RelationKind) -> bool:
    """True iff `kind` equals `ancestor` or sits below it in the taxonomy."""
    cur: Optional[RelationKind] = kind
    while cur is not None:
        if cur is ancestor:
            return True
        cur = RELATION_KIND_PARENT.get(cur)
    return False


def value_kind_of(value: Value) -> ValueKind:
    # bool must be tested before the numeric branch: bool is an int subtype
    # and Decimal(1) == True under plain ==.
    if isinstance(value, bool):
        return ValueKind.BOOLEAN
    if isinstance(value, (Decimal, int)):
        return ValueKind.NUMBER
    if isinstance(value, str):
        return ValueKind.TEXT
    raise TypeError(f"unsupported attribute value {value!r}")


def values_equal(a: Value, b: Value) -> bool:
    """Typed value equality: values of different kinds are never equal."""
    return value_kind_of(a) is value_kind_of(b) and a == b


def dsl_quote(text: str) -> str:
    """Render a string as a DSL string literal."""
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{out}"'


def render_value(value: Value) -> str:
    """Render an attribute value as it appears in DSL source."""
    kind = value_kind_of(value)
    if kind is ValueKind.BOOLEAN:
        return "true" if value else "false"
    if kind is ValueKind.NUMBER:
        return str(value)
    return dsl_quote(value)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


#: Stable catalogue of diagnostic codes.  Anything emitted anywhere in the
#: package is drawn from this set (asserted by the test suite).
DIAGNOSTIC_CODES = frozenset(
    {
        # lexing / parsing
        "E_LEX",
        "E_SYN",
        "E_DUP_DECL",
        # reference resolution and structure
        "E_UNRESOLVED",
        "E_GENUS_CYCLE",
        "E_AXIS_ARITY",
        # intension checks
        "E_DUP_INTENSION",
        "E_NO_DELIMITING",
        "E_REDUNDANT_DIFFERENTIA",
        "E_AXIS_CONTRADICTION",
        "E_AXIS_SCOPE",
        # objects, parts, terms
        "E_ATTR_DOMAIN",
        "E_ATTR_VALUE",
        "E_PART_CYCLE",
        # serialization
        "E_JSON_SCHEMA",
        # definition generation
        "E_ROOT_NO_INTENSIONAL",
        "E_NO_SUBORDINATES",
        # warnings
        "W_UNDISTINGUISHED_COORDINATES",
        "W_NO_PREFERRED_TERM",
        "W_DESCRIPTION_ONLY",
    }
)


@dataclass(frozen=True)
class SourceSpan:
    """Location of a token or declaration in DSL source (1-based)."""

    file: str
    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    # Either a source span (DSL input) or an entity identifier (built models).
    location: Union[SourceSpan, str, None] = None

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def render(self) -> str:
        loc = str(self.location) if self.location is not None else "-"
        return f"{self.severity.value.upper()} {self.code} {loc} {self.message}"


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


# ---------------------------------------------------------------------------
# Errors raised by read operations (diagnostics cover build-time problems)
# ---------------------------------------------------------------------------


class OtlError(Exception):
    """Base class for errors raised by this package."""

    code: Optional[str] = None


class UnknownIdentifierError(OtlError):
    pass


class AmbiguousIdentifierError(OtlError):
    def __init__(self, name: str, candidates: list[str]):
        self.name = name
        self.candidates = candidates
        listing = ", ".join(candidates)
        super().__init__(f"'{name}' is ambiguous: {listing}")


class GenusCycleError(OtlError):
    code = "E_GENUS_CYCLE"


class NotValidatedError(OtlError):
    def __init__(self, operation: str):
        super().__init__(f"{operation} requires a validated model")


class InvalidModelError(OtlError):
    """Raised when an operation needs a valid model but validation failed."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        first = next((d for d in diagnostics if d.is_error), None)
        super().__init__(first.render() if first else "model is invalid")


# ---------------------------------------------------------------------------
# Entities
# ---------------------------------------------------------------------------


@dataclass
class Difference:
    """Essential characteristic: a unary predicate that defines concepts.

    The ``axis`` back-reference is derived from axis membership during
    validation; a difference belonging to no axis is free-standing.
    """

    id: str
    label: str
    axis: Optional[str] = None


@dataclass
class Axis:
    """Subdivision criterion: a named group of at least two differences.

    ``scope`` names the concept whose subdivision the axis governs; only
    concepts at or under that scope may use the member differences.  When
    ``exclusive`` (the default) no concept may combine two members.
    """

    id: str
    label: str
    scope: str
    members: tuple[str, ...]
    exclusive: bool = True


@dataclass
class Concept:
    """Unit of knowledge identified by a unique combination of differences.

    ``genus`` is the declared superordinate (None for roots); ``differentiae``
    are the stated delimiting differences in declaration order.  The full
    intension is derived: intension(genus) plus the differentiae.
    """

    id: str
    label: str
    genus: Optional[str] = None
    differentiae: tuple[str, ...] = ()


@dataclass
class AttributeDecl:
    """Descriptive characteristic: a typed attribute objects may carry."""

    id: str
    label: str
    domain: str
    value_kind: ValueKind


@dataclass
class ObjectInstance:
    """Reification of exactly one concept, carrying valuated attributes.

    Missing attribute values are permitted; an object is then merely
    incompletely described.
    """

    id: str
    label: str
    concept: str
    values: dict[str, Value] = field(default_factory=dict)


@dataclass(frozen=True)
class PartLink:
    """Whole/part link between concepts.  Descriptive, not an order: no
    transitive closure is ever computed, but cycles are rejected."""

    whole: str
    part: str
    note: Optional[str] = None


@dataclass(frozen=True)
class AssociativeLink:
    """Non-hierarchical link between concepts, typed by the built-in
    relation taxonomy."""

    relation_type: RelationKind
    source: str
    target: str


@dataclass(frozen=True)
class Term:
    """Designation of a concept in a natural language."""

    designation: str
    language: str
    status: TermStatus
    concept: str
    nl_definition: Optional[str] = None


@dataclass
class ClassDef:
    """Named class: a logical formula gathering objects of any concept."""

    id: str
    expr: "ClassExpression"


# ---------------------------------------------------------------------------
# The model container
# ---------------------------------------------------------------------------


@dataclass
class Model:
    """Complete conceptual system plus derived indexes.

    Entity collections are keyed by identifier and preserve declaration
    order (except parts/relations/terms, which are plain ordered lists).
    The derived fields (``intensions``, ``superiors``, ``hierarchy``) are
    filled by ``otl.reasoner.validate`` and excluded from equality, as are
    the source spans kept for diagnostics.
    """

    differences: dict[str, Difference] = field(default_factory=dict)
    axes: dict[str, Axis] = field(default_factory=dict)
    concepts: dict[str, Concept] = field(default_factory=dict)
    attributes: dict[str, AttributeDecl] = field(default_factory=dict)
    objects: dict[str, ObjectInstance] = field(default_factory=dict)
    parts: list[PartLink] = field(default_factory=list)
    relations: list[AssociativeLink] = field(default_factory=list)
    terms: list[Term] = field(default_factory=list)
    classes: dict[str, ClassDef] = field(default_factory=dict)

    # (entity kind, identifier) -> declaration span, for diagnostics.
    spans: dict[tuple[str, str], SourceSpan] = field(
        default_factory=dict, compare=False, repr=False
    )

    validated: bool = field(default=False, compare=False)
    # concept id -> full set of differences (genus intension + differentiae)
    intensions: dict[str, frozenset[str]] = field(
        default_factory=dict, compare=False, repr=False
    )
    # concept id -> all strictly more generic concepts (strict subsumers)
    superiors: dict[str, frozenset[str]] = field(
        default_factory=dict, compare=False, repr=False
    )
    hierarchy: Optional["Hierarchy"] = field(default=None, compare=False, repr=False)

    def require_validated(self, operation: str) -> None:
        if not self.validated:
            raise NotValidatedError(operation)

    def span_for(self, kind: str, entity_id: str) -> Union[SourceSpan, str]:
        """Best available diagnostic location for an entity."""
        return self.spans.get((kind, entity_id), entity_id)


class Resolved(NamedTuple):
    kind: str
    entity: object


# Search order for resolve(): fixed, also the listing order in ambiguity
# errors.
_RESOLVE_ORDER = (
    ("concept", "concepts"),
    ("difference", "differences"),
    ("axis", "axes"),
    ("attribute", "attributes"),
    ("object", "objects"),
    ("class", "classes"),
)


def resolve(model: Model, name: str) -> Resolved:
    """Look up `name` across all entity namespaces.

    Searches concepts, differences, axes, attributes, objects and classes in
    that order; the name must be unique across them.
    """
    hits = []
    for kind, attr in _RESOLVE_ORDER:
        collection = getattr(model, attr)
        if name in collection:
            hits.append(Resolved(kind, collection[name]))
    if not hits:
        raise UnknownIdentifierError(f"'{name}' not found")
    if len(hits) > 1:
        raise AmbiguousIdentifierError(name, [f"{kind} '{name}'" for kind, _ in hits])
    return hits[0]


def intension(model: Model, concept_id: str) -> frozenset[str]:
    """Full set of differences of a concept: its genus's intension plus its
    own differentiae.  Works on unvalidated models too (computed on the fly,
    raising on genus cycles); on validated models the index is returned.
    """
    if concept_id not in model.concepts:
        raise UnknownIdentifierError(f"unknown concept '{concept_id}'")
    if model.validated:
        return model.intensions[concept_id]
    acc: set[str] = set()
    seen: set[str] = set()
    cur: Optional[str] = concept_id
    while cur is not None:
        if cur in seen:
            raise GenusCycleError(f"generic cycle through concept '{cur}'")
        seen.add(cur)
        concept = model.concepts.get(cur)
        if concept is None:
            raise UnknownIdentifierError(f"unknown concept '{cur}'")
        acc.update(concept.differentiae)
        cur = concept.genus
    return frozenset(acc)


def extension(model: Model, concept_id: str) -> frozenset[str]:
    """All objects whose concept is `concept_id` or subsumed by it."""
    model.require_validated("extension")
    if concept_id not in model.concepts:
        raise UnknownIdentifierError(f"unknown concept '{concept_id}'")
    return frozenset(
        obj.id
        for obj in model.objects.values()
        if obj.concept == concept_id or concept_id in model.superiors[obj.concept]
    )

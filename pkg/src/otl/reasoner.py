"""Model validation and the derived generic hierarchy.

Validation runs in stages, each assuming the previous one succeeded:
reference resolution (including materializing implicitly declared
differences), genus-cycle detection, intension computation, intension
uniqueness and axis checks, then attribute/part/term checks.  Diagnostics
report the earliest failing stage; later stages are skipped once a stage
produced errors.

Subsumption is derived, never asserted: a concept subsumes another exactly
when its intension is a strict subset of the other's.  Because any subset of
a concept's differences may coincide with another concept's intension, the
derived structure is a poly-hierarchy: concepts can acquire superordinates
beyond their declared genus.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import model as m
from .classes import expression_references


@dataclass
class Hierarchy:
    """Materialized generic structure of a validated model.

    ``superiors`` maps each concept to all concepts that strictly subsume it;
    ``direct_super`` is the covering relation (transitive reduction) and
    ``direct_sub`` its inverse; ``roots`` are the concepts nothing subsumes.
    """

    superiors: dict[str, frozenset[str]]
    direct_super: dict[str, frozenset[str]]
    direct_sub: dict[str, frozenset[str]]
    roots: frozenset[str]

    def subsumes(self, c1: str, c2: str) -> bool:
        return c1 in self.superiors.get(c2, frozenset())


def _hierarchy_from_intensions(intensions: dict[str, frozenset[str]]) -> Hierarchy:
    ids = list(intensions)
    superiors = {
        c: frozenset(g for g in ids if g != c and intensions[g] < intensions[c])
        for c in ids
    }
    direct_super: dict[str, frozenset[str]] = {}
    for c in ids:
        sup = superiors[c]
        # g covers c iff no intermediate h with g < h < c
        direct_super[c] = frozenset(
            g for g in sup if not any(g in superiors[h] for h in sup if h != g)
        )
    direct_sub: dict[str, set[str]] = {c: set() for c in ids}
    for c, supers in direct_super.items():
        for g in supers:
            direct_sub[g].add(c)
    return Hierarchy(
        superiors=superiors,
        direct_super=direct_super,
        direct_sub={c: frozenset(s) for c, s in direct_sub.items()},
        roots=frozenset(c for c in ids if not superiors[c]),
    )


class _Validator:
    def __init__(self, model: m.Model):
        self.model = model
        self.diagnostics: list[m.Diagnostic] = []
        self.intensions: dict[str, frozenset[str]] = {}
        self.hierarchy: Hierarchy | None = None

    def report(self, severity: m.Severity, code: str, message: str, kind: str, entity_id: str) -> None:
        self.diagnostics.append(
            m.Diagnostic(severity, code, message, self.model.span_for(kind, entity_id))
        )

    def error(self, code: str, message: str, kind: str, entity_id: str) -> None:
        self.report(m.Severity.ERROR, code, message, kind, entity_id)

    def warn(self, code: str, message: str, kind: str, entity_id: str) -> None:
        self.report(m.Severity.WARNING, code, message, kind, entity_id)

    @property
    def failed(self) -> bool:
        return any(d.is_error for d in self.diagnostics)

    # -- stage 1: resolution and difference materialization -----------------

    def resolve_references(self) -> None:
        model = self.model

        owner: dict[str, str] = {}
        for axis in model.axes.values():
            if len(axis.members) < 2:
                self.error(
                    "E_AXIS_ARITY",
                    f"axis '{axis.id}' needs at least two member differences",
                    "axis",
                    axis.id,
                )
            if axis.scope not in model.concepts:
                self.error(
                    "E_UNRESOLVED",
                    f"axis '{axis.id}' scoped at unknown concept '{axis.scope}'",
                    "axis",
                    axis.id,
                )
            seen: set[str] = set()
            for member in axis.members:
                if member in seen:
                    self.error(
                        "E_DUP_DECL",
                        f"axis '{axis.id}' lists difference '{member}' twice",
                        "axis",
                        axis.id,
                    )
                    continue
                seen.add(member)
                prior = owner.get(member)
                if prior is not None:
                    self.error(
                        "E_DUP_DECL",
                        f"difference '{member}' belongs to both axis '{prior}' and axis '{axis.id}'",
                        "axis",
                        axis.id,
                    )
                    continue
                owner[member] = axis.id

        # Materialize differences: axis members first (axis declaration
        # order), then free-standing differentiae in concept order.  Explicit
        # entries (JSON or API input) keep their labels; the axis
        # back-reference is always recomputed from membership.
        for axis in model.axes.values():
            for member in axis.members:
                if member not in model.differences:
                    model.differences[member] = m.Difference(member, member)
        for concept in model.concepts.values():
            for diff in concept.differentiae:
                if diff not in model.differences:
                    model.differences[diff] = m.Difference(diff, diff)
        for diff in model.differences.values():
            diff.axis = owner.get(diff.id)

        for concept in model.concepts.values():
            if concept.genus is not None and concept.genus not in model.concepts:
                self.error(
                    "E_UNRESOLVED",
                    f"concept '{concept.id}' names unknown genus '{concept.genus}'",
                    "concept",
                    concept.id,
                )
            stated: set[str] = set()
            for diff in concept.differentiae:
                if diff in stated:
                    self.error(
                        "E_DUP_DECL",
                        f"concept '{concept.id}' states differentia '{diff}' twice",
                        "concept",
                        concept.id,
                    )
                stated.add(diff)

        for attr in model.attributes.values():
            if attr.domain not in model.concepts:
                self.error(
                    "E_UNRESOLVED",
                    f"attribute '{attr.id}' declared on unknown concept '{attr.domain}'",
                    "attribute",
                    attr.id,
                )

        for obj in model.objects.values():
            if obj.concept not in model.concepts:
                self.error(
                    "E_UNRESOLVED",
                    f"object '{obj.id}' reifies unknown concept '{obj.concept}'",
                    "object",
                    obj.id,
                )
            for attr_id in obj.values:
                if attr_id not in model.attributes:
                    self.error(
                        "E_UNRESOLVED",
                        f"object '{obj.id}' values undeclared attribute '{attr_id}'",
                        "value",
                        f"{obj.id}.{attr_id}",
                    )

        for index, part in enumerate(model.parts):
            for cid in (part.whole, part.part):
                if cid not in model.concepts:
                    self.error(
                        "E_UNRESOLVED",
                        f"part link names unknown concept '{cid}'",
                        "part",
                        str(index),
                    )

        for index, link in enumerate(model.relations):
            for cid in (link.source, link.target):
                if cid not in model.concepts:
                    self.error(
                        "E_UNRESOLVED",
                        f"relation names unknown concept '{cid}'",
                        "relation",
                        str(index),
                    )

        for index, term in enumerate(model.terms):
            if term.concept not in model.concepts:
                self.error(
                    "E_UNRESOLVED",
                    f"term {term.designation!r} names unknown concept '{term.concept}'",
                    "term",
                    str(index),
                )

        for cdef in model.classes.values():
            concepts, attributes = expression_references(cdef.expr)
            for cid in sorted(concepts):
                if cid not in model.concepts:
                    self.error(
                        "E_UNRESOLVED",
                        f"class '{cdef.id}' references unknown concept '{cid}'",
                        "class",
                        cdef.id,
                    )
            for aid in sorted(attributes):
                if aid not in model.attributes:
                    self.error(
                        "E_UNRESOLVED",
                        f"class '{cdef.id}' references unknown attribute '{aid}'",
                        "class",
                        cdef.id,
                    )

    # -- stage 2: genus cycles ----------------------------------------------

    def detect_genus_cycles(self) -> None:
        model = self.model
        done: set[str] = set()
        reported: set[frozenset[str]] = set()
        for start in model.concepts:
            path: list[str] = []
            on_path: set[str] = set()
            cur: str | None = start
            while cur is not None and cur not in done:
                if cur in on_path:
                    cycle = path[path.index(cur) :]
                    key = frozenset(cycle)
                    if key not in reported:
                        reported.add(key)
                        pivot = min(range(len(cycle)), key=lambda i: cycle[i])
                        ordered = cycle[pivot:] + cycle[:pivot]
                        first = min(
                            ordered, key=lambda c: list(model.concepts).index(c)
                        )
                        self.error(
                            "E_GENUS_CYCLE",
                            "generic cycle: " + " -> ".join(ordered + [ordered[0]]),
                            "concept",
                            first,
                        )
                    break
                path.append(cur)
                on_path.add(cur)
                cur = model.concepts[cur].genus
            done.update(path)

    # -- stage 3: intensions --------------------------------------------------

    def compute_intensions(self) -> None:
        model = self.model
        memo: dict[str, frozenset[str]] = {}
        for cid in model.concepts:
            chain: list[str] = []
            cur: str | None = cid
            while cur is not None and cur not in memo:
                chain.append(cur)
                cur = model.concepts[cur].genus
            acc = memo[cur] if cur is not None else frozenset()
            for key in reversed(chain):
                acc = acc | frozenset(model.concepts[key].differentiae)
                memo[key] = acc
        self.intensions = memo

    # -- stage 4: uniqueness and axis coherence -------------------------------

    def check_intensions(self) -> None:
        model = self.model
        intensions = self.intensions
        flagged: set[str] = set()

        for concept in model.concepts.values():
            if concept.genus is None:
                continue
            if not concept.differentiae:
                self.error(
                    "E_NO_DELIMITING",
                    f"concept '{concept.id}' adds no delimiting difference to genus '{concept.genus}'",
                    "concept",
                    concept.id,
                )
                flagged.add(concept.id)
                continue
            genus_intension = intensions[concept.genus]
            redundant = [d for d in concept.differentiae if d in genus_intension]
            if redundant:
                listing = ", ".join(redundant)
                self.error(
                    "E_REDUNDANT_DIFFERENTIA",
                    f"concept '{concept.id}' restates {listing} already in the intension of '{concept.genus}'",
                    "concept",
                    concept.id,
                )
                flagged.add(concept.id)

        # Intension uniqueness.  Concepts already flagged above necessarily
        # collide with their genus; the duplicate would only restate the
        # earlier error, so they are excluded here.
        by_intension: dict[frozenset[str], list[str]] = {}
        for cid in model.concepts:
            if cid in flagged:
                continue
            by_intension.setdefault(intensions[cid], []).append(cid)
        for group in by_intension.values():
            first, *rest = group
            for cid in rest:
                self.error(
                    "E_DUP_INTENSION",
                    f"concept '{cid}' has the same combination of differences as '{first}'",
                    "concept",
                    cid,
                )

        for concept in model.concepts.values():
            intension = intensions[concept.id]
            for axis in model.axes.values():
                if not axis.exclusive:
                    continue
                clash = intension.intersection(axis.members)
                if len(clash) >= 2:
                    listing = ", ".join(sorted(clash))
                    self.error(
                        "E_AXIS_CONTRADICTION",
                        f"concept '{concept.id}' combines {listing}, exclusive on axis '{axis.id}'",
                        "concept",
                        concept.id,
                    )
            # Axis scope: a member difference is only available to concepts
            # at or under the axis's scope concept.
            for diff_id in concept.differentiae:
                axis_id = model.differences[diff_id].axis
                if axis_id is None:
                    continue
                scope = model.axes[axis_id].scope
                if scope not in intensions:
                    continue  # unresolved scope already reported
                if not intensions[scope] <= intension:
                    self.error(
                        "E_AXIS_SCOPE",
                        f"concept '{concept.id}' uses '{diff_id}' of axis '{axis_id}' "
                        f"scoped at '{scope}', but is not under '{scope}'",
                        "concept",
                        concept.id,
                    )

        self.hierarchy = _hierarchy_from_intensions(intensions)

        # Defensive check: coordinates under a shared direct superordinate
        # must differ in their relative differences.  Unreachable while
        # intension uniqueness holds.
        for genus_id, children in sorted(self.hierarchy.direct_sub.items()):
            by_relative: dict[frozenset[str], list[str]] = {}
            for child in sorted(children):
                relative = intensions[child] - intensions[genus_id]
                by_relative.setdefault(relative, []).append(child)
            for group in by_relative.values():
                first, *rest = group
                for cid in rest:
                    self.warn(
                        "W_UNDISTINGUISHED_COORDINATES",
                        f"coordinates '{first}' and '{cid}' under '{genus_id}' share "
                        f"the same delimiting differences",
                        "concept",
                        cid,
                    )

    # -- stage 5: attributes, parts, terms -------------------------------------

    def check_attributes(self) -> None:
        model = self.model
        for obj in model.objects.values():
            for attr_id, value in obj.values.items():
                attr = model.attributes[attr_id]
                domain_intension = self.intensions[attr.domain]
                if not domain_intension <= self.intensions[obj.concept]:
                    self.error(
                        "E_ATTR_DOMAIN",
                        f"attribute '{attr_id}' is declared on '{attr.domain}', "
                        f"which does not subsume '{obj.concept}' of object '{obj.id}'",
                        "value",
                        f"{obj.id}.{attr_id}",
                    )
                kind = m.value_kind_of(value)
                if kind is not attr.value_kind:
                    self.error(
                        "E_ATTR_VALUE",
                        f"object '{obj.id}' gives attribute '{attr_id}' a {kind.value} "
                        f"value, expected {attr.value_kind.value}",
                        "value",
                        f"{obj.id}.{attr_id}",
                    )

    def check_parts(self) -> None:
        model = self.model
        edges: dict[str, set[str]] = {}
        first_edge_index: dict[tuple[str, str], int] = {}
        for index, part in enumerate(model.parts):
            edges.setdefault(part.whole, set()).add(part.part)
            first_edge_index.setdefault((part.whole, part.part), index)

        def reaches(start: str, goal: str) -> bool:
            stack = list(edges.get(start, ()))
            seen: set[str] = set()
            while stack:
                node = stack.pop()
                if node == goal:
                    return True
                if node in seen:
                    continue
                seen.add(node)
                stack.extend(edges.get(node, ()))
            return False

        cyclic = sorted(n for n in edges if reaches(n, n))
        reported: set[str] = set()
        for node in cyclic:
            if node in reported:
                continue
            component = sorted(
                c for c in cyclic if reaches(node, c) and reaches(c, node)
            )
            reported.update(component)
            # locate the diagnostic at the first declared edge inside the cycle
            indices = [
                i
                for (w, p), i in first_edge_index.items()
                if w in component and p in component
            ]
            self.error(
                "E_PART_CYCLE",
                "part links form a cycle through: " + ", ".join(component),
                "part",
                str(min(indices)) if indices else component[0],
            )

    def check_terms(self) -> None:
        model = self.model
        seen: dict[tuple[str, str, str], int] = {}
        for index, term in enumerate(model.terms):
            triple = (term.designation, term.language, term.concept)
            if triple in seen:
                self.error(
                    "E_DUP_DECL",
                    f"term {term.designation!r} ({term.language}) for "
                    f"'{term.concept}' already declared",
                    "term",
                    str(index),
                )
            else:
                seen[triple] = index

        # A concept naming itself in some language should have a preferred
        # designation in that language.
        for concept in model.concepts.values():
            languages = sorted(
                {t.language for t in model.terms if t.concept == concept.id}
            )
            for lang in languages:
                preferred = any(
                    t.status is m.TermStatus.PREFERRED
                    for t in model.terms
                    if t.concept == concept.id and t.language == lang
                )
                if not preferred:
                    self.warn(
                        "W_NO_PREFERRED_TERM",
                        f"concept '{concept.id}' has terms in '{lang}' but none preferred",
                        "concept",
                        concept.id,
                    )

    # -- driver ---------------------------------------------------------------

    def run(self) -> list[m.Diagnostic]:
        stages = (
            self.resolve_references,
            self.detect_genus_cycles,
            self.compute_intensions,
            self.check_intensions,
            lambda: (self.check_attributes(), self.check_parts(), self.check_terms()),
        )
        for stage in stages:
            stage()
            if self.failed:
                return self._ordered()
        model = self.model
        model.intensions = self.intensions
        assert self.hierarchy is not None
        model.superiors = self.hierarchy.superiors
        model.hierarchy = self.hierarchy
        model.validated = True
        return self._ordered()

    def _ordered(self) -> list[m.Diagnostic]:
        def key(item: tuple[int, m.Diagnostic]):
            index, diag = item
            if isinstance(diag.location, m.SourceSpan):
                loc = diag.location
                return (0, loc.file, loc.line, loc.column, diag.code, index)
            return (1, "", 0, 0, diag.code, index)

        return [d for _, d in sorted(enumerate(self.diagnostics), key=key)]


def validate(model: m.Model) -> list[m.Diagnostic]:
    """Resolve and check a model against every structural invariant.

    Returns the diagnostic list; the model is marked validated (with the
    intension index, subsumption index and hierarchy filled in) iff no
    error-severity diagnostics were produced.  Validating an already-valid
    model yields the same diagnostics again and changes nothing.
    """
    return _Validator(model).run()


def validate_or_raise(model: m.Model) -> m.Model:
    """Validate and return the model, raising InvalidModelError on errors."""
    diagnostics = validate(model)
    if m.has_errors(diagnostics):
        raise m.InvalidModelError(diagnostics)
    return model


def subsumes(model: m.Model, c1: str, c2: str) -> bool:
    """True iff `c1` is strictly more generic than `c2`.

    Derived from intensions (strict subset), not from declared genus links,
    so it holds between concepts with no genus path between them.
    Irreflexive by construction.
    """
    model.require_validated("subsumes")
    for cid in (c1, c2):
        if cid not in model.concepts:
            raise m.UnknownIdentifierError(f"unknown concept '{cid}'")
    return c1 in model.superiors[c2]


def compute_hierarchy(model: m.Model) -> Hierarchy:
    """The materialized subsumption structure of a validated model."""
    model.require_validated("compute_hierarchy")
    if model.hierarchy is None:
        model.hierarchy = _hierarchy_from_intensions(model.intensions)
    return model.hierarchy


def coordinates(model: m.Model, concept_id: str) -> frozenset[str]:
    """Concepts sharing at least one direct superordinate with the given
    concept, excluding the concept itself."""
    hierarchy = compute_hierarchy(model)
    if concept_id not in model.concepts:
        raise m.UnknownIdentifierError(f"unknown concept '{concept_id}'")
    result: set[str] = set()
    for genus in hierarchy.direct_super[concept_id]:
        result.update(hierarchy.direct_sub[genus])
    result.discard(concept_id)
    return frozenset(result)


def classify_object(model: m.Model, object_id: str) -> list[str]:
    """The object's concept followed by all its superordinates, most specific
    first; concepts of equal specificity are ordered by identifier."""
    model.require_validated("classify_object")
    obj = model.objects.get(object_id)
    if obj is None:
        raise m.UnknownIdentifierError(f"unknown object '{object_id}'")
    chain = [obj.concept, *model.superiors[obj.concept]]
    return sorted(chain, key=lambda cid: (-len(model.intensions[cid]), cid))

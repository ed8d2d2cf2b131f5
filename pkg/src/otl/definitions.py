"""Definition generation and the lexicon view.

Definitions are generated from the validated model: the intensional form
cites the declared genus plus the stated differentiae, the extensional
(enumerational) form lists direct subordinate concepts from the derived
hierarchy - concepts, never objects.  Object descriptions list only
descriptive knowledge (concept, valuated attributes, part links) and never
restate essential differences: definition and description stay separate.

Generated glosses are deliberately plain English scaffolding.  They are
formal glosses derived from the model, not natural-language term
definitions; those are authored by people and carried on terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import model as m
from .reasoner import compute_hierarchy


class DefinitionError(m.OtlError):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True)
class GeneratedDefinition:
    concept: str
    kind: str  # "intensional" | "extensional"
    # intensional: (genus id, differentia ids in declaration order)
    # extensional: ids of direct subordinates, sorted
    formal: Union[tuple[str, tuple[str, ...]], tuple[str, ...]]
    gloss: str

    def render(self) -> str:
        if self.kind == "intensional":
            genus, diffs = self.formal  # type: ignore[misc]
            return f"{self.gloss}\nformal: ({genus}, {{{', '.join(diffs)}}})"
        return f"{self.gloss}\nformal: [{', '.join(self.formal)}]"  # type: ignore[arg-type]


def intensional_definition(model: m.Model, concept_id: str) -> GeneratedDefinition:
    """Genus-and-differences definition of a non-root concept."""
    model.require_validated("intensional_definition")
    concept = model.concepts.get(concept_id)
    if concept is None:
        raise m.UnknownIdentifierError(f"unknown concept '{concept_id}'")
    if concept.genus is None:
        raise DefinitionError(
            "E_ROOT_NO_INTENSIONAL",
            f"'{concept_id}' is a root concept and has no genus to cite; "
            f"use the extensional definition or document it as a root",
        )
    genus = model.concepts[concept.genus]
    labels = [model.differences[d].label for d in concept.differentiae]
    gloss = f"{concept.label}: {genus.label} that is {' and '.join(labels)}"
    return GeneratedDefinition(
        concept=concept_id,
        kind="intensional",
        formal=(concept.genus, tuple(concept.differentiae)),
        gloss=gloss,
    )


def extensional_definition(model: m.Model, concept_id: str) -> GeneratedDefinition:
    """Enumerational definition: the direct subordinates in the derived
    hierarchy, so poly-hierarchy children count too."""
    hierarchy = compute_hierarchy(model)
    concept = model.concepts.get(concept_id)
    if concept is None:
        raise m.UnknownIdentifierError(f"unknown concept '{concept_id}'")
    subordinates = sorted(hierarchy.direct_sub[concept_id])
    if not subordinates:
        raise DefinitionError(
            "E_NO_SUBORDINATES",
            f"'{concept_id}' has no subordinate concepts to enumerate",
        )
    labels = [model.concepts[cid].label for cid in subordinates]
    gloss = f"{concept.label}: one of {', '.join(labels)}"
    return GeneratedDefinition(
        concept=concept_id,
        kind="extensional",
        formal=tuple(subordinates),
        gloss=gloss,
    )


def describe_object(model: m.Model, object_id: str) -> str:
    """Description of an object: its concept, its valuated attributes sorted
    by attribute identifier, and the part links of its concept."""
    model.require_validated("describe_object")
    obj = model.objects.get(object_id)
    if obj is None:
        raise m.UnknownIdentifierError(f"unknown object '{object_id}'")
    concept = model.concepts[obj.concept]
    pieces = [f"{obj.id} : {concept.label}"]
    for attr_id in sorted(obj.values):
        pieces.append(f"{attr_id} = {m.render_value(obj.values[attr_id])}")
    lines = [" / ".join(pieces)]
    parts = [p.part for p in model.parts if p.whole == obj.concept]
    if parts:
        lines.append("parts: " + ", ".join(parts))
    return "\n".join(lines)


def lexicon(model: m.Model, language: str) -> str:
    """Per-concept view pairing the terms of a language with the generated
    formal gloss.

    Concepts are ordered from generic to specific (then by identifier).
    Concepts without a preferred term in the requested language are noted
    after the table, as are concepts documented only by part links.
    """
    model.require_validated("lexicon")
    hierarchy = compute_hierarchy(model)
    ordered = sorted(
        model.concepts, key=lambda cid: (len(model.intensions[cid]), cid)
    )
    status_rank = {
        m.TermStatus.PREFERRED: 0,
        m.TermStatus.STANDARDIZED: 1,
        m.TermStatus.ADMITTED: 2,
        m.TermStatus.DEPRECATED: 3,
    }

    rows: list[tuple[str, str, str, str]] = []
    notes: list[str] = []
    for cid in ordered:
        concept = model.concepts[cid]
        terms = sorted(
            (t for t in model.terms if t.concept == cid and t.language == language),
            key=lambda t: (status_rank[t.status], t.designation),
        )
        term_cell = (
            ", ".join(f'"{t.designation}" ({t.status.value})' for t in terms) or "-"
        )
        nl_cell = "; ".join(t.nl_definition for t in terms if t.nl_definition) or "-"
        if concept.genus is not None:
            gloss = intensional_definition(model, cid).gloss
        else:
            gloss = "(root)"
        rows.append((cid, term_cell, nl_cell, gloss))

        if not any(t.status is m.TermStatus.PREFERRED for t in terms):
            notes.append(
                f"# W_NO_PREFERRED_TERM {cid}: no preferred term for language '{language}'"
            )
        if (
            concept.genus is None
            and not hierarchy.direct_sub[cid]
            and any(cid in (p.whole, p.part) for p in model.parts)
        ):
            notes.append(
                f"# W_DESCRIPTION_ONLY {cid}: documented only by part links, "
                f"no definition can be generated"
            )

    if not rows:
        return ""
    widths = [max(len(row[i]) for row in rows) for i in range(3)]
    lines = [
        "  ".join(
            [row[0].ljust(widths[0]), row[1].ljust(widths[1]), row[2].ljust(widths[2]), row[3]]
        ).rstrip()
        for row in rows
    ]
    return "\n".join(lines + notes) + "\n"

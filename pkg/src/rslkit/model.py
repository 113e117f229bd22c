"""Document model: elements, spans, diagnostics, text edits.

Everything here is immutable-by-convention; spans never participate in
structural equality so that round-trip tests can compare reparsed models.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

ELEMENT_KINDS = (
    "DataEntity",
    "Actor",
    "UseCase",
    "Term",
    "LinguisticRule",
    "LinguisticLanguage",
    "Stakeholder",
    "FunctionalRequirement",
)

LANGUAGES = (
    "English",
    "Spanish",
    "German",
    "French",
    "Italian",
    "Portuguese",
    "Japanese",
)

DATA_TYPES = ("Integer", "Decimal", "String", "Boolean", "Date", "DateTime")
CONSTRAINTS = ("PrimaryKey", "NotNull", "Unique")
SEVERITIES = ("Error", "Warning", "Info")
FRAGMENTS = ("id", "name", "description")


@dataclass(frozen=True)
class SourceSpan:
    """Region of a source file; lines/cols are 1-based, offset is 0-based."""

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int
    offset: int
    length: int

    @property
    def end_offset(self) -> int:
        return self.offset + self.length

    def overlaps(self, other: "SourceSpan") -> bool:
        if self.file != other.file:
            return False
        # Zero-length spans at the same offset are insertions, not overlaps.
        return self.offset < other.end_offset and other.offset < self.end_offset


def zero_span(file: str = "<generated>") -> SourceSpan:
    return SourceSpan(file, 1, 1, 1, 1, 0, 0)


@dataclass(frozen=True)
class TextEdit:
    span: SourceSpan
    new_text: str


@dataclass(frozen=True)
class QuickFix:
    title: str
    edits: tuple[TextEdit, ...]


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    span: SourceSpan
    related: tuple[tuple[SourceSpan, str], ...] = ()
    fixes: tuple[QuickFix, ...] = ()

    def sort_key(self):
        return (self.span.file, self.span.offset, self.code, self.message)


class OverlappingEdits(Exception):
    """Two text edits intersect; the combined result would be ambiguous."""


def apply_edits(source: str, edits: list[TextEdit] | tuple[TextEdit, ...]) -> str:
    """Apply non-overlapping edits to source text.

    Edits may be given in any order; they are applied in descending offset
    order so earlier offsets stay valid.
    """
    ordered = sorted(edits, key=lambda e: (e.span.offset, e.span.end_offset))
    for a, b in zip(ordered, ordered[1:]):
        if a.span.overlaps(b.span):
            raise OverlappingEdits(f"edits at {a.span.offset} and {b.span.offset} overlap")
        if (
            a.span.offset == b.span.offset
            and a.span.length == 0
            and b.span.length == 0
            and a.new_text != b.new_text
        ):
            # Two distinct insertions at one point have no defined order.
            raise OverlappingEdits(f"conflicting insertions at {a.span.offset}")
    out = source
    for e in reversed(ordered):
        out = out[: e.span.offset] + e.new_text + out[e.span.end_offset :]
    return out


# --- pattern expressions ------------------------------------------------

POS_CATEGORIES = {
    "Verb": "VERB",
    "Noun": "NOUN",
    "ProperNoun": "PROPN",
    "Adjective": "ADJ",
    "Adverb": "ADV",
    "Determiner": "DET",
    "Preposition": "ADP",
    "Pronoun": "PRON",
    "Conjunction": "CCONJ",
    "Number": "NUM",
}

UPOS_TO_CATEGORY = {v: k for k, v in POS_CATEGORIES.items()}


@dataclass(frozen=True)
class PosPart:
    category: str  # key of POS_CATEGORIES


@dataclass(frozen=True)
class LitPart:
    text: str


@dataclass(frozen=True)
class FragmentRefPart:
    element_kind: str
    fragment: str  # id | name | description


@dataclass(frozen=True)
class AltPart:
    options: tuple  # of PosPart | LitPart | FragmentRefPart


PatternPart = object  # union of the four part classes


@dataclass(frozen=True)
class PatternExpr:
    parts: tuple


def render_part(part, parenthesize: bool = True) -> str:
    if isinstance(part, PosPart):
        return f"({part.category})" if parenthesize else part.category
    if isinstance(part, LitPart):
        return f'"{part.text}"'
    if isinstance(part, FragmentRefPart):
        inner = f"{part.element_kind}.{part.fragment}"
        return f"({inner})" if parenthesize else inner
    if isinstance(part, AltPart):
        inner = " | ".join(render_part(o, parenthesize=False) for o in part.options)
        return f"({inner})"
    raise TypeError(f"not a pattern part: {part!r}")


def render_pattern(pattern: PatternExpr) -> str:
    """Human-readable pattern with each non-literal part parenthesized."""
    return " + ".join(render_part(p) for p in pattern.parts)


# --- elements -------------------------------------------------------------

def _nospan():
    return field(default=None, compare=False, repr=False)


@dataclass
class Attribute:
    id: str
    name: str
    data_type: str
    constraints: tuple[str, ...] = ()
    default_value: Optional[str] = None
    span: Optional[SourceSpan] = _nospan()


@dataclass
class Element:
    id: str
    name: Optional[str] = None
    description: Optional[str] = None
    span: Optional[SourceSpan] = _nospan()
    id_span: Optional[SourceSpan] = _nospan()
    name_span: Optional[SourceSpan] = _nospan()
    description_span: Optional[SourceSpan] = _nospan()

    kind = "Element"

    @property
    def name_alias(self) -> str:
        return self.name if self.name is not None else self.id

    def fragment_value(self, fragment: str) -> Optional[str]:
        if fragment == "id":
            return self.id
        if fragment == "name":
            return self.name
        if fragment == "description":
            return self.description
        return None

    def fragment_span(self, fragment: str) -> Optional[SourceSpan]:
        return {
            "id": self.id_span,
            "name": self.name_span,
            "description": self.description_span,
        }.get(fragment)


@dataclass
class DataEntity(Element):
    entity_type: str = "Other"
    attributes: tuple[Attribute, ...] = ()
    is_a: Optional[str] = None
    part_of: Optional[str] = None
    is_a_span: Optional[SourceSpan] = _nospan()
    part_of_span: Optional[SourceSpan] = _nospan()

    kind = "DataEntity"


@dataclass
class Actor(Element):
    actor_type: str = "User"
    is_a: Optional[str] = None
    is_a_span: Optional[SourceSpan] = _nospan()

    kind = "Actor"


@dataclass
class UseCase(Element):
    uc_type: str = "Other"
    primary_actor: Optional[str] = None
    data_entity: Optional[str] = None
    actions: tuple[str, ...] = ()
    extension_points: tuple[str, ...] = ()
    extends_target: Optional[str] = None
    extends_point: Optional[str] = None
    precondition: Optional[str] = None
    primary_actor_span: Optional[SourceSpan] = _nospan()
    data_entity_span: Optional[SourceSpan] = _nospan()
    extends_span: Optional[SourceSpan] = _nospan()

    kind = "UseCase"


@dataclass
class Term(Element):
    pos_category: str = "Noun"
    synonyms: tuple[str, ...] = ()

    kind = "Term"


@dataclass
class LinguisticRuleDecl(Element):
    rule_kind: str = "Syntax"
    target_kind: str = "UseCase"
    fragment: str = "name"
    pattern: Optional[PatternExpr] = None
    severity: str = "Error"

    kind = "LinguisticRule"


@dataclass
class LinguisticLanguageDecl(Element):
    language: str = "English"

    kind = "LinguisticLanguage"


@dataclass
class Stakeholder(Element):
    stakeholder_type: str = "Other"
    stakeholder_subtype: Optional[str] = None

    kind = "Stakeholder"


@dataclass
class FunctionalRequirement(Element):
    fr_type: str = "Functional"

    kind = "FunctionalRequirement"


@dataclass
class IncludeDecl:
    mode: str  # Import | Include | IncludeAll
    from_system: str
    element_kind: Optional[str] = None
    element_id: Optional[str] = None
    span: Optional[SourceSpan] = _nospan()


@dataclass
class Model:
    elements: list = field(default_factory=list)
    includes: list = field(default_factory=list)
    language_decl: Optional[LinguisticLanguageDecl] = None
    file: str = field(default="<memory>", compare=False)
    resolved: bool = field(default=False, compare=False)
    end_span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    @property
    def language(self) -> str:
        return self.language_decl.language if self.language_decl else "English"

    def elements_of_kind(self, kind: str) -> list:
        return [e for e in self.elements if e.kind == kind]

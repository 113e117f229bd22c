"""Linguistic rule checking over element fragments.

For each rule and each element of the rule's target kind, the fragment
text is tagged and matched against the rule's pattern; failures become
diagnostics, and a missing element name yields a create-element quick fix.
"""

from __future__ import annotations

import re
from typing import Optional

from .lexicon import Lexicon, analyze, split_sentences
from .matching import MatchResult, match_pattern
from .model import (
    AltPart,
    Diagnostic,
    FragmentRefPart,
    FRAGMENTS,
    LinguisticRuleDecl,
    LitPart,
    PosPart,
    QuickFix,
    SourceSpan,
    TextEdit,
    render_pattern,
)
from .workspace import ResolvedModel

ID_PREFIXES = {"DataEntity": "ec", "Actor": "a", "UseCase": "uc"}

_WORD_RE = re.compile(r"\w+", re.UNICODE)


def _camel(name: str) -> str:
    return "".join(w[:1].upper() + w[1:] for w in _WORD_RE.findall(name))


def _fresh_id(kind: str, candidate: str, taken: set[str]) -> str:
    base = f"{ID_PREFIXES.get(kind, 'el')}_{_camel(candidate)}"
    new_id = base
    n = 1
    while new_id in taken:
        n += 1
        new_id = f"{base}_{n}"
    return new_id


def _failing_ref(result: MatchResult) -> Optional[FragmentRefPart]:
    part = result.expectation
    if isinstance(part, FragmentRefPart):
        return part
    if isinstance(part, AltPart):
        for option in part.options:
            if isinstance(option, FragmentRefPart):
                return option
    return None


def _expectation_line(result: MatchResult) -> str:
    part = result.expectation
    ref = _failing_ref(result)
    if ref is not None and result.candidate:
        noun = "name" if ref.fragment == "name" else ref.fragment
        return f"The word '{result.candidate}' is expected to be the {noun} of a/an '{ref.element_kind}'"
    if isinstance(part, LitPart):
        return f"Expected the word '{part.text}'"
    if isinstance(part, PosPart):
        return f"Expected a {part.category}"
    if isinstance(part, AltPart):
        names = " or ".join(
            o.category if isinstance(o, PosPart) else f"'{o.text}'" if isinstance(o, LitPart) else f"{o.element_kind}.{o.fragment}"
            for o in part.options
        )
        return f"Expected a {names}"
    if isinstance(part, FragmentRefPart):
        return f"Expected the {part.fragment} of a/an '{part.element_kind}'"
    return "Pattern not satisfied"


def check_linguistic_rules(
    rm: ResolvedModel, rules: list[LinguisticRuleDecl], lex: Lexicon
) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    taken_ids = {e.id for e in rm.effective_elements}
    append_at = rm.model.end_span
    creations: dict[tuple[str, str], QuickFix] = {}  # reuse one fix per (kind, name)

    for rule in rules:
        if rule.pattern is None:
            continue
        if rule.fragment not in FRAGMENTS:
            diags.append(
                Diagnostic(
                    "Error",
                    "RSL-C003",
                    f"Rule '{rule.id}': fragment '{rule.fragment}' does not exist on {rule.target_kind}",
                    rule.span,
                )
            )
            continue
        for elem in rm.effective_elements:
            if elem.kind != rule.target_kind or elem is rule:
                continue
            value = elem.fragment_value(rule.fragment)
            if not value:
                continue
            pieces = (
                split_sentences(value)
                if rule.fragment == "description"
                else [(0, value)]
            )
            for _, sentence in pieces:
                tokens = analyze(sentence, lex)
                if not tokens:
                    continue
                result = match_pattern(rule.pattern, tokens, rm.effective_elements)
                if result.matched:
                    continue
                message = (
                    f"This text must follow the pattern '{render_pattern(rule.pattern)}'"
                    + "\n"
                    + _expectation_line(result)
                )
                fixes = ()
                ref = _failing_ref(result)
                if ref is not None and result.candidate and ref.fragment == "name" and append_at is not None:
                    key = (ref.element_kind, result.candidate)
                    if key not in creations:
                        new_id = _fresh_id(ref.element_kind, result.candidate, taken_ids)
                        taken_ids.add(new_id)
                        decl = f'{ref.element_kind} {new_id} "{result.candidate}" : Other []'
                        insert = SourceSpan(
                            rm.file,
                            append_at.start_line,
                            append_at.start_col,
                            append_at.start_line,
                            append_at.start_col,
                            append_at.offset,
                            0,
                        )
                        creations[key] = QuickFix(
                            f"Create '{ref.element_kind}' with name '{result.candidate}'",
                            (TextEdit(insert, f"\n{decl}\n"),),
                        )
                    fixes = (creations[key],)
                span = elem.fragment_span(rule.fragment) or elem.span
                diags.append(Diagnostic(rule.severity, "RSL-L001", message, span, fixes=fixes))
    return diags

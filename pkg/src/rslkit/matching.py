"""Pattern matching of tagged tokens against linguistic rule patterns.

Prefix semantics: trailing tokens beyond the pattern are allowed.
Element-fragment references match the longest token run whose surfaces
or lemmas equal an existing element's fragment, with backtracking so a
shorter run is tried when a later part would otherwise fail.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .lexicon import Token
from .model import AltPart, FragmentRefPart, LitPart, PosPart, PatternExpr, POS_CATEGORIES

_WORD_RE = re.compile(r"\w+", re.UNICODE)


def normalize(text: str) -> str:
    return " ".join(_WORD_RE.findall(text.lower()))


@dataclass(frozen=True)
class MatchResult:
    matched: bool
    prefix_len: int = 0  # tokens consumed on success
    fail_part_index: int = 0
    fail_token_index: int = 0
    expectation: Optional[object] = None  # the unmet pattern part
    candidate: Optional[str] = None  # suggested name for FragmentRef failures


def _fragment_values(elements, kind: str, fragment: str) -> set[str]:
    values = set()
    for elem in elements:
        if elem.kind != kind:
            continue
        value = elem.fragment_value(fragment)
        if value:
            values.add(normalize(value))
    return values


def _title(word: str) -> str:
    return word[:1].upper() + word[1:]


def match_pattern(pattern: PatternExpr, tokens: list[Token], elements) -> MatchResult:
    """Match pattern parts left to right against tokens (prefix semantics)."""
    parts = pattern.parts
    frag_cache: dict[tuple[str, str], set[str]] = {}
    best = [0, 0]  # furthest failure: token index, part index

    def frag_values(part: FragmentRefPart) -> set[str]:
        key = (part.element_kind, part.fragment)
        if key not in frag_cache:
            frag_cache[key] = _fragment_values(elements, part.element_kind, part.fragment)
        return frag_cache[key]

    def fail(pi: int, ti: int):
        if (ti, pi) > tuple(best):
            best[0], best[1] = ti, pi
        return None

    def consume(part, ti: int):
        """Yield token counts this part can consume starting at ti."""
        if isinstance(part, AltPart):
            for option in part.options:
                yield from consume(option, ti)
            return
        if ti >= len(tokens):
            return
        tok = tokens[ti]
        if isinstance(part, PosPart):
            if POS_CATEGORIES[part.category] in tok.tags:
                yield 1
            return
        if isinstance(part, LitPart):
            if tok.surface.lower() == part.text.lower():
                yield 1
            return
        if isinstance(part, FragmentRefPart):
            targets = frag_values(part)
            # Longest run first so plural/singular multi-word names win.
            for run in range(len(tokens) - ti, 0, -1):
                window = tokens[ti : ti + run]
                surfaces = " ".join(t.surface.lower() for t in window)
                lemmas = " ".join(t.lemma for t in window)
                if surfaces in targets or lemmas in targets:
                    yield run
            return
        raise TypeError(part)

    def walk(pi: int, ti: int) -> Optional[int]:
        if pi == len(parts):
            return ti
        produced = False
        for count in consume(parts[pi], ti):
            produced = True
            result = walk(pi + 1, ti + count)
            if result is not None:
                return result
        if not produced:
            fail(pi, ti)
        return None

    consumed = walk(0, 0)
    if consumed is not None:
        return MatchResult(True, prefix_len=consumed)

    fail_ti, fail_pi = best
    part = parts[fail_pi]
    candidate = None
    ref = part if isinstance(part, FragmentRefPart) else None
    if ref is None and isinstance(part, AltPart):
        refs = [o for o in part.options if isinstance(o, FragmentRefPart)]
        ref = refs[0] if refs else None
    if ref is not None:
        remaining = tokens[fail_ti : fail_ti + 3]
        if remaining:
            candidate = " ".join(_title(t.surface) for t in remaining)
    return MatchResult(
        False,
        fail_part_index=fail_pi,
        fail_token_index=fail_ti,
        expectation=part,
        candidate=candidate,
    )

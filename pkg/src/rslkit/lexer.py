"""Tokenizer for the requirements language.

Produces identifier / string / punctuation tokens with full spans.
Never raises on malformed input; lexical problems become error tokens
that the parser turns into diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import SourceSpan

PUNCT = set(":[](),+|.")


@dataclass(frozen=True)
class RslToken:
    kind: str  # identifier | string | punct | error | end
    text: str  # surface text; for strings, the decoded value
    span: SourceSpan
    raw: str = ""  # original source text (useful for strings)


def tokenize(source: str, file: str = "<memory>") -> list[RslToken]:
    tokens: list[RslToken] = []
    line, col = 1, 1
    i, n = 0, len(source)

    def advance(text: str):
        nonlocal line, col
        for ch in text:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1

    def make(kind, text, start, start_line, start_col, raw=None):
        span = SourceSpan(file, start_line, start_col, line, col, start, i - start)
        tokens.append(RslToken(kind, text, span, raw if raw is not None else text))

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance(ch)
            i += 1
            continue
        if ch == "/" and source.startswith("//", i):
            j = source.find("\n", i)
            j = n if j == -1 else j
            advance(source[i:j])
            i = j
            continue
        start, sl, sc = i, line, col
        if ch == '"':
            value = []
            j = i + 1
            terminated = False
            while j < n:
                c = source[j]
                if c == "\\" and j + 1 < n and source[j + 1] in ('"', "\\"):
                    value.append(source[j + 1])
                    j += 2
                    continue
                if c == '"':
                    terminated = True
                    j += 1
                    break
                if c == "\n":
                    break
                value.append(c)
                j += 1
            raw = source[i:j]
            advance(raw)
            i = j
            make("string" if terminated else "error", "".join(value), start, sl, sc, raw)
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            advance(word)
            i = j
            make("identifier", word, start, sl, sc)
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            word = source[i:j]
            advance(word)
            i = j
            make("identifier", word, start, sl, sc)
            continue
        if ch in PUNCT:
            advance(ch)
            i += 1
            make("punct", ch, start, sl, sc)
            continue
        advance(ch)
        i += 1
        make("error", ch, start, sl, sc)

    end_span = SourceSpan(file, line, col, line, col, n, 0)
    tokens.append(RslToken("end", "", end_span))
    return tokens


def content_span(token: RslToken) -> SourceSpan:
    """Span of a string token's contents (inside the quotes).

    Only exact when the literal carries no escapes; callers needing edit
    precision should check that first.
    """
    s = token.span
    inner_len = max(len(token.raw) - 2, 0)
    return SourceSpan(
        s.file,
        s.start_line,
        s.start_col + 1,
        s.end_line,
        max(s.end_col - 1, s.start_col + 1),
        s.offset + 1,
        inner_len,
    )

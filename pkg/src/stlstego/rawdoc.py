"""Byte-faithful view of a raw ASCII STL document.

Splits the text into pieces whose concatenation reproduces the input
exactly, while indexing the two places where an ASCII file can vary without
changing its parsed value: the spelling of numeric tokens and the
whitespace used to indent lines. Rewriting either kind of piece yields a
new document; everything else is untouched.
"""
from __future__ import annotations

from .floatfmt import is_number_token


class RawAsciiDocument:
    """Tokenized ASCII STL text with addressable numbers and indents."""

    __slots__ = ("_pieces", "_number_slots", "_indent_slots")

    def __init__(self, text: str):
        self._pieces, self._number_slots, self._indent_slots = _tokenize(text)

    @property
    def text(self) -> str:
        return "".join(self._pieces)

    @property
    def number_tokens(self) -> list[str]:
        """Numeric tokens of `facet normal` and `vertex` statements, in file order."""
        return [self._pieces[i] for i in self._number_slots]

    @property
    def indent_runs(self) -> list[str]:
        """Leading whitespace of each indented line, in file order."""
        return [self._pieces[i] for i in self._indent_slots]

    def with_number_tokens(self, tokens) -> "RawAsciiDocument":
        return self._rewrite(self._number_slots, tokens)

    def with_indent_runs(self, runs) -> "RawAsciiDocument":
        return self._rewrite(self._indent_slots, runs)

    def _rewrite(self, slots, replacements) -> "RawAsciiDocument":
        replacements = list(replacements)
        if len(replacements) != len(slots):
            raise ValueError(
                f"expected {len(slots)} replacement pieces, got {len(replacements)}"
            )
        pieces = list(self._pieces)
        for i, new in zip(slots, replacements):
            pieces[i] = new
        return RawAsciiDocument("".join(pieces))


def _tokenize(text: str):
    pieces: list[str] = []
    number_slots: list[int] = []
    indent_slots: list[int] = []

    pending_numbers = 0
    previous_token = ""

    for line in text.splitlines(keepends=True):
        body = line.rstrip("\r\n")
        eol = line[len(body):]

        stripped = body.lstrip(" \t")
        indent = body[: len(body) - len(stripped)]
        if indent:
            pieces.append(indent)
            if stripped:
                indent_slots.append(len(pieces) - 1)

        rest = stripped
        while rest:
            ws_len = len(rest) - len(rest.lstrip(" \t"))
            if ws_len:
                pieces.append(rest[:ws_len])
                rest = rest[ws_len:]
                continue
            tok_len = len(rest)
            for k, ch in enumerate(rest):
                if ch in " \t":
                    tok_len = k
                    break
            token = rest[:tok_len]
            pieces.append(token)
            if pending_numbers and is_number_token(token):
                number_slots.append(len(pieces) - 1)
                pending_numbers -= 1
            else:
                pending_numbers = 0
                if token == "normal" and previous_token == "facet":
                    pending_numbers = 3
                elif token == "vertex":
                    pending_numbers = 3
            previous_token = token
            rest = rest[tok_len:]

        if eol:
            pieces.append(eol)

    return tuple(pieces), tuple(number_slots), tuple(indent_slots)

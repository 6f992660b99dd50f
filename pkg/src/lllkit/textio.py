"""Line-oriented input formats: '#' starts a comment, blank lines are skipped."""

from __future__ import annotations

from collections.abc import Iterator
from fractions import Fraction
from pathlib import Path

from lllkit.errors import ParseError


def read_text(path: str | Path) -> tuple[str, str]:
    p = Path(path)
    try:
        return p.read_text(), p.name
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", 0, 0, str(path)) from exc


def tokens(text: str) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    """Yield ``(line_number, [(column, token), ...])`` for non-empty lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = []
        col = 0
        for piece in line.split():
            col = line.index(piece, col)
            toks.append((col + 1, piece))
            col += len(piece)
        if toks:
            yield lineno, toks


def to_int(tok: tuple[int, str], lineno: int, source: str) -> int:
    col, text = tok
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected an integer, found {text!r}", lineno, col, source) from None


def to_fraction(tok: tuple[int, str], lineno: int, source: str) -> Fraction:
    col, text = tok
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a rational like 3/8 or 0.25, found {text!r}", lineno, col, source) from None

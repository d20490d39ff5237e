"""Ultimately periodic words ``prefix . loop^omega``.

``Lasso`` is letter-agnostic and is used for label words and action words.
``LassoDataWord`` specialises letters to ``(label, datum)`` pairs and adds the
text syntax ``(req,1)(grt,1) | (idle,0)(idle,0)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Hashable, Iterator, Sequence


@dataclass(frozen=True)
class Lasso:
    prefix: tuple
    loop: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("the loop of a lasso must be nonempty")

    def __getitem__(self, i: int):
        """Letter at 0-based position ``i``."""
        if i < len(self.prefix):
            return self.prefix[i]
        return self.loop[(i - len(self.prefix)) % len(self.loop)]

    def __len__(self) -> int:  # finite representation length
        return len(self.prefix) + len(self.loop)

    def next_pos(self, pos: int) -> int:
        """Successor among representation positions ``0 .. len-1``."""
        pos += 1
        return pos if pos < len(self) else len(self.prefix)

    def take(self, n: int) -> tuple:
        return tuple(self[i] for i in range(n))

    def __iter__(self) -> Iterator:
        i = 0
        while True:
            yield self[i]
            i += 1

    def unfold(self, n: int = 1) -> "Lasso":
        """Equivalent lasso with ``n`` loop copies appended to the prefix."""
        return type(self)(self.prefix + self.loop * n, self.loop)

    def rotate(self) -> "Lasso":
        """Equivalent lasso with one loop letter moved into the prefix."""
        return type(self)(self.prefix + self.loop[:1], self.loop[1:] + self.loop[:1])

    def map(self, f: Callable) -> "Lasso":
        return Lasso(tuple(map(f, self.prefix)), tuple(map(f, self.loop)))

    def canonical(self) -> "Lasso":
        """Shortest equivalent representation (primitive loop, minimal prefix)."""
        loop = self.loop
        n = len(loop)
        for p in range(1, n + 1):
            if n % p == 0 and loop[:p] * (n // p) == loop:
                loop = loop[:p]
                break
        prefix = self.prefix
        while prefix and prefix[-1] == loop[-1]:
            prefix = prefix[:-1]
            loop = loop[-1:] + loop[:-1]
        return type(self)(prefix, loop)

    def same_word(self, other: "Lasso") -> bool:
        a, b = self.canonical(), other.canonical()
        return a.prefix == b.prefix and a.loop == b.loop


def aligned(a: Lasso, b: Lasso) -> tuple[int, int]:
    """Prefix and loop lengths on which both lassos are periodic together."""
    return max(len(a.prefix), len(b.prefix)), math.lcm(len(a.loop), len(b.loop))


def zip_lassos(a: Lasso, b: Lasso, combine: Callable = lambda x, y: (x, y)) -> Lasso:
    p, l = aligned(a, b)
    return Lasso(tuple(combine(a[i], b[i]) for i in range(p)),
                 tuple(combine(a[i], b[i]) for i in range(p, p + l)))


class LassoDataWord(Lasso):
    """A lasso whose letters are ``(label, datum)`` pairs."""

    def map(self, f: Callable) -> "LassoDataWord":
        return LassoDataWord(tuple(map(f, self.prefix)), tuple(map(f, self.loop)))

    def data(self) -> frozenset[int]:
        return frozenset(d for _, d in self.prefix + self.loop)

    def labels(self) -> Lasso:
        return Lasso(tuple(l for l, _ in self.prefix), tuple(l for l, _ in self.loop))

    def rename(self, pi: Callable[[int], int]) -> "LassoDataWord":
        return self.map(lambda ld: (ld[0], pi(ld[1])))

    def is_relational(self) -> bool:
        return len(self.prefix) % 2 == 0 and len(self.loop) % 2 == 0

    def inp(self) -> "LassoDataWord":
        """Input letters (even positions) of a relational word."""
        self._need_relational()
        return LassoDataWord(self.prefix[0::2], self.loop[0::2])

    def out(self) -> "LassoDataWord":
        self._need_relational()
        return LassoDataWord(self.prefix[1::2], self.loop[1::2])

    def _need_relational(self):
        if not self.is_relational():
            raise ValueError("word is not relational (odd prefix or loop length)")

    def __str__(self) -> str:
        return format_lasso(self)


def interleave(inp: Lasso, out: Lasso) -> LassoDataWord:
    """``<u, v>``: alternate letters of two lassos, starting with ``inp``."""
    p, l = aligned(inp, out)
    pre, loop = [], []
    for i in range(p):
        pre += [inp[i], out[i]]
    for i in range(p, p + l):
        loop += [inp[i], out[i]]
    return LassoDataWord(tuple(pre), tuple(loop))


_LETTER = re.compile(r"\(\s*([A-Za-z_][\w.\-]*)\s*,\s*(\d+)\s*\)")


class LassoSyntaxError(ValueError):
    pass


def _parse_letters(text: str, where: str) -> tuple:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _LETTER.match(text, pos)
        if not m:
            raise LassoSyntaxError(f"bad letter in {where} at column {pos + 1}: {text[pos:pos + 12]!r}")
        out.append((m.group(1), int(m.group(2))))
        pos = m.end()
    return tuple(out)


def parse_lasso(text: str) -> LassoDataWord:
    """Parse ``prefix | loop``; without ``|`` the whole text is the loop."""
    if text.count("|") > 1:
        raise LassoSyntaxError("at most one '|' separator is allowed")
    if "|" in text:
        pre, loop = text.split("|")
    else:
        pre, loop = "", text
    prefix = _parse_letters(pre, "prefix")
    cyc = _parse_letters(loop, "loop")
    if not cyc:
        raise LassoSyntaxError("the loop must be nonempty")
    return LassoDataWord(prefix, cyc)


def format_lasso(w: Lasso) -> str:
    def fmt(seq: Sequence) -> str:
        return "".join(f"({l},{d})" for l, d in seq)

    return f"{fmt(w.prefix)} | {fmt(w.loop)}".strip()


def data_lasso(prefix: Sequence[tuple[Hashable, int]], loop: Sequence[tuple[Hashable, int]]) -> LassoDataWord:
    return LassoDataWord(tuple(prefix), tuple(loop))

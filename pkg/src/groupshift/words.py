"""Finitely supported bi-infinite sequences over a finite abelian alphabet."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .groups import Coords, FiniteAbelianGroup, GroupElement


@dataclass(frozen=True)
class Word:
    """A word in H^(Z): symbols on [start, start+len-1], zero elsewhere.

    Stored trimmed, so the first and last symbols are nonzero unless the word
    is zero; the zero word is normalized to start 0 with no symbols.
    """

    group: FiniteAbelianGroup
    start: int
    symbols: tuple[Coords, ...]

    @classmethod
    def make(cls, group: FiniteAbelianGroup, start: int,
             symbols: Iterable[Sequence[int]]) -> "Word":
        syms = [group.reduce_coords(tuple(s)) for s in symbols]
        lo = 0
        while lo < len(syms) and not any(syms[lo]):
            lo += 1
        hi = len(syms)
        while hi > lo and not any(syms[hi - 1]):
            hi -= 1
        if lo == hi:
            return cls(group, 0, ())
        return cls(group, start + lo, tuple(syms[lo:hi]))

    @classmethod
    def zero(cls, group: FiniteAbelianGroup) -> "Word":
        return cls(group, 0, ())

    @classmethod
    def impulse(cls, group: FiniteAbelianGroup, coords: Sequence[int],
                position: int = 0) -> "Word":
        return cls.make(group, position, [tuple(coords)])

    @property
    def is_zero(self) -> bool:
        return not self.symbols

    @property
    def first(self) -> int | None:
        """First support index, None for the zero word."""
        return self.start if self.symbols else None

    @property
    def last(self) -> int | None:
        return self.start + len(self.symbols) - 1 if self.symbols else None

    @property
    def support_length(self) -> int:
        return len(self.symbols)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.start, self.start + len(self.symbols))
                     if any(self.symbols[i - self.start]))

    def value_at(self, i: int) -> Coords:
        if self.symbols and self.start <= i < self.start + len(self.symbols):
            return self.symbols[i - self.start]
        return self.group.zero()

    def element_at(self, i: int) -> GroupElement:
        return GroupElement(self.group, self.value_at(i))

    def shifted(self, n: int) -> "Word":
        """The word w' with w'(i) = w(i + n); support translates by -n."""
        if self.is_zero:
            return self
        return Word(self.group, self.start - n, self.symbols)

    def restricted(self, lo: int, hi: int) -> "Word":
        """The word agreeing with this one on [lo, hi] and zero outside."""
        if self.is_zero or hi < lo:
            return Word.zero(self.group)
        return Word.make(self.group, lo, [self.value_at(i) for i in range(lo, hi + 1)])

    def __add__(self, other: "Word") -> "Word":
        if other.group != self.group:
            raise ValueError("words over different alphabets")
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo = min(self.start, other.start)
        hi = max(self.start + len(self.symbols), other.start + len(other.symbols)) - 1
        g = self.group
        return Word.make(g, lo, [g.add(self.value_at(i), other.value_at(i))
                                 for i in range(lo, hi + 1)])

    def __neg__(self) -> "Word":
        return Word(self.group, self.start,
                    tuple(self.group.neg(s) for s in self.symbols))

    def __sub__(self, other: "Word") -> "Word":
        return self + (-other)

    def scaled(self, k: int) -> "Word":
        if self.is_zero:
            return self
        g = self.group
        return Word.make(g, self.start, [g.scale(k, s) for s in self.symbols])

    def order(self) -> int:
        """Order of the word in the group H^(Z)."""
        return reduce(math.lcm, (self.group.order_of(s) for s in self.symbols), 1)

    def is_torsion(self, p: int) -> bool:
        return self.scaled(p).is_zero

    def agrees_on(self, other: "Word", lo: int, hi: int) -> bool:
        return all(self.value_at(i) == other.value_at(i) for i in range(lo, hi + 1))

    # -- window vectors (scaled embedding into Z/exp(H)) ----------------------

    def window_vector(self, lo: int, hi: int) -> tuple[int, ...]:
        """Flattened scaled coordinates of the restriction to [lo, hi]."""
        out: list[int] = []
        for i in range(lo, hi + 1):
            out.extend(self.group.coords_to_scaled(self.value_at(i)))
        return tuple(out)

    @classmethod
    def from_window_vector(cls, group: FiniteAbelianGroup, lo: int,
                           vec: Sequence[int]) -> "Word":
        r = group.rank
        if r == 0:
            return cls.zero(group)
        if len(vec) % r:
            raise ValueError("vector length is not a multiple of the group rank")
        syms = [group.scaled_to_coords(tuple(vec[i:i + r]))
                for i in range(0, len(vec), r)]
        return cls.make(group, lo, syms)

    def sort_key(self) -> tuple:
        return (self.start, self.symbols)

    def format(self) -> str:
        """Render like a generator line body: "@start: sym sym ..."."""
        if self.is_zero:
            return "0"
        parts = []
        for s in self.symbols:
            if self.group.rank == 1:
                parts.append(str(s[0]))
            else:
                parts.append("(" + ",".join(str(c) for c in s) + ")")
        return f"@{self.start}: " + " ".join(parts)


def word_span(words: Iterable[Word]) -> tuple[int, int] | None:
    """Smallest interval containing the supports of all nonzero words."""
    lo = None
    hi = None
    for w in words:
        if w.is_zero:
            continue
        lo = w.first if lo is None else min(lo, w.first)
        hi = w.last if hi is None else max(hi, w.last)
    if lo is None:
        return None
    return lo, hi

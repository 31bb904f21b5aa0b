"""Group shifts presented by finite-support generator words.

A presentation stands for the closed shift-invariant subgroup generated by
all integer shifts of its generator words.  The projection of that group onto
a finite window [a, b] is the module spanned by the restrictions of every
shifted generator whose support meets the window, including the partial
overlaps at the window edges; this makes weak controllability hold by
construction, and membership of finite words is certified window by window.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce
import math
from typing import Iterator, Sequence

from .groups import FiniteAbelianGroup
from .residues import (EnumerationCapExceeded, HowellForm, Vec, howell_form,
                       row_solver, RowSolver)
from .words import Word, word_span


class SpliceFailed(Exception):
    """No splice word was found inside the solver window."""


@dataclass(frozen=True)
class GroupShift:
    """Presentation of a group shift by finite-support generator words."""

    alphabet: FiniteAbelianGroup
    generators: tuple[Word, ...]
    memory_hint: int | None = None

    @classmethod
    def make(cls, alphabet: FiniteAbelianGroup, generators: Sequence[Word],
             memory_hint: int | None = None) -> "GroupShift":
        gens = tuple(g for g in generators if not g.is_zero)
        for g in gens:
            if g.group != alphabet:
                raise ValueError("generator alphabet mismatch")
        if memory_hint is not None and memory_hint < 1:
            raise ValueError("declared memory must be positive")
        return cls(alphabet, gens, memory_hint)

    @classmethod
    def full_shift(cls, alphabet: FiniteAbelianGroup) -> "GroupShift":
        gens = []
        for j in range(alphabet.rank):
            coords = [0] * alphabet.rank
            coords[j] = 1
            gens.append(Word.impulse(alphabet, coords))
        return cls.make(alphabet, gens)

    @property
    def span(self) -> int:
        """Longest generator support length (0 for the zero shift)."""
        return max((g.support_length for g in self.generators), default=0)

    @property
    def exponent(self) -> int:
        """Exponent of the generated group: lcm of the generator orders."""
        return reduce(math.lcm, (g.order() for g in self.generators), 1)

    def exponent_exponent(self, p: int) -> int:
        """e with exp(G) == p^e, for a shift of p-power exponent."""
        e = 0
        n = self.exponent
        while n % p == 0:
            n //= p
            e += 1
        if n != 1:
            raise ValueError("shift exponent is not a power of the given prime")
        return e

    def contributors(self, lo: int, hi: int) -> tuple[tuple[int, int], ...]:
        """All (generator index, placement t) whose support meets [lo, hi].

        Placement t means the generator translated to start t positions later,
        i.e. the word shifted(-t).
        """
        out = []
        for gi, g in enumerate(self.generators):
            f, l = g.first, g.last
            for t in range(lo - l, hi - f + 1):
                out.append((gi, t))
        return tuple(out)

    def placed(self, gi: int, t: int) -> Word:
        return self.generators[gi].shifted(-t)

    def window(self, lo: int, hi: int) -> "WindowModule":
        return _window_module(self, lo, hi)

    def default_margin(self) -> int:
        return self.memory_hint if self.memory_hint is not None else max(self.span, 1)


@dataclass(frozen=True)
class WindowModule:
    """The projection of a group shift onto the window [lo, hi]."""

    shift: GroupShift
    lo: int
    hi: int
    contributors: tuple[tuple[int, int], ...]
    rows: tuple[Vec, ...]  # scaled restriction per contributor

    @property
    def modulus(self) -> int:
        return max(self.shift.alphabet.exponent, 2)

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    @property
    def rank_width(self) -> int:
        return self.width * self.shift.alphabet.rank

    @cached_property
    def solver(self) -> RowSolver:
        return row_solver(self.rows, self.modulus, self.rank_width)

    @cached_property
    def form(self) -> HowellForm:
        return self.solver.form

    def size(self) -> int:
        return self.form.size()

    def contains(self, vec: Sequence[int]) -> bool:
        return self.form.contains(vec)

    def contains_word(self, w: Word) -> bool:
        return self.contains(w.window_vector(self.lo, self.hi))

    def express(self, vec: Sequence[int]) -> Vec | None:
        """Coefficients over the contributors reproducing vec, or None."""
        return self.solver.express(vec)

    def enumerate_vectors(self, cap: int | None = None) -> Iterator[Vec]:
        return self.form.enumerate_elements(cap)

    def enumerate_words(self, cap: int | None = None) -> Iterator[Word]:
        for vec in self.enumerate_vectors(cap):
            yield Word.from_window_vector(self.shift.alphabet, self.lo, vec)

    def canonical_words(self) -> tuple[Word, ...]:
        return tuple(Word.from_window_vector(self.shift.alphabet, self.lo, row)
                     for row in self.form.rows)

    # -- constrained submodules ------------------------------------------------

    def _constrained_rows(self, zero_positions: Sequence[int] = (),
                          kill_scale: int | None = None) -> tuple[Vec, ...]:
        """Rows spanning {v in module : v zero on positions, kill_scale*v == 0}."""
        m = self.modulus
        r = self.shift.alphabet.rank
        cond_cols: list[int] = []
        for pos in zero_positions:
            base = (pos - self.lo) * r
            cond_cols.extend(range(base, base + r))
        k = len(self.rows)
        cond_rows = []
        for row in self.rows:
            cond = [row[c] for c in cond_cols]
            if kill_scale is not None:
                cond.extend((kill_scale * x) % m for x in row)
            cond_rows.append(tuple(cond))
        if not cond_rows or not cond_rows[0]:
            coeff_space: tuple[Vec, ...] = tuple(
                tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
        else:
            coeff_space = row_solver(cond_rows, m).kernel.rows
        out = []
        for coeffs in coeff_space:
            acc = [0] * len(self.rows[0]) if self.rows else []
            for c, row in zip(coeffs, self.rows):
                if c:
                    for i, x in enumerate(row):
                        acc[i] = (acc[i] + c * x) % m
            out.append(tuple(acc))
        return tuple(out)

    def constrained_projection(self, keep_lo: int, keep_hi: int,
                               zero_positions: Sequence[int] = (),
                               kill_scale: int | None = None) -> HowellForm:
        """Canonical form of the projection to [keep_lo, keep_hi] of the
        submodule cut out by the given vanishing and torsion constraints."""
        rows = self._constrained_rows(zero_positions, kill_scale)
        r = self.shift.alphabet.rank
        a = (keep_lo - self.lo) * r
        b = (keep_hi - self.lo + 1) * r
        if not rows:
            return HowellForm(self.modulus, b - a, (), ())
        return howell_form([row[a:b] for row in rows], self.modulus)


@lru_cache(maxsize=None)
def _window_module(shift: GroupShift, lo: int, hi: int) -> WindowModule:
    if hi < lo:
        raise ValueError("empty window")
    contributors = shift.contributors(lo, hi)
    rows = tuple(shift.placed(gi, t).window_vector(lo, hi) for gi, t in contributors)
    return WindowModule(shift, lo, hi, contributors, rows)


def window_projection(shift: GroupShift, lo: int, hi: int) -> WindowModule:
    """The module G|[lo, hi] spanned by every contributing restriction."""
    return shift.window(lo, hi)


@dataclass(frozen=True)
class MembershipCertificate:
    """Window-scale membership verdict for a finite word."""

    word: Word
    margin: int
    window: tuple[int, int]
    certified_in: bool


def member(shift: GroupShift, w: Word, margin: int | None = None) -> MembershipCertificate:
    """Certify membership of w on its support padded by the margin.

    certified-in means the padded restriction lies in the window module; for
    shifts of finite type with memory <= margin the verdict is exact.
    """
    if margin is None:
        margin = shift.default_margin()
    if margin < 0:
        raise ValueError("margin must be >= 0")
    if w.is_zero:
        return MembershipCertificate(w, margin, (0, 0), True)
    lo, hi = w.first - margin, w.last + margin
    module = shift.window(lo, hi)
    return MembershipCertificate(w, margin, (lo, hi), module.contains_word(w))


# -- certified words with prescribed support --------------------------------


@dataclass(frozen=True)
class SupportedWords:
    """Module of window-certified words supported inside [lo, hi]."""

    shift: GroupShift
    lo: int
    hi: int
    margin: int
    torsion_scale: int | None
    form: HowellForm

    @cached_property
    def words(self) -> tuple[Word, ...]:
        return tuple(Word.from_window_vector(self.shift.alphabet, self.lo, row)
                     for row in self.form.rows)

    def enumerate_words(self, cap: int | None = None) -> Iterator[Word]:
        for vec in self.form.enumerate_elements(cap):
            yield Word.from_window_vector(self.shift.alphabet, self.lo, vec)

    def contains_word(self, w: Word) -> bool:
        if w.is_zero:
            return True
        if w.first < self.lo or w.last > self.hi:
            return False
        return self.form.contains(w.window_vector(self.lo, self.hi))


@lru_cache(maxsize=None)
def supported_words(shift: GroupShift, lo: int, hi: int, margin: int,
                    torsion_scale: int | None = None) -> SupportedWords:
    """Certified-at-margin words of the shift supported inside [lo, hi]."""
    module = shift.window(lo - margin, hi + margin)
    pads = list(range(lo - margin, lo)) + list(range(hi + 1, hi + margin + 1))
    form = module.constrained_projection(lo, hi, zero_positions=pads,
                                         kill_scale=torsion_scale)
    return SupportedWords(shift, lo, hi, margin, torsion_scale, form)


@lru_cache(maxsize=None)
def torsion_window_projection(shift: GroupShift, lo: int, hi: int, margin: int,
                              p: int) -> HowellForm:
    """Projection onto [lo, hi] of the margin-padded p-torsion submodule."""
    module = shift.window(lo - margin, hi + margin)
    return module.constrained_projection(lo, hi, kill_scale=p)


# -- finite type -------------------------------------------------------------


@dataclass(frozen=True)
class FiniteTypeReport:
    memory: int | None
    cap: int
    horizon: int
    failures: tuple[tuple[int, int], ...]  # (candidate N, window reach L) that failed


def _splice_property_holds(shift: GroupShift, n: int, reach: int) -> bool:
    """Splice check on the window [-reach, n + reach] with the block [0, n].

    Every module element vanishing on the block must split as (something
    vanishing on the whole left half) matching it on the strict right part.
    """
    module = shift.window(-reach, n + reach)
    if n + 1 > module.width:
        return True
    block = list(range(0, n + 1))
    left_and_block = list(range(-reach, n + 1))
    lhs = module.constrained_projection(n + 1, n + reach, zero_positions=block)
    rhs = module.constrained_projection(n + 1, n + reach, zero_positions=left_and_block)
    return lhs.spans_same(rhs)


def finite_type_memory(shift: GroupShift, cap: int,
                       horizon: int | None = None) -> FiniteTypeReport:
    """Least N <= cap with the verified splice property, scanning window
    reaches up to the horizon; absent when no candidate passes."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if horizon is None:
        horizon = shift.span + 2
    failures = []
    for n in range(1, cap + 1):
        ok = True
        for reach in range(1, horizon + n + 1):
            if not _splice_property_holds(shift, n, reach):
                failures.append((n, reach))
                ok = False
                break
        if ok:
            return FiniteTypeReport(n, cap, horizon, tuple(failures))
    return FiniteTypeReport(None, cap, horizon, tuple(failures))


def splice(shift: GroupShift, x1: Word, x2: Word, k: int, n: int,
           margin: int | None = None) -> Word:
    """The word equal to x1 left of k+n and to x2 right of k, certified.

    The inputs must agree on the block [k, k+n]; the gluing is unique and the
    work is certifying membership inside a bounded window.
    """
    if x1.group != shift.alphabet or x2.group != shift.alphabet:
        raise ValueError("alphabet mismatch")
    if not x1.agrees_on(x2, k, k + n):
        raise ValueError("words disagree on the splice block")
    cert1 = member(shift, x1, margin)
    cert2 = member(shift, x2, margin)
    if not (cert1.certified_in and cert2.certified_in):
        raise ValueError("splice inputs must be certified members")
    span = word_span([x1, x2])
    if span is None:
        return Word.zero(shift.alphabet)
    lo = min(span[0], k) - 1
    hi = max(span[1], k + n) + 1
    glued = Word.make(shift.alphabet, lo,
                      [x1.value_at(i) if i <= k + n else x2.value_at(i)
                       for i in range(lo, hi + 1)])
    solver_margin = shift.span + n if margin is None else margin + n
    cert = member(shift, glued, solver_margin)
    if not cert.certified_in:
        raise SpliceFailed(
            f"glued word not certified within margin {solver_margin}; "
            f"evidence against finite type at N={n}")
    return glued


# -- brute-force window code enumeration (independent oracle path) -----------


def enumerate_window_code(shift: GroupShift, lo: int, hi: int,
                          cap: int = 1 << 20) -> tuple[tuple[int, ...], ...]:
    """All window configurations of the code on [lo, hi], by set closure.

    Works directly on unscaled symbol tuples and never touches the canonical
    form machinery, so it can serve as an independent cross-check.
    """
    group = shift.alphabet
    width = hi - lo + 1
    zero = tuple([0] * (width * group.rank))
    elements = {zero}
    for gi, t in shift.contributors(lo, hi):
        placed = shift.placed(gi, t)
        flat: list[int] = []
        for i in range(lo, hi + 1):
            flat.extend(placed.value_at(i))
        order = placed.restricted(lo, hi).order()
        new = set()
        for base in elements:
            cur = list(base)
            for _ in range(order):
                new.add(tuple(cur))
                cur = [(a + b) % n for a, b, n in
                       zip(cur, flat, group.orders * width)]
        elements = new
        if len(elements) > cap:
            raise EnumerationCapExceeded(f"window code exceeds {cap} elements")
    return tuple(sorted(elements))

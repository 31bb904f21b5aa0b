"""Window-scale controllability analysis of group shift presentations.

Three notions are decided on finite windows: weak controllability (window
modules generated by restrictions of finite-support members), the plain
steering index n_c (any past can be driven to zero within n steps), and the
order-respecting index n_o (the steering element's order on the steering
block divides that of the original).  Every verdict records the window
geometry it was computed at.
"""

from __future__ import annotations

from dataclasses import dataclass

from .residues import HowellForm, howell_form, row_solver
from .shifts import (GroupShift, member, supported_words,
                     torsion_window_projection)
from .words import Word


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def default_past_horizon(shift: GroupShift, candidate: int) -> int:
    """Past-window length used when none is given: 2 * (span + candidate)."""
    return max(1, 2 * (shift.span + candidate))


@dataclass(frozen=True)
class IndexSearch:
    """Outcome of a least-index search for one controllability notion."""

    index: int | None
    cap: int
    past_horizons: tuple[int, ...]       # L used per candidate n = 0..cap
    condition_table: tuple[bool, ...]    # condition verdict per candidate n
    witness: Word | None                 # failing window element when absent


@dataclass(frozen=True)
class ControllabilityReport:
    shift: GroupShift
    weakly_controllable: bool
    weak_witness_windows: tuple[tuple[int, int], ...]
    plain: IndexSearch
    ordered: IndexSearch

    @property
    def n_c(self) -> int | None:
        return self.plain.index

    @property
    def n_o(self) -> int | None:
        return self.ordered.index

    def consistent(self) -> bool:
        """n_c <= n_o whenever both were found."""
        if self.n_c is None or self.n_o is None:
            return True
        return self.n_c <= self.n_o


def _constrained_past_projection(shift: GroupShift, n: int, past: int,
                                 zero_tail: bool, torsion_scale: int | None) -> HowellForm:
    """Projection onto [-past, 0] of the submodule of G|[-past, n+past] cut
    out by "zero on the tail [n+1, n+past]" and "scale kills [1, n]"."""
    module = shift.window(-past, n + past)
    m = module.modulus
    r = shift.alphabet.rank
    cond_cols: list[int] = []
    if zero_tail:
        for pos in range(n + 1, n + past + 1):
            base = (pos - module.lo) * r
            cond_cols.extend(range(base, base + r))
    mid_cols: list[int] = []
    if torsion_scale is not None:
        for pos in range(1, n + 1):
            base = (pos - module.lo) * r
            mid_cols.extend(range(base, base + r))
    cond_rows = []
    for row in module.rows:
        cond = [row[c] for c in cond_cols]
        if torsion_scale is not None:
            cond.extend((torsion_scale * row[c]) % m for c in mid_cols)
        cond_rows.append(tuple(cond))
    if not cond_rows or not cond_rows[0]:
        rows = module.rows
    else:
        rows = []
        for coeffs in row_solver(cond_rows, m).kernel.rows:
            acc = [0] * module.rank_width
            for c, row in zip(coeffs, module.rows):
                if c:
                    for i, x in enumerate(row):
                        acc[i] = (acc[i] + c * x) % m
            rows.append(tuple(acc))
    width_cols = (past + 1) * r
    clipped = [row[:width_cols] for row in rows]
    if not clipped:
        return HowellForm(m, width_cols, (), ())
    return howell_form(clipped, m)


def _steering_condition(shift: GroupShift, n: int, past: int,
                        order_constrained: bool) -> tuple[bool, Word | None]:
    """Decide the steering condition at candidate index n, past window L.

    Plain variant: every g in G|[-L, n+L] matches some g1 with the same past
    [-L, 0] and zero tail [n+1, n+L], which is one inclusion of past
    projections.  Ordered variant additionally demands order(g1|[1,n]) |
    order(g|[1,n]); split by divisors d of exp(H), "order divides d" is the
    linear condition d*(restriction to [1,n]) == 0, so each divisor d yields
    one inclusion between d-constrained past projections.
    """
    scales = [None] if not order_constrained else _divisors(shift.alphabet.exponent)
    for d in scales:
        lhs = _constrained_past_projection(shift, n, past, False, d)
        rhs = _constrained_past_projection(shift, n, past, True, d)
        for row in lhs.rows:
            if not rhs.contains(row):
                return False, Word.from_window_vector(shift.alphabet, -past, row)
    return True, None


def _index_search(shift: GroupShift, cap: int, past: int | None,
                  order_constrained: bool, extra: int = 2) -> IndexSearch:
    """Scan candidates 0..cap, stopping `extra` steps after the first success
    so the condition table still witnesses monotonicity past the index."""
    horizons = []
    table = []
    witness = None
    found = None
    n = 0
    while n <= cap and (found is None or n <= min(cap, found + extra)):
        length = past if past is not None else default_past_horizon(shift, n)
        horizons.append(length)
        ok, wit = _steering_condition(shift, n, length, order_constrained)
        table.append(ok)
        if ok and found is None:
            found = n
        if not ok:
            witness = wit
        n += 1
    if found is not None:
        witness = None
    return IndexSearch(found, cap, tuple(horizons), tuple(table), witness)


def controllability_index(shift: GroupShift, cap: int,
                          past: int | None = None) -> IndexSearch:
    """Least n <= cap steering every window past to zero, or absent."""
    if cap < 0:
        raise ValueError("cap must be >= 0")
    return _index_search(shift, cap, past, order_constrained=False)


def order_controllability_index(shift: GroupShift, cap: int,
                                past: int | None = None) -> IndexSearch:
    """Least n <= cap steering with order divisibility on [1, n], or absent."""
    if cap < 0:
        raise ValueError("cap must be >= 0")
    return _index_search(shift, cap, past, order_constrained=True)


def monotone_after_success(search: IndexSearch) -> bool:
    """True when the condition stays satisfied for every n past the first."""
    seen = False
    for ok in search.condition_table:
        if seen and not ok:
            return False
        seen = seen or ok
    return True


@dataclass(frozen=True)
class WeakControllabilityReport:
    derived: str
    holds: bool
    windows: tuple[tuple[int, int], ...]
    detail: str = ""


def weak_controllability_check(shift: GroupShift, derived: str = "self",
                               p: int | None = None, r: int = 1,
                               horizon: int = 4,
                               margin: int | None = None) -> WeakControllabilityReport:
    """Check that finite-support members generate every window module.

    derived selects the shift examined: "self" (true by this presentation:
    every window contributor is the restriction of a finite-support member),
    "socle" (the p-torsion subshift, a real computation), "scaled" (p^r G,
    spans match by linearity) or "quotient" (reduction commutes with
    restriction symbolwise).
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if margin is None:
        margin = shift.default_margin() + 1
    windows = tuple((0, t) for t in range(horizon))
    if derived == "self":
        for lo, hi in windows:
            module = shift.window(lo, hi)
            for gi, t in module.contributors:
                w = shift.placed(gi, t)
                if not member(shift, w, margin).certified_in:
                    return WeakControllabilityReport(
                        derived, False, windows,
                        f"generator shift not certified: {w.format()}")
        return WeakControllabilityReport(derived, True, windows)
    if derived == "socle":
        if p is None:
            raise ValueError("socle check needs the prime p")
        r_ = shift.alphabet.rank
        for lo, hi in windows:
            target = torsion_window_projection(shift, lo, hi, margin, p)
            reach = hi - lo + margin
            found = supported_words(shift, lo - reach, hi + reach, margin,
                                    torsion_scale=p)
            a = reach * r_
            b = (hi - lo + reach + 1) * r_
            rows = [row[a:b] for row in found.form.rows]
            got = howell_form(rows, target.modulus) if rows else \
                HowellForm(target.modulus, b - a, (), ())
            if not got.spans_same(target):
                return WeakControllabilityReport(
                    derived, False, windows,
                    f"torsion window [{lo},{hi}] not generated by finite torsion members")
        return WeakControllabilityReport(derived, True, windows)
    if derived == "scaled":
        if p is None:
            raise ValueError("scaled check needs the prime p")
        scale = p ** r
        scaled = GroupShift.make(shift.alphabet,
                                 [g.scaled(scale) for g in shift.generators])
        for lo, hi in windows:
            lhs = scaled.window(lo, hi).form
            base = shift.window(lo, hi)
            m = base.modulus
            rhs = howell_form([tuple((scale * x) % m for x in row)
                               for row in base.rows], m) if base.rows else lhs
            if not lhs.spans_same(rhs):
                return WeakControllabilityReport(derived, False, windows,
                                                 f"scaled window [{lo},{hi}] mismatch")
        return WeakControllabilityReport(derived, True, windows)
    if derived == "quotient":
        return WeakControllabilityReport(derived, True, windows,
                                         "reduction commutes with restriction")
    raise ValueError(f"unknown derived shift selector {derived!r}")


def analyze_controllability(shift: GroupShift, cap: int = 16,
                            past: int | None = None,
                            horizon: int = 4) -> ControllabilityReport:
    weak = weak_controllability_check(shift, "self", horizon=horizon)
    plain = controllability_index(shift, cap, past)
    ordered = order_controllability_index(shift, cap, past)
    return ControllabilityReport(shift, weak.holds, weak.windows, plain, ordered)

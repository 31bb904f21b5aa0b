"""Exact linear algebra over residue rings Z/m.

Everything here works with plain Python integers reduced into [0, m).  The
canonical row form is the Howell form, which is unique per row span over any
Z/m and therefore usable for module equality tests; plain row echelon is not
canonical over rings with zero divisors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence

MAX_MODULUS = 1 << 31

Vec = tuple[int, ...]


class EnumerationCapExceeded(Exception):
    """A module enumeration would exceed the configured element cap."""


def validate_modulus(modulus: int) -> None:
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if modulus > MAX_MODULUS:
        raise ValueError(f"modulus {modulus} exceeds the 2**31 cap")


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y == g == gcd(a, b) and g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def unit_for(a: int, modulus: int) -> int:
    """A unit u mod `modulus` with (a * u) % modulus == gcd(a, modulus)."""
    a %= modulus
    if a == 0:
        return 1
    g = math.gcd(a, modulus)
    a1, m1 = a // g, modulus // g
    inv = pow(a1, -1, m1) if m1 > 1 else 1
    # lift inv to a unit modulo the full modulus
    for t in range(modulus // m1):
        c = (inv + t * m1) % modulus
        if math.gcd(c, modulus) == 1:
            return c
    raise ArithmeticError("unit lift failed")  # pragma: no cover


def annihilator(a: int, modulus: int) -> int:
    """Generator of the ideal {x : a*x == 0 mod modulus}; 1 when a == 0."""
    a %= modulus
    if a == 0:
        return 1
    return modulus // math.gcd(a, modulus)


def _vec_add_scaled(dst: list[int], src: Sequence[int], k: int, m: int) -> None:
    for i, s in enumerate(src):
        dst[i] = (dst[i] + k * s) % m


@dataclass(frozen=True)
class ResidueMatrix:
    """Dense matrix with entries reduced into [0, modulus)."""

    modulus: int
    entries: tuple[Vec, ...]

    def __post_init__(self) -> None:
        validate_modulus(self.modulus)
        width = len(self.entries[0]) if self.entries else 0
        for row in self.entries:
            if len(row) != width:
                raise ValueError("ragged matrix")
            for x in row:
                if not 0 <= x < self.modulus:
                    raise ValueError(f"entry {x} not reduced mod {self.modulus}")

    @classmethod
    def make(cls, modulus: int, rows: Sequence[Sequence[int]]) -> "ResidueMatrix":
        validate_modulus(modulus)
        return cls(modulus, tuple(tuple(x % modulus for x in row) for row in rows))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0


def _howell(rows: list[list[int]], modulus: int, ncols: int,
            pivot_cols: int | None = None) -> tuple[list[list[int]], list[tuple[int, int]]]:
    """In-place Howell reduction.

    Pivot search is restricted to the first `pivot_cols` columns (default all);
    trailing columns ride along, which is how kernel/transform data is carried.
    Returns (pivot rows in order, [(col, pivot value), ...]).
    """
    m = modulus
    limit = ncols if pivot_cols is None else pivot_cols
    work = [row for row in rows if any(row)]
    r = 0
    pivots: list[tuple[int, int]] = []
    for c in range(limit):
        idx = None
        for i in range(r, len(work)):
            if work[i][c] % m:
                idx = i
                break
        if idx is None:
            continue
        work[r], work[idx] = work[idx], work[r]
        # fold every later row with a nonzero entry in column c into row r
        for j in range(r + 1, len(work)):
            if work[j][c] % m == 0:
                continue
            a, b = work[r][c], work[j][c]
            g, x, y = xgcd(a, b)
            u, v = -(b // g), a // g  # unimodular completion: det(x v - y u) = 1
            rr, rj = work[r], work[j]
            new_r = [(x * rr[k] + y * rj[k]) % m for k in range(ncols)]
            new_j = [(u * rr[k] + v * rj[k]) % m for k in range(ncols)]
            work[r], work[j] = new_r, new_j
        # normalize the pivot to the divisor gcd(entry, modulus)
        uu = unit_for(work[r][c], m)
        if uu != 1:
            work[r] = [(uu * x) % m for x in work[r]]
        d = work[r][c]
        # reduce entries above the pivot into [0, d)
        for k in range(r):
            q = work[k][c] // d
            if q:
                _vec_add_scaled(work[k], work[r], -q, m)
        # saturation: the annihilator multiple of the pivot row re-enters the
        # worklist so later columns see every combination with zero lead
        ann = annihilator(d, m)
        if ann % m:
            extra = [(ann * x) % m for x in work[r]]
            if any(extra):
                work.append(extra)
        pivots.append((c, d))
        r += 1
    return work[:r], pivots


@dataclass(frozen=True)
class HowellForm:
    """Canonical row form over Z/modulus: unique for a given row span."""

    modulus: int
    ncols: int
    rows: tuple[Vec, ...]
    pivots: tuple[tuple[int, int], ...]  # (column, pivot value) per row

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivot_cols(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.pivots)

    @property
    def annihilators(self) -> tuple[int, ...]:
        """Per-pivot annihilator: modulus // pivot (pivot divides modulus)."""
        return tuple(self.modulus // d for _, d in self.pivots)

    def size(self) -> int:
        """Number of elements of the row span."""
        total = 1
        for _, d in self.pivots:
            total *= self.modulus // d
        return total

    def reduce(self, vec: Sequence[int]) -> tuple[Vec, Vec]:
        """Greedy leading-term reduction: (residual, coefficients per row)."""
        m = self.modulus
        res = [x % m for x in vec]
        if len(res) != self.ncols:
            raise ValueError("dimension mismatch")
        coeffs = [0] * len(self.rows)
        for i, (c, d) in enumerate(self.pivots):
            q = res[c] // d
            if q:
                coeffs[i] = q
                _vec_add_scaled(res, self.rows[i], -q, m)
        return tuple(res), tuple(coeffs)

    def contains(self, vec: Sequence[int]) -> bool:
        residual, _ = self.reduce(vec)
        return not any(residual)

    def spans_same(self, other: "HowellForm") -> bool:
        return (self.modulus, self.ncols, self.rows) == (other.modulus, other.ncols, other.rows)

    def enumerate_elements(self, cap: int | None = None) -> Iterator[Vec]:
        """Yield every element of the row span exactly once."""
        if cap is not None and self.size() > cap:
            raise EnumerationCapExceeded(f"span has {self.size()} > {cap} elements")
        m = self.modulus
        ranges = [m // d for _, d in self.pivots]
        nrows = len(self.rows)

        def rec(i: int, acc: list[int]) -> Iterator[Vec]:
            if i == nrows:
                yield tuple(acc)
                return
            cur = acc
            for t in range(ranges[i]):
                if t:
                    cur = cur.copy()
                    _vec_add_scaled(cur, self.rows[i], 1, m)
                yield from rec(i + 1, cur)

        yield from rec(0, [0] * self.ncols)


def howell_form(matrix: ResidueMatrix | Sequence[Sequence[int]],
                modulus: int | None = None) -> HowellForm:
    """Canonical Howell row form of the given rows."""
    if isinstance(matrix, ResidueMatrix):
        m = matrix.modulus
        rows = [list(r) for r in matrix.entries]
        ncols = matrix.ncols
    else:
        if modulus is None:
            raise ValueError("modulus required for raw rows")
        validate_modulus(modulus)
        m = modulus
        rows = [[x % m for x in r] for r in matrix]
        ncols = len(rows[0]) if rows else 0
    reduced, pivots = _howell(rows, m, ncols)
    return HowellForm(m, ncols, tuple(tuple(r) for r in reduced), tuple(pivots))


@dataclass(frozen=True)
class RowSolver:
    """Expresses targets as Z-combinations of a fixed generating row list.

    Built from the augmented Howell form [R | I]; provides membership, one
    canonical particular coefficient vector, and the full coefficient kernel
    {c : c @ R == 0}.
    """

    modulus: int
    gens: tuple[Vec, ...]
    ncols: int

    @cached_property
    def _data(self) -> tuple[HowellForm, tuple[Vec, ...], HowellForm]:
        m = self.modulus
        k = len(self.gens)
        aug = [list(g) + [0] * k for g in self.gens]
        for i in range(k):
            aug[i][self.ncols + i] = 1
        reduced, pivots = _howell(aug, m, self.ncols + k, pivot_cols=self.ncols)
        lead_rows = []
        lead_pivots = []
        for row, piv in zip(reduced, pivots):
            lead_rows.append(tuple(row[:self.ncols]))
            lead_pivots.append(piv)
        transform = tuple(tuple(row[self.ncols:]) for row in reduced)
        form = HowellForm(m, self.ncols, tuple(lead_rows), tuple(lead_pivots))
        # rows folded to a zero lead part carry kernel combinations; the Howell
        # saturation rows make this a complete generating set of the kernel
        full = [list(g) + [0] * k for g in self.gens]
        for i in range(k):
            full[i][self.ncols + i] = 1
        all_rows, _ = _howell(full, m, self.ncols + k)
        kernel_rows = [row[self.ncols:] for row in all_rows if not any(row[:self.ncols])]
        kernel = howell_form(kernel_rows, m) if kernel_rows else HowellForm(m, k, (), ())
        return form, transform, kernel

    @property
    def form(self) -> HowellForm:
        return self._data[0]

    @property
    def kernel(self) -> HowellForm:
        return self._data[2]

    def contains(self, target: Sequence[int]) -> bool:
        return self.form.contains(target)

    def express(self, target: Sequence[int]) -> Optional[Vec]:
        """Canonical coefficients c with c @ gens == target, or None."""
        form, transform, kernel = self._data
        m = self.modulus
        residual, row_coeffs = form.reduce(target)
        if any(residual):
            return None
        coeffs = [0] * len(self.gens)
        for q, urow in zip(row_coeffs, transform):
            if q:
                _vec_add_scaled(coeffs, urow, q, m)
        # canonicalize the particular solution modulo the kernel
        for (c, d), row in zip(kernel.pivots, kernel.rows):
            q = coeffs[c] // d
            if q:
                _vec_add_scaled(coeffs, row, -q, m)
        return tuple(coeffs)


def row_solver(rows: Sequence[Sequence[int]], modulus: int,
               ncols: int | None = None) -> RowSolver:
    validate_modulus(modulus)
    width = len(rows[0]) if rows else (ncols or 0)
    return RowSolver(modulus, tuple(tuple(x % modulus for x in r) for r in rows), width)


@dataclass(frozen=True)
class LinearSolution:
    """One particular solution of A @ x == b plus the solution kernel."""

    particular: Vec
    kernel: tuple[Vec, ...]


def solve_linear(matrix: ResidueMatrix, rhs: Sequence[int]) -> Optional[LinearSolution]:
    """Solve A @ x == b over Z/modulus; None when unsolvable."""
    if len(rhs) != matrix.nrows:
        raise ValueError(f"rhs length {len(rhs)} != row count {matrix.nrows}")
    m = matrix.modulus
    cols = [tuple(matrix.entries[i][j] for i in range(matrix.nrows))
            for j in range(matrix.ncols)]
    solver = RowSolver(m, tuple(cols), matrix.nrows)
    x = solver.express(tuple(v % m for v in rhs))
    if x is None:
        return None
    return LinearSolution(x, solver.kernel.rows)


def independent_mod(vectors: Sequence[Sequence[int]], p: int) -> bool:
    """True iff the listed vectors are linearly independent over the field F_p.

    Repeats count: a list with a repeated vector is dependent.
    """
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    vecs = [tuple(x % p for x in v) for v in vectors]
    if not vecs:
        return True
    if len({len(v) for v in vecs}) != 1:
        raise ValueError("mixed vector lengths")
    form = howell_form(vecs, p)
    return form.rank == len(vecs)


class FpSpan:
    """Incrementally maintained row space over F_p (for greedy basis selection)."""

    def __init__(self, p: int, ncols: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.ncols = ncols
        self._rows: list[list[int]] = []  # reduced echelon rows
        self._lead: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, vec: Sequence[int]) -> list[int]:
        p = self.p
        v = [x % p for x in vec]
        for lead, row in zip(self._lead, self._rows):
            if v[lead]:
                c = v[lead]
                for i in range(self.ncols):
                    v[i] = (v[i] - c * row[i]) % p
        return v

    def contains(self, vec: Sequence[int]) -> bool:
        return not any(self._reduce(vec))

    def add_if_independent(self, vec: Sequence[int]) -> bool:
        v = self._reduce(vec)
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            return False
        inv = pow(v[lead], -1, self.p)
        v = [(inv * x) % self.p for x in v]
        self._rows.append(v)
        self._lead.append(lead)
        return True


def smith_invariants(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of an integer matrix (zeros dropped)."""
    a = [[int(x) for x in row] for row in rows]
    if not a or not a[0]:
        return ()
    nrows, ncols = len(a), len(a[0])
    if any(len(row) != ncols for row in a):
        raise ValueError("ragged matrix")

    def row_op(i1: int, i2: int, x: int, y: int, u: int, v: int) -> None:
        for j in range(ncols):
            p, q = a[i1][j], a[i2][j]
            a[i1][j], a[i2][j] = x * p + y * q, u * p + v * q

    def col_op(j1: int, j2: int, x: int, y: int, u: int, v: int) -> None:
        for i in range(nrows):
            p, q = a[i][j1], a[i][j2]
            a[i][j1], a[i][j2] = x * p + y * q, u * p + v * q

    invariants: list[int] = []
    t = 0
    while t < min(nrows, ncols):
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        if pj != t:
            col_op(t, pj, 0, 1, 1, 0)
        while True:
            for i in range(t + 1, nrows):
                if a[i][t]:
                    if a[i][t] % a[t][t] == 0:
                        # plain subtraction keeps the pivot row intact
                        row_op(t, i, 1, 0, -(a[i][t] // a[t][t]), 1)
                    else:
                        g, x, y = xgcd(a[t][t], a[i][t])
                        row_op(t, i, x, y, -(a[i][t] // g), a[t][t] // g)
            for j in range(t + 1, ncols):
                if a[t][j]:
                    if a[t][j] % a[t][t] == 0:
                        col_op(t, j, 1, 0, -(a[t][j] // a[t][t]), 1)
                    else:
                        g, x, y = xgcd(a[t][t], a[t][j])
                        col_op(t, j, x, y, -(a[t][j] // g), a[t][t] // g)
            if all(a[i][t] == 0 for i in range(t + 1, nrows)):
                # make the pivot divide everything that remains
                culprit = None
                for i in range(t + 1, nrows):
                    for j in range(t + 1, ncols):
                        if a[i][j] % a[t][t]:
                            culprit = i
                            break
                    if culprit is not None:
                        break
                if culprit is None:
                    break
                for j in range(ncols):
                    a[t][j] += a[culprit][j]
        invariants.append(abs(a[t][t]))
        t += 1
    return tuple(invariants)

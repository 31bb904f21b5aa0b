"""Finite abelian groups as ordered direct sums of cyclic prime-power factors.

Mixed-order cyclic inputs like Z12 are decomposed into prime-power factors at
parse time, so every stored group is already in primary-decomposed form.
Element coordinates are plain integer tuples reduced per factor.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce

from .residues import is_prime

Coords = tuple[int, ...]

#: Sentinel height of the zero element: larger than every finite height.
INFINITE_HEIGHT = math.inf

_FACTOR_RE = re.compile(r"^[zZ]\s*(\d+)$")


def _prime_power_factors(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct sum of cyclic groups Z/p^e, kept in the given factor order."""

    factors: tuple[tuple[int, int], ...]  # (prime, exponent) per cyclic factor

    def __post_init__(self) -> None:
        for p, e in self.factors:
            if e < 1:
                raise ValueError(f"factor exponent must be >= 1, got {e}")
            if not is_prime(p):
                raise ValueError(f"factor base {p} is not prime")

    @classmethod
    def from_orders(cls, orders: list[int]) -> "FiniteAbelianGroup":
        factors: list[tuple[int, int]] = []
        for n in orders:
            if n < 2:
                raise ValueError(f"cyclic factor order must be >= 2, got Z{n}")
            factors.extend(_prime_power_factors(n))
        return cls(tuple(factors))

    @classmethod
    def parse(cls, text: str) -> "FiniteAbelianGroup":
        """Parse syntax like "Z4 x Z2 x Z9" ('x' or '*' separators)."""
        parts = re.split(r"[x*×]", text, flags=re.IGNORECASE)
        orders = []
        for part in parts:
            part = part.strip()
            m = _FACTOR_RE.match(part)
            if not m:
                raise ValueError(f"unrecognized group factor {part!r}")
            orders.append(int(m.group(1)))
        return cls.from_orders(orders)

    def format(self) -> str:
        return " x ".join(f"Z{p ** e}" for p, e in self.factors) if self.factors else "Z1"

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(p ** e for p, e in self.factors)

    @property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.orders, 1)

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, self.orders, 1)

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    def primes(self) -> tuple[int, ...]:
        return tuple(sorted({p for p, _ in self.factors}))

    def is_p_group(self, p: int) -> bool:
        return all(q == p for q, _ in self.factors)

    # -- coordinate arithmetic ------------------------------------------------

    def zero(self) -> Coords:
        return (0,) * self.rank

    def reduce_coords(self, coords) -> Coords:
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        return tuple(c % n for c, n in zip(coords, self.orders))

    def add(self, a: Coords, b: Coords) -> Coords:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def neg(self, a: Coords) -> Coords:
        return tuple((-x) % n for x, n in zip(a, self.orders))

    def scale(self, k: int, a: Coords) -> Coords:
        return tuple((k * x) % n for x, n in zip(a, self.orders))

    def order_of(self, a: Coords) -> int:
        return reduce(math.lcm, (n // math.gcd(n, x) for x, n in zip(a, self.orders)), 1)

    # -- scaled embedding into Z/exponent -------------------------------------

    @property
    def scale_factors(self) -> tuple[int, ...]:
        """Per-factor multiplier embedding Z/n_j into Z/exponent."""
        exp = self.exponent
        return tuple(exp // n for n in self.orders)

    def coords_to_scaled(self, a: Coords) -> Coords:
        exp = self.exponent
        return tuple((x * s) % exp for x, s in zip(a, self.scale_factors))

    def scaled_to_coords(self, v: Coords) -> Coords:
        out = []
        for x, s, n in zip(v, self.scale_factors, self.orders):
            if x % s:
                raise ValueError(f"scaled value {x} is not in the embedded copy")
            out.append((x // s) % n)
        return tuple(out)

    def torsion_coords_to_fp(self, a: Coords, p: int) -> Coords:
        """Map a p-torsion element into F_p^rank coordinates."""
        out = []
        for x, (q, e) in zip(a, self.factors):
            if q != p:
                if x:
                    raise ValueError("element is not p-torsion")
                out.append(0)
                continue
            step = q ** (e - 1)
            if x % step:
                raise ValueError("element is not p-torsion")
            out.append((x // step) % p)
        return tuple(out)


@dataclass(frozen=True)
class GroupElement:
    """An element of a FiniteAbelianGroup with reduced coordinates."""

    group: FiniteAbelianGroup
    coords: Coords

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", self.group.reduce_coords(self.coords))

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if other.group != self.group:
            raise ValueError("elements of different groups")
        return GroupElement(self.group, self.group.add(self.coords, other.coords))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, self.group.neg(self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, self.group.scale(k, self.coords))

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)


def element_order(g: GroupElement) -> int:
    """Least n >= 1 with n*g == 0."""
    return g.group.order_of(g.coords)


@dataclass(frozen=True)
class PrimaryPart:
    """The p-part of a group together with its embedding and projection."""

    parent: FiniteAbelianGroup
    prime: int
    group: FiniteAbelianGroup
    indices: tuple[int, ...]  # positions of the p-factors inside parent

    def project_coords(self, coords: Coords) -> Coords:
        return tuple(coords[i] for i in self.indices)

    def embed_coords(self, coords: Coords) -> Coords:
        out = [0] * self.parent.rank
        for i, x in zip(self.indices, coords):
            out[i] = x
        return tuple(out)

    def project(self, g: GroupElement) -> GroupElement:
        return GroupElement(self.group, self.project_coords(g.coords))

    def embed(self, g: GroupElement) -> GroupElement:
        return GroupElement(self.parent, self.embed_coords(g.coords))


def primary_component(group: FiniteAbelianGroup, p: int) -> PrimaryPart:
    """The p-primary direct summand of the group (possibly trivial)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    indices = tuple(i for i, (q, _) in enumerate(group.factors) if q == p)
    sub = FiniteAbelianGroup(tuple(group.factors[i] for i in indices))
    return PrimaryPart(group, p, sub, indices)


def height_in_group(g: GroupElement, p: int) -> float:
    """Largest h with g in p^h * H, for g inside the p-component of H.

    Returns INFINITE_HEIGHT for the zero element.  Elements with nonzero
    coordinates outside the p-part are rejected.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    group = g.group
    heights = []
    for x, (q, e) in zip(g.coords, group.factors):
        if q != p:
            if x:
                raise ValueError("element has support outside the p-component")
            continue
        if x == 0:
            continue
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        heights.append(v)
    if not heights:
        return INFINITE_HEIGHT
    return min(heights)

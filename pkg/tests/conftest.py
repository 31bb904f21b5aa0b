import random

import pytest

from groupshift.groups import FiniteAbelianGroup
from groupshift.shifts import GroupShift
from groupshift.words import Word


def make_shift(group_text, gens, memory=None):
    """gens: list of (start, [symbol tuples or ints])."""
    group = FiniteAbelianGroup.parse(group_text)
    words = []
    for start, symbols in gens:
        syms = [(s,) if isinstance(s, int) else tuple(s) for s in symbols]
        words.append(Word.make(group, start, syms))
    return GroupShift.make(group, words, memory)


@pytest.fixture
def z2():
    return FiniteAbelianGroup.parse("Z2")


@pytest.fixture
def z4():
    return FiniteAbelianGroup.parse("Z4")


@pytest.fixture
def delay_rep():
    """Proper subshift over Z2 x Z2: second coordinate echoes the first with
    one step of delay."""
    return make_shift("Z2 x Z2", [(0, [(1, 0), (0, 1)])])


GROUP_POOL = ["Z2", "Z3", "Z4", "Z5", "Z7", "Z8", "Z2 x Z2", "Z2 x Z4", "Z6",
              "Z2 x Z2 x Z2", "Z3 x Z3"]


def random_shift(rng: random.Random, max_gens=2, max_support=3,
                 pool=GROUP_POOL):
    group = FiniteAbelianGroup.parse(rng.choice(pool))
    gens = []
    for _ in range(rng.randrange(1, max_gens + 1)):
        length = rng.randrange(1, max_support + 1)
        syms = [tuple(rng.randrange(n) for n in group.orders)
                for _ in range(length)]
        w = Word.make(group, rng.randrange(-1, 2), syms)
        if not w.is_zero:
            gens.append(w)
    if not gens:
        gens = [Word.impulse(group, tuple(1 if i == 0 else 0
                                          for i in range(group.rank)))]
    return GroupShift.make(group, gens)


def brute_force_span(rows, modulus, width):
    """Closure of the integer span of the rows inside (Z/modulus)^width."""
    span = {tuple([0] * width)}
    for row in rows:
        new = set()
        for base in span:
            cur = list(base)
            for _ in range(modulus):
                new.add(tuple(cur))
                cur = [(a + b) % modulus for a, b in zip(cur, row)]
        span = new
    return span

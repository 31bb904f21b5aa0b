import random

import pytest

from groupshift.shifts import (GroupShift, enumerate_window_code,
                               finite_type_memory, member, splice,
                               supported_words, window_projection)
from groupshift.words import Word

from conftest import make_shift, random_shift


def window_code_as_set(shift, lo, hi):
    """Window module elements via the canonical-form path, as flat symbol
    tuples, for comparison with the brute-force oracle."""
    out = set()
    for vec in shift.window(lo, hi).enumerate_vectors(1 << 18):
        w = Word.from_window_vector(shift.alphabet, lo, vec)
        flat = []
        for i in range(lo, hi + 1):
            flat.extend(w.value_at(i))
        out.add(tuple(flat))
    return out


# -- window projections -------------------------------------------------------


def test_full_shift_single_window(z4):
    g = GroupShift.full_shift(z4)
    assert g.window(0, 0).size() == 4


def test_zero_shift_window(z4):
    g = GroupShift.make(z4, [])
    assert g.window(2, 5).size() == 1


def test_far_window_has_three_contributors(z2):
    # generator supported on [0,1], window [5,6]: three contributing shifts
    g = make_shift("Z2", [(0, [1, 1])])
    module = g.window(5, 6)
    assert len(module.contributors) == 3
    assert module.size() <= 4
    # enumerate all sums of the contributing restrictions directly
    from conftest import brute_force_span
    span = brute_force_span(module.rows, 2, 2)
    assert set(module.enumerate_vectors()) == span


def test_shift_equivariance_of_projections():
    rng = random.Random(4)
    for _ in range(15):
        g = random_shift(rng)
        a = rng.randrange(-3, 3)
        b = a + rng.randrange(0, 4)
        first = g.window(a, b)
        second = g.window(a + 1, b + 1)
        assert first.form.rows == second.form.rows


# -- membership ---------------------------------------------------------------


def test_member_zero_and_generators(delay_rep):
    assert member(delay_rep, Word.zero(delay_rep.alphabet), 3).certified_in
    for g in delay_rep.generators:
        for n in (-2, 0, 5):
            assert member(delay_rep, g.shifted(n), 3).certified_in


def test_member_rejects_non_member(delay_rep):
    bad = Word.impulse(delay_rep.alphabet, (1, 1))
    assert not member(delay_rep, bad, 2).certified_in


def test_member_finite_sums_certified():
    rng = random.Random(9)
    for _ in range(10):
        g = random_shift(rng)
        w = Word.zero(g.alphabet)
        for _ in range(rng.randrange(1, 4)):
            gi = rng.randrange(len(g.generators))
            w = w + g.generators[gi].shifted(rng.randrange(-3, 4)).scaled(
                rng.randrange(1, g.alphabet.exponent + 1))
        for margin in (0, 1, 2, 4):
            assert member(g, w, margin).certified_in


def test_member_monotone_in_margin():
    rng = random.Random(10)
    for _ in range(25):
        g = random_shift(rng)
        syms = [tuple(rng.randrange(n) for n in g.alphabet.orders)
                for _ in range(rng.randrange(1, 4))]
        w = Word.make(g.alphabet, rng.randrange(-2, 2), syms)
        verdicts = [member(g, w, m).certified_in for m in range(5)]
        # once certified-out, stays certified-out at larger margins
        for earlier, later in zip(verdicts, verdicts[1:]):
            if not earlier:
                assert not later


# -- the difference code is dense (its closure is the full shift) -------------


def test_difference_code_closure_is_full(z2):
    g = make_shift("Z2", [(0, [1, 1])])
    for t in range(4):
        assert g.window(0, t).size() == 2 ** (t + 1)
    assert member(g, Word.impulse(z2, (1,)), 4).certified_in


# -- finite type and splice ----------------------------------------------------


def test_finite_type_full_shift(z4):
    assert finite_type_memory(GroupShift.full_shift(z4), 4).memory == 1


def test_finite_type_cap_error(z4):
    with pytest.raises(ValueError):
        finite_type_memory(GroupShift.full_shift(z4), 0)


def test_finite_type_examples(delay_rep):
    assert finite_type_memory(delay_rep, 4).memory == 1
    diff = make_shift("Z2", [(0, [1, 1])])
    assert finite_type_memory(diff, 4).memory == 1


def test_splice_trivial_and_truncation(delay_rep):
    g = delay_rep.generators[0]
    x1 = g + g.shifted(-2)
    assert splice(delay_rep, x1, x1, 0, 1) == x1
    # steering to zero: x1 vanishes on [5, 6], so splicing with zero there
    # keeps the past of x1 and nothing after
    out = splice(delay_rep, x1, Word.zero(delay_rep.alphabet), 5, 1)
    assert out == x1
    # gluing where the block is inside the supports
    x2 = g.shifted(-2)
    assert x1.agrees_on(x2, 2, 3)
    glued = splice(delay_rep, x1, x2, 2, 1)
    assert member(delay_rep, glued, 3).certified_in
    assert glued.agrees_on(x1, -5, 3) and glued.agrees_on(x2, 2, 10)


def test_splice_disagreement_rejected(delay_rep):
    g = delay_rep.generators[0]
    with pytest.raises(ValueError):
        splice(delay_rep, g, g.shifted(1), 0, 1)


# -- supported word modules ----------------------------------------------------


def test_supported_words_delay_rep(delay_rep):
    sw = supported_words(delay_rep, 0, 1, 3)
    assert [w.format() for w in sw.words] == ["@0: (1,0) (0,1)"]
    assert not supported_words(delay_rep, 0, 0, 3).words


def test_supported_words_are_members():
    rng = random.Random(12)
    for _ in range(10):
        g = random_shift(rng)
        sw = supported_words(g, 0, 3, 2)
        for w in sw.words:
            assert member(g, w, 2).certified_in
            assert w.is_zero or (w.first >= 0 and w.last <= 3)


def test_supported_words_torsion():
    g = make_shift("Z4", [(0, [1, 2])])
    sw = supported_words(g, 0, 2, 3, torsion_scale=2)
    assert sw.words
    for w in sw.words:
        assert w.scaled(2).is_zero


# -- oracle vs module enumeration ----------------------------------------------


def test_window_code_oracle_agrees_with_canonical_path():
    rng = random.Random(13)
    for _ in range(12):
        g = random_shift(rng)
        lo = rng.randrange(-2, 1)
        hi = lo + rng.randrange(0, 3)
        if g.alphabet.order ** (hi - lo + 1) > 1 << 14:
            continue
        oracle = set(enumerate_window_code(g, lo, hi))
        assert oracle == window_code_as_set(g, lo, hi)


def test_window_projection_alias(z4):
    g = GroupShift.full_shift(z4)
    assert window_projection(g, 0, 1) is g.window(0, 1)

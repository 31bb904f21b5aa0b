import random

import pytest

from groupshift.control import (analyze_controllability, controllability_index,
                                default_past_horizon, monotone_after_success,
                                order_controllability_index,
                                weak_controllability_check)
from groupshift.encoders import multiple_shift
from groupshift.shifts import GroupShift
from groupshift.words import Word

from conftest import make_shift, random_shift


def enumerated_index(shift, cap, past, ordered):
    """Brute-force least steering index by enumerating window elements."""
    for n in range(cap + 1):
        module = shift.window(-past, n + past)
        ok_all = True
        for vec in module.enumerate_vectors(1 << 16):
            g = Word.from_window_vector(shift.alphabet, -past, vec)
            found = False
            for vec1 in module.enumerate_vectors(1 << 16):
                g1 = Word.from_window_vector(shift.alphabet, -past, vec1)
                if not g1.agrees_on(g, -past, 0):
                    continue
                if not g1.restricted(n + 1, n + past).is_zero:
                    continue
                if ordered:
                    d = g.restricted(1, n).order()
                    if d % g1.restricted(1, n).order():
                        continue
                found = True
                break
            if not found:
                ok_all = False
                break
        if ok_all:
            return n
    return None


def test_full_shift_indices(z4):
    rep = analyze_controllability(GroupShift.full_shift(z4), cap=4)
    assert rep.n_c == 0 and rep.n_o == 0
    assert rep.weakly_controllable


def test_scaled_impulse_generator(z4):
    shift = make_shift("Z4", [(0, [2])])
    rep = analyze_controllability(shift, cap=4)
    assert rep.n_c == 0 and rep.n_o == 0


def test_delay_rep_indices(delay_rep):
    rep = analyze_controllability(delay_rep, cap=4)
    assert rep.n_c == 1 and rep.n_o == 1
    assert monotone_after_success(rep.plain)
    assert monotone_after_success(rep.ordered)
    assert rep.consistent()


def test_exponent_p_alphabet_equalizes_indices():
    # every nonzero order equals p, so the divisibility demand is vacuous
    rng = random.Random(21)
    for _ in range(8):
        shift = random_shift(rng, pool=["Z2", "Z3", "Z2 x Z2"])
        plain = controllability_index(shift, 4)
        ordered = order_controllability_index(shift, 4)
        assert plain.index == ordered.index


def test_fast_path_matches_enumeration():
    rng = random.Random(22)
    checked = 0
    for _ in range(20):
        shift = random_shift(rng, pool=["Z2", "Z4", "Z2 x Z2", "Z2 x Z4"])
        past = 2
        if shift.window(-past, 3 + past).size() > 1 << 12:
            continue
        for ordered in (False, True):
            fast = (order_controllability_index if ordered
                    else controllability_index)(shift, 3, past=past)
            slow = enumerated_index(shift, 3, past, ordered)
            assert fast.index == slow, (shift, ordered)
        checked += 1
    assert checked >= 5


def test_n_c_at_most_n_o():
    rng = random.Random(23)
    for _ in range(15):
        shift = random_shift(rng)
        rep = analyze_controllability(shift, cap=6)
        assert rep.consistent()
        assert monotone_after_success(rep.plain)
        assert monotone_after_success(rep.ordered)


def test_scaling_preserves_order_controllability():
    rng = random.Random(24)
    for _ in range(10):
        shift = random_shift(rng, pool=["Z4", "Z8", "Z2 x Z4"])
        rep = order_controllability_index(shift, 6)
        if rep.index is None:
            continue
        exp = shift.exponent
        p = 2
        r = 1
        if p ** r >= exp:
            continue
        scaled = multiple_shift(shift, p, r)
        if not scaled.generators:
            continue
        scaled_rep = order_controllability_index(scaled, 6)
        assert scaled_rep.index is not None and scaled_rep.index <= rep.index


def test_reports_are_reproducible():
    shift = make_shift("Z4", [(0, [1, 2]), (1, [2, 2])])
    a = analyze_controllability(shift, cap=4)
    b = analyze_controllability(shift, cap=4)
    assert a == b


def test_weak_controllability_variants(z4, delay_rep):
    g = GroupShift.full_shift(z4)
    assert weak_controllability_check(g, "self").holds
    assert weak_controllability_check(g, "socle", p=2).holds
    assert weak_controllability_check(g, "scaled", p=2).holds
    assert weak_controllability_check(g, "quotient", p=2).holds
    assert weak_controllability_check(delay_rep, "socle", p=2).holds
    with pytest.raises(ValueError):
        weak_controllability_check(g, "socle")
    with pytest.raises(ValueError):
        weak_controllability_check(g, "nonsense")


def test_past_horizon_default():
    shift = make_shift("Z2", [(0, [1, 1])])
    assert default_past_horizon(shift, 3) == 2 * (2 + 3)


def test_cap_zero_negative_verdict(delay_rep):
    rep = controllability_index(delay_rep, 0)
    assert rep.index is None
    assert rep.witness is not None

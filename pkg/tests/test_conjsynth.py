from functools import reduce
from math import gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from cantorwac.bratteli import ClopenSet, builtin
from cantorwac.conjsynth import (assemble, decide_wac, height_decomposition, identity_map, semigroup_threshold,
                                 synthesize_conjugator, tower_matching, verify_approx_conjugacy)
from cantorwac.errors import ContractError, RefusalError

BOUND = 12


@given(st.lists(st.integers(1, 30), min_size=1, max_size=4))
@settings(max_examples=200, deadline=None)
def test_semigroup_threshold_matches_oracle(heights):
    p = reduce(gcd, heights)
    assert semigroup_threshold(heights) == oracles.semigroup_threshold(heights, p)


def test_semigroup_threshold_examples():
    assert semigroup_threshold([3, 5]) == 8
    assert semigroup_threshold([4, 6]) == 2
    assert semigroup_threshold([1, 7]) == 1
    with pytest.raises(ContractError):
        semigroup_threshold([4, 6], p=4)


@given(st.lists(st.integers(1, 12), min_size=1, max_size=3), st.integers(0, 80))
@settings(max_examples=200, deadline=None)
def test_height_decomposition(heights, h):
    a = height_decomposition(h, heights)
    reachable = any(sum(x * y for x, y in zip(l, heights)) == h
                    for l in oracles.enumerate_solutions(heights, [0] * len(heights), h))
    assert (a is not None) == reachable
    if a is not None:
        assert sum(x * y for x, y in zip(a, heights)) == h
        assert min(a) >= 0


def test_tower_matching_and_corruption():
    plan = tower_matching((8, 5), (3, 2), [[2, 1], [1, 1]])
    assert plan.b == [3, 2]
    assert plan.check()
    # swap two floors of the same copy: no longer consecutive
    key_a, key_b = ((0, 0), 1), ((0, 0), 2)
    plan.pi[key_a], plan.pi[key_b] = plan.pi[key_b], plan.pi[key_a]
    with pytest.raises(ContractError):
        plan.check()
    with pytest.raises(ContractError):
        tower_matching((8, 5), (3, 2), [[1, 1], [1, 1]])


@pytest.mark.parametrize("x,y,level", [("fibonacci", "fibonacci", 3), ("triadic", "fibonacci", 2),
                                       ("dyadic", "twotower3_5", 2)])
def test_synthesized_conjugator_verifies(x, y, level):
    xd, yd = builtin(x), builtin(y)
    part = [ClopenSet(yd, level, [c]) for c in yd.cells(level)]
    pm = synthesize_conjugator(xd, yd, part, BOUND)
    rep = verify_approx_conjugacy(pm, part)
    assert rep.ok, rep.failing()
    again = assemble(xd, yd, pm.x_level, pm.q_level, pm.plan.a)
    assert again.cell_map == pm.cell_map


def test_corrupted_map_is_caught():
    xd, yd = builtin("triadic"), builtin("fibonacci")
    part = [ClopenSet(yd, 2, [c]) for c in yd.cells(2)]
    pm = synthesize_conjugator(xd, yd, part, BOUND)
    keys = sorted(pm.cell_map)
    a, b = keys[0], keys[1]
    pm.cell_map[a], pm.cell_map[b] = pm.cell_map[b], pm.cell_map[a]
    assert not verify_approx_conjugacy(pm, part).ok


def test_identity_map_is_exact():
    d = builtin("fibonacci")
    assert verify_approx_conjugacy(identity_map(d, 3)).ok


def test_refusal_names_missing_period():
    xd, yd = builtin("fibonacci"), builtin("dyadic")
    part = [ClopenSet(yd, 2, [c]) for c in yd.cells(2)]
    with pytest.raises(RefusalError) as exc:
        synthesize_conjugator(xd, yd, part, BOUND)
    assert "p=2" in str(exc.value)


@pytest.mark.parametrize("x,y,verdict", [
    ("dyadic", "dyadic", "yes"),
    ("twotower3_5", "dyadic", "yes"),
    ("fibonacci", "twotower2_3", "no"),
    ("dyadic", "triadic", "no"),
    ("odometer2x3", "dyadic", "no"),
])
def test_decide_wac(x, y, verdict):
    out = decide_wac(builtin(x), builtin(y), 8, BOUND)
    assert out["verdict"] == verdict
    assert (not out["obstructions"]) == (verdict == "yes")


def test_decide_wac_is_symmetric():
    for x, y in [("dyadic", "triadic"), ("fibonacci", "odometer2x3")]:
        a = decide_wac(builtin(x), builtin(y), 8, BOUND)
        b = decide_wac(builtin(y), builtin(x), 8, BOUND)
        assert a["verdict"] == b["verdict"]

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cantorwac.bratteli import ClopenSet, PathPrefix, alpha, builtin, pullback
from cantorwac.circle import (IDENTITY, LAMBDA, CircleCocycle, IsomT, circle_norm, eta_construction,
                              minimal_lift, omega_construction, parse_cocycle, serialize_cocycle, skew_orbit,
                              straighten)
from cantorwac.circle.cocycle import CocycleParseError
from cantorwac.conjsynth import identity_map
from cantorwac.errors import RefusalError

BOUND = 12

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=24)
isoms = st.builds(IsomT, rationals, st.integers(0, 1))


@given(isoms, isoms, isoms, rationals)
@settings(max_examples=200, deadline=None)
def test_isom_group_laws(f, g, h, t):
    assert (f * g) * h == f * (g * h)
    assert (f * g)(t) == f(g(t))
    assert f * f.inverse() == IDENTITY
    assert (f * g).orientation == (f.orientation + g.orientation) % 2


@given(isoms, isoms, st.lists(rationals, min_size=1, max_size=8))
@settings(max_examples=100, deadline=None)
def test_distance_is_sup_over_points(f, g, ts):
    d = f.distance(g)
    assert d <= F(1, 2)
    for t in ts:
        assert circle_norm(f(t) - g(t)) <= d
    if f.flip == g.flip:
        assert circle_norm(f(0) - g(0)) == d


def test_minimal_lift_range():
    assert minimal_lift(F(1, 2)) == F(1, 2)
    assert minimal_lift(F(3, 4)) == F(-1, 4)
    assert minimal_lift(F(-1, 3)) == F(-1, 3)


def test_cocycle_file_round_trip():
    d = builtin("fibonacci")
    phi = CircleCocycle.from_pairs(d, 2, {(0, 1): (F(1, 3), 0), (0, 2): (F(2, 5), 1), (1, 1): (0, 1)})
    text = serialize_cocycle(phi)
    assert parse_cocycle(text, d).values == phi.values
    assert serialize_cocycle(parse_cocycle(text, d)) == text


@pytest.mark.parametrize("text,line,col", [
    ("2 0 1 1 3 0\n2 0 2 1 x 0\n", 2, 9),
    ("2 0 1 1 0 0\n", 1, 9),
    ("2 0 1 1 3 2\n", 1, 11),
    ("2 0 1 1 3\n", 1, 1),
    ("2 0 1 1 3 0\n3 0 2 1 3 0\n", 2, 1),
    ("# nothing\n", 1, 1),
])
def test_cocycle_parse_errors(text, line, col):
    with pytest.raises(CocycleParseError) as exc:
        parse_cocycle(text, builtin("fibonacci"))
    assert (exc.value.line, exc.value.column) == (line, col)


def _iterate(d, level, cell, t, phi, steps):
    """Orbit by the path oracle and explicit composition."""
    pos = oracles.position(d, level)
    back = {c: p for p, c in pos.items()}
    path, out = back[cell], [(cell, F(t))]
    for _ in range(steps):
        c = pos[path]
        g = phi(d.ancestor(c, level, phi.level))
        path = oracles.successor(d, path)
        t = g(t)
        out.append((pos[path], t))
    return out


@pytest.mark.parametrize("phi_pairs", [
    {},
    {(0, 1): (F(1, 3), 0), (1, 1): (F(1, 3), 0)},
    {(0, 1): (F(1, 3), 1), (1, 1): (F(1, 7), 0)},
])
def test_skew_orbit_matches_iteration(phi_pairs):
    d = builtin("fibonacci")
    phi = CircleCocycle.from_pairs(d, 1, {c: phi_pairs.get(c, (0, 0)) for c in d.cells(1)})
    got = skew_orbit(PathPrefix.from_cell(d, 6, (0, 1)), F(1, 5), phi, 10)
    assert got == _iterate(d, 6, (0, 1), F(1, 5), phi, 10)
    if not phi_pairs:
        assert all(t == F(1, 5) for _, t in got)


def test_straighten_gives_rotations():
    d = builtin("fibonacci")
    phi = CircleCocycle.from_pairs(d, 3, {c: (F(1, 9), 1 if c in [(0, 1), (0, 2)] else 0) for c in d.cells(3)})
    st_ = straighten(phi, BOUND)
    assert st_.xi.is_rotation()
    pa = pullback(st_.psi, 1)
    level = st_.xi.level
    for c in d.cells(level):
        g = pa.refine(level)(c) * phi.refine(level)(c) * st_.psi.refine(level)(c).inverse()
        assert g == st_.xi(c)


def test_straighten_refuses_odd_orientation():
    d = builtin("fibonacci")
    phi = CircleCocycle.from_pairs(d, 3, {c: (0, 1 if c == (0, 1) else 0) for c in d.cells(3)})
    with pytest.raises(RefusalError):
        straighten(phi, BOUND)


def test_eta_zero_when_cocycles_agree():
    d = builtin("fibonacci")
    pm = identity_map(d, 4)
    xi = CircleCocycle.rotations(d, 2, {c: F(1, 7) for c in d.cells(2)})
    res = eta_construction(pm, xi, xi, F(1, 2))
    assert res.deviation == 0


def test_eta_single_tower_example():
    d = builtin("dyadic")
    pm = identity_map(d, 2)
    xi = CircleCocycle.rotations(d, 2, {c: 0 for c in d.cells(2)})
    zeta = CircleCocycle.rotations(d, 2, {c: F(1, 8) for c in d.cells(2)})
    res = eta_construction(pm, xi, zeta, F(1, 3))
    assert res.kappa_lift == {0: F(1, 2)}
    assert res.deviation == F(1, 8)
    assert res.ok


def test_eta_refuses_short_towers():
    d = builtin("dyadic")
    pm = identity_map(d, 1)
    xi = CircleCocycle.rotations(d, 1, {c: 0 for c in d.cells(1)})
    with pytest.raises(RefusalError):
        eta_construction(pm, xi, xi, F(1, 2))


def test_omega_matches_flipping_cocycles():
    d = builtin("fibonacci")
    pm = identity_map(d, 4)
    phi = CircleCocycle.from_pairs(d, 3, {c: (F(1, 3), 1 if c == (0, 2) else 0) for c in d.cells(3)})
    res = omega_construction(pm, phi, phi)
    assert res.sup_deviation == 0
    psi = CircleCocycle.from_pairs(d, 3, {c: (F(1, 5), 1 if c == (0, 2) else 0) for c in d.cells(3)})
    res = omega_construction(pm, phi, psi)
    h = d.heights(4)
    for v, dev in res.per_tower.items():
        assert dev == abs(res.kappa_lift[v]) / h[v]
    assert res.sup_deviation < F(1, min(h))
    # check the deviation pointwise at a few circle points
    om_a = pullback(res.omega, 1)
    lvl = om_a.level
    for c in d.cells(lvl):
        left = psi.refine(lvl)(c) * res.omega.refine(lvl)(c)
        right = om_a(c) * phi.refine(lvl)(c)
        for t in (F(0), F(1, 3), F(5, 7)):
            assert circle_norm(left(t) - right(t)) <= res.per_cell[c]


def test_omega_refuses_parity_mismatch():
    d = builtin("fibonacci")
    pm = identity_map(d, 3)
    phi = CircleCocycle.constant(d, 3, IDENTITY)
    psi = CircleCocycle(d, 3, {c: LAMBDA if c == (0, 1) else IDENTITY for c in d.cells(3)})
    with pytest.raises(RefusalError):
        omega_construction(pm, phi, psi)


def test_alpha_of_base_after_roof():
    # the roof floor feeds the base of every tower, used by the orbit stepping
    d = builtin("fibonacci")
    assert alpha(ClopenSet(d, 3, [(0, 3), (1, 2)])) == ClopenSet(d, 3, [(0, 1), (1, 1)])

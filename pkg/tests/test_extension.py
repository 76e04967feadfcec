import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cantorwac.bratteli import CellFunction, ClopenSet, builtin
from cantorwac.errors import ContractError
from cantorwac.extension import (ZmCocycle, build_extension, check_containment, check_ext_divisible,
                                 check_f0_identity, ext_divisible, minimality, ps_extension, torsion_check)
from cantorwac.kzero import TriState

BOUND = 12


def _prime_factors(m):
    return [q for q in range(2, m + 1) if m % q == 0 and all(q % r for r in range(2, q))]


@pytest.mark.parametrize("name", ["dyadic", "fibonacci", "triadic", "odometer2x3", "twotower2_3"])
@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_constant_cocycle_minimality(name, m):
    d = builtin(name)
    flag, _ = minimality(ZmCocycle.constant(d, 0, 1, m), BOUND)
    expected = not any(oracles.divides_unit(d, q) for q in _prime_factors(m))
    assert flag == ("yes" if expected else "no")


@pytest.mark.parametrize("name", ["dyadic", "fibonacci", "triadic", "twotower2_3"])
def test_floors_contain_and_step(name):
    d = builtin(name)
    rng = random.Random(name)
    for m in (2, 3):
        c = ZmCocycle(CellFunction(d, 2, {x: rng.randrange(m) for x in d.cells(2)}), m)
        ext = build_extension(c)
        for n in range(ext.start, ext.start + 2):
            assert check_containment(ext, n)


@pytest.mark.parametrize("name", ["fibonacci", "triadic", "twotower2_3"])
def test_recursive_totals_match_partial_sums(name):
    d = builtin(name)
    c = ZmCocycle.indicator(ClopenSet(d, 2, [(0, 1)]), 3)
    ext = build_extension(c)
    for n in range(c.level, c.level + 4):
        assert ext.totals(n) == ext.partial_sums(n)[1]


@given(st.integers(0, 10 ** 6), st.integers(2, 5))
@settings(max_examples=30, deadline=None)
def test_f0_identity(seed, m):
    rng = random.Random(seed)
    d = builtin("fibonacci")
    c = ZmCocycle(CellFunction(d, 3, {x: rng.randrange(m) for x in d.cells(3)}), m)
    assert check_f0_identity(c)


def test_ext_certificates_and_tampering():
    d = builtin("triadic")
    ext = build_extension(ZmCocycle.constant(d, 0, 1, 2))
    yes = ext_divisible(ext, 6, BOUND)
    no = ext_divisible(ext, 4, BOUND)
    assert yes.yes and no.no
    assert check_ext_divisible(ext, 6, yes) and check_ext_divisible(ext, 4, no)
    bad = TriState("yes", dict(yes.certificate, quotient=[q + 1 for q in yes.certificate["quotient"]]))
    assert not check_ext_divisible(ext, 6, bad)
    assert not check_ext_divisible(ext, 6, TriState("no", no.certificate))


@pytest.mark.parametrize("name,m,value,torsion", [
    ("triadic", 2, 1, [2]),
    ("fibonacci", 3, 1, [3]),
    ("dyadic", 3, 1, [3]),
])
def test_constant_cocycle_torsion(name, m, value, torsion):
    rep = torsion_check(build_extension(ZmCocycle.constant(builtin(name), 0, value, m)), BOUND)
    assert rep.minimal == "yes"
    assert rep.stabilized
    assert rep.torsion == torsion
    assert rep.f0_order == m
    assert rep.f0_identity


@pytest.mark.parametrize("name,cocycle,branch,spectrum", [
    ("triadic", lambda d: ZmCocycle.constant(d, 0, 1, 2), "doubled", [1, 2, 3, 6, 9]),
    ("dyadic", lambda d: ZmCocycle.constant(d, 0, 1, 2), "equal", [1, 2, 4, 8]),
    ("fibonacci", lambda d: ZmCocycle.constant(d, 0, 1, 2), "doubled", [1, 2]),
])
def test_ps_extension_branches(name, cocycle, branch, spectrum):
    res = ps_extension(cocycle(builtin(name)), 10, BOUND)
    assert res["branch"] == branch
    assert res["ps_extension"]["yes"] == spectrum
    assert res["agree"] is True


def test_ps_extension_wants_z2():
    with pytest.raises(ContractError):
        ps_extension(ZmCocycle.constant(builtin("dyadic"), 0, 1, 3), 8, BOUND)

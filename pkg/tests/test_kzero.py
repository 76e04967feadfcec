import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cantorwac.bratteli import CellFunction, ClopenSet, builtin, parse
from cantorwac.errors import ContractError
from cantorwac.kzero import (K0Element, TriState, check_divisible_certificate, check_equal_certificate,
                             check_spectrum_set, check_transfer, class_mod2_equal, classes_equal,
                             divisible_by, is_coboundary, k0_class, mod2_solve, periodic_spectrum,
                             set_class, spectrum_set, unit, zero)

NAMES = ["dyadic", "fibonacci", "triadic", "odometer2x3", "twotower2_3", "twotower3_5"]
BOUND = 12

FINITE = "bratteli 1\ntop 1\nblock 1\n0 0 1\n0 0 2\nblock 1\n0 0 1\n0 0 2\n0 0 3\n"


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("p", range(1, 11))
def test_divisibility_agrees_with_height_scan(name, p):
    d = builtin(name)
    tri = divisible_by(unit(d), p, BOUND)
    assert tri.verdict == ("yes" if oracles.divides_unit(d, p) else "no")
    assert check_divisible_certificate(unit(d), p, tri)


@pytest.mark.parametrize("name", NAMES)
def test_spectrum_sets_partition(name):
    d = builtin(name)
    for p, tri in periodic_spectrum(d, 8, BOUND):
        if tri.yes:
            assert check_spectrum_set(tri.witness, p)


def test_spectrum_split():
    split = spectrum_set(periodic_spectrum(builtin("dyadic"), 8, BOUND))
    assert split["yes"] == [1, 2, 4, 8]
    assert split["no"] == [3, 5, 6, 7]


def test_finite_diagram_is_unknown_past_depth():
    d = parse(FINITE)
    # heights 1, 2, 6: 3 divides only at the last level, 5 never
    assert divisible_by(unit(d), 3, BOUND).yes
    assert divisible_by(unit(d), 5, BOUND).unknown


def test_tampered_certificates_rejected():
    t = builtin("triadic")
    yes = divisible_by(unit(t), 3, BOUND)
    bad = TriState("yes", dict(yes.certificate, quotient=[q + 1 for q in yes.certificate["quotient"]]))
    assert check_divisible_certificate(unit(t), 3, yes)
    assert not check_divisible_certificate(unit(t), 3, bad)
    d = builtin("fibonacci")
    no = divisible_by(unit(d), 4, BOUND)
    assert no.no
    assert not check_divisible_certificate(unit(d), 4, TriState("no", dict(no.certificate, cycle_to=no.certificate["cycle_from"])))
    assert not check_divisible_certificate(unit(d), 2, TriState("no", {"start": 0, "cycle_from": 0, "cycle_to": 2}))


def test_classes_equal_on_sets():
    d = builtin("fibonacci")
    a = ClopenSet(d, 3, [(0, 1)])
    b = ClopenSet(d, 3, [(0, 3)])
    c = ClopenSet(d, 3, [(1, 1)])
    same = classes_equal(set_class(a), set_class(b), BOUND)
    assert same.yes and check_equal_certificate(set_class(a), set_class(b), same)
    diff = classes_equal(set_class(a), set_class(c), BOUND)
    assert diff.no and check_equal_certificate(set_class(a), set_class(c), diff)
    assert not check_equal_certificate(set_class(a), set_class(c), TriState("yes", {"level": 5}))


def test_k0_vector_length_checked():
    with pytest.raises(ContractError):
        K0Element(builtin("fibonacci"), 3, [1, 2, 3])


@given(st.lists(st.integers(-4, 4), min_size=8, max_size=8))
@settings(max_examples=80, deadline=None)
def test_coboundary_identity(values):
    d = builtin("fibonacci")
    f = CellFunction(d, 4, dict(zip(d.cells(4), values)))
    tri = is_coboundary(f, BOUND)
    # Fibonacci K^0 is torsion free and the incidence matrix invertible
    assert tri.yes == (not any(k0_class(f).vector))
    if tri.yes:
        assert check_transfer(f, tri.witness, -1)


@pytest.mark.parametrize("name", ["fibonacci", "triadic", "twotower2_3"])
def test_mod2_solve(name):
    d = builtin(name)
    rng = random.Random(name)
    for _ in range(30):
        f = CellFunction(d, 3, {c: rng.randint(0, 3) for c in d.cells(3)})
        tri = mod2_solve(f, BOUND)
        assert tri.verdict == class_mod2_equal(k0_class(f), zero(d, 3), BOUND).verdict
        if tri.yes:
            assert check_transfer(f.map(lambda x: x % 2), tri.witness, 1, modulus=2)


def test_mod2_zero_on_dyadic():
    # every class of the dyadic odometer is divisible by 2
    d = builtin("dyadic")
    f = CellFunction.indicator(ClopenSet(d, 3, [(0, 1)]))
    assert mod2_solve(f, BOUND).yes

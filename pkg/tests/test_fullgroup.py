import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorwac.bratteli import ClopenSet, alpha, builtin
from cantorwac.errors import ContractError, RefusalError
from cantorwac.fullgroup import (FullGroupElement, apply, check_key_conjugator, compose, equal, hopf_exchange,
                                 invert, is_bijective, lemma_key_conjugator)

BOUND = 12


def random_element(d, level, rng):
    """A tower-preserving permutation of level cells, composed with a power of alpha."""
    perm = {}
    h = d.heights(level)
    for v in range(len(h)):
        ks = list(range(1, h[v] + 1))
        shuffled = ks[:]
        rng.shuffle(shuffled)
        perm.update({(v, a): (v, b) for a, b in zip(ks, shuffled)})
    g = FullGroupElement.from_permutation(d, level, perm)
    return compose(FullGroupElement.alpha_power(d, rng.randint(-2, 2)), g)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_group_laws(seed):
    rng = random.Random(seed)
    d = builtin("fibonacci")
    f, g, h = (random_element(d, rng.randint(1, 3), rng) for _ in range(3))
    assert is_bijective(f) and is_bijective(compose(f, g))
    assert equal(compose(compose(f, g), h), compose(f, compose(g, h)))
    assert compose(f, invert(f)).is_identity()
    assert compose(invert(f), f).is_identity()
    s = ClopenSet(d, 4, [c for c in d.cells(4) if rng.random() < 0.5])
    assert apply(compose(f, g), s) == apply(f, apply(g, s))


def test_alpha_power_acts_like_alpha():
    d = builtin("triadic")
    s = ClopenSet(d, 2, [(0, 2), (0, 5)])
    assert apply(FullGroupElement.alpha_power(d, 3), s) == alpha(s, 3)


def test_from_permutation_rejects_tower_change():
    d = builtin("fibonacci")
    with pytest.raises(ContractError):
        FullGroupElement.from_permutation(d, 3, {(0, 1): (1, 1)})


def test_hopf_exchange_subset_and_refusal():
    d = builtin("fibonacci")
    u = ClopenSet(d, 3, [(1, 1)])
    v = ClopenSet(d, 3, [(0, 1), (0, 2)])
    g = hopf_exchange(u, v, BOUND, subset=True)
    assert apply(g, u) <= v
    with pytest.raises(RefusalError):
        hopf_exchange(u, v, BOUND)


@pytest.mark.parametrize("name", ["fibonacci", "triadic", "twotower2_3"])
def test_key_conjugator_on_random_partitions(name):
    d = builtin(name)
    rng = random.Random(name)
    for _ in range(6):
        cells = d.cells(2)
        k = rng.randint(2, 3)
        owner = {c: rng.randrange(k) for c in cells}
        parts = [ClopenSet(d, 2, [c for c in cells if owner[c] == i]) for i in range(k)]
        parts = [p for p in parts if not p.is_empty()]
        # targets come from a conjugate of alpha, so a conjugator exists
        gamma = random_element(d, 3, rng)
        targets = [apply(gamma, alpha(apply(invert(gamma), p))) for p in parts]
        sigma = lemma_key_conjugator(parts, targets)
        assert check_key_conjugator(sigma, parts, targets)


def test_key_conjugator_needs_equal_classes():
    d = builtin("fibonacci")
    parts = [ClopenSet(d, 2, [(0, 1), (0, 2)]), ClopenSet(d, 2, [(1, 1)])]
    with pytest.raises(ContractError):
        lemma_key_conjugator(parts, parts[::-1])

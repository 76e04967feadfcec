import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cantorwac.circle import combina


def test_case_two_example():
    c = combina((3, 5), (0, 1))
    assert c.case == 2
    assert c.threshold == oracles.combina_threshold((3, 5), (0, 1)) == 23
    assert c.solve(22, 0) is None or c.solve(22, 1) is None
    for par in (0, 1):
        l = c.solve(23, par)
        assert 3 * l[0] + 5 * l[1] == 23 and l[1] % 2 == par


def test_no_case_when_all_even():
    c = combina((2, 2), (1, 1))
    assert c.case is None
    assert c.threshold is None


def test_case_one_example():
    c = combina((2, 3), (1, 0))
    assert c.case == 1
    assert c.threshold == oracles.combina_threshold((2, 3), (1, 0)) == 8
    assert c.solve(8, 1) == (1, 2)


def test_bad_input():
    with pytest.raises(ValueError):
        combina((3, 0), (0, 1))
    with pytest.raises(ValueError):
        combina((3,), (0, 1))


@given(st.lists(st.tuples(st.integers(1, 9), st.integers(0, 1)), min_size=1, max_size=3))
@settings(max_examples=250, deadline=None)
def test_threshold_and_solutions_match_oracle(pairs):
    m, chis = zip(*pairs)
    c = combina(m, chis)
    if c.case is None:
        # the threshold is only offered under one of the two parity hypotheses
        assert c.threshold is None
        return
    want = oracles.combina_threshold(m, chis)
    assert c.threshold == want
    reach = oracles.parity_reach([x // c.q for x in m], chis, want + 5)
    for n in range(1, want + 5):
        for par in (0, 1):
            sol = c.solve(n, par)
            assert (sol is not None) == (par in reach[n])
            if sol is not None:
                assert sum(a * b for a, b in zip(sol, m)) == n * c.q
                assert sum(a * b for a, b in zip(sol, chis)) % 2 == par

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from cantorwac.intlinalg import (identity, in_lattice, kernel_basis, matmul, matvec, quotient_invariants,
                                 rank, smith_normal_form, solve_integer)


def matrices(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def sympy_diagonal(a):
    d = sympy_snf(Matrix(a), domain=ZZ)
    n = min(d.shape)
    return [abs(int(d[i, i])) for i in range(n) if d[i, i] != 0]


@given(matrices())
@settings(max_examples=200, deadline=None)
def test_snf_matches_sympy(a):
    assert smith_normal_form(a).diagonal == sympy_diagonal(a)


@given(matrices())
@settings(max_examples=200, deadline=None)
def test_snf_transforms(a):
    s = smith_normal_form(a)
    assert matmul(matmul(s.U, a), s.V) == s.D
    assert matmul(s.U, s.U_inv) == identity(len(a))
    assert matmul(s.V, s.V_inv) == identity(len(a[0]))
    for x, y in zip(s.diagonal, s.diagonal[1:]):
        assert y % x == 0
    for i, row in enumerate(s.D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_rank_matches_sympy(a):
    assert rank(a) == Matrix(a).rank()
    assert smith_normal_form(a).rank == Matrix(a).rank()


@given(matrices(), st.data())
@settings(max_examples=150, deadline=None)
def test_solve_integer_on_images(a, data):
    y = data.draw(st.lists(st.integers(-5, 5), min_size=len(a[0]), max_size=len(a[0])))
    x = matvec(a, y)
    sol = solve_integer(a, x)
    assert sol is not None
    assert matvec(a, sol) == x


def test_solve_integer_needs_integrality():
    assert solve_integer([[2, 0], [0, 3]], [1, 3]) is None
    assert solve_integer([[2, 0], [0, 3]], [4, 3]) == [2, 1]
    assert solve_integer([[1, 1]], [0]) is not None


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_kernel_basis(a):
    ker = kernel_basis(a)
    assert len(ker) == len(a[0]) - Matrix(a).rank()
    for v in ker:
        assert not any(matvec(a, v))


def test_quotient_invariants():
    # Z^2 / <(2,0),(0,6)> = Z_2 x Z_6
    assert quotient_invariants([[1, 0], [0, 1]], [[2, 0], [0, 6]]) == ([2, 6], 0)
    assert quotient_invariants([[1, 0], [0, 1]], [[3, 0]]) == ([3], 1)
    assert in_lattice([[2, 0], [0, 6]], [4, 12])
    assert not in_lattice([[2, 0], [0, 6]], [1, 0])

"""Exact integer linear algebra on lists of Python ints.

Matrices are lists of rows. Everything here is exact; no floats are used.
The Smith normal form is the engine for kernels, lattice membership and
quotient-group computations.
"""

from fractions import Fraction
from math import gcd


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def matmul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def matvec(a, x):
    return [sum(ai * xi for ai, xi in zip(row, x)) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def matpow(a, e):
    result = identity(len(a))
    base = [row[:] for row in a]
    while e:
        if e & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        e >>= 1
    return result


def rank(a):
    """Rank over the rationals."""
    rows = [[Fraction(x) for x in row] for row in a]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


class SmithForm:
    """Result of :func:`smith_normal_form`: ``U @ A @ V == D``.

    ``U`` and ``V`` are unimodular; ``U_inv`` and ``V_inv`` are their exact
    inverses. ``diagonal`` lists the nonzero invariant factors, each dividing
    the next.
    """

    def __init__(self, D, U, V, U_inv, V_inv):
        self.D = D
        self.U = U
        self.V = V
        self.U_inv = U_inv
        self.V_inv = V_inv
        n = min(len(D), len(D[0]) if D else 0)
        self.diagonal = [D[i][i] for i in range(n) if D[i][i] != 0]

    @property
    def rank(self):
        return len(self.diagonal)


def smith_normal_form(a):
    m = len(a)
    n = len(a[0]) if m else 0
    D = [list(map(int, row)) for row in a]
    U, U_inv = identity(m), identity(m)
    V, V_inv = identity(n), identity(n)

    # row op on D/U is mirrored by the inverse column op on U_inv
    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in U_inv:
            row[i], row[j] = row[j], row[i]

    def row_add(dst, src, f):
        # row[dst] += f * row[src]
        if f == 0:
            return
        D[dst] = [x + f * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]
        for row in U_inv:
            row[src] -= f * row[dst]

    def row_neg(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for row in U_inv:
            row[i] = -row[i]

    def col_swap(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        V_inv[i], V_inv[j] = V_inv[j], V_inv[i]

    def col_add(dst, src, f):
        # col[dst] += f * col[src]
        if f == 0:
            return
        for row in D:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]
        V_inv[src] = [x - f * y for x, y in zip(V_inv[src], V_inv[dst])]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    row_add(i, t, -q)
                    if D[i][t]:
                        row_swap(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    col_add(j, t, -q)
                    if D[t][j]:
                        col_swap(t, j)
                        done = False
            if not done:
                continue
            # enforce divisibility of the remaining block by the pivot
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if D[t][t] < 0:
            row_neg(t)
        t += 1
    return SmithForm(D, U, V, U_inv, V_inv)


def solve_integer(a, x):
    """Return an integer ``y`` with ``a @ y == x``, or ``None`` if none exists."""
    if not a:
        return [] if not any(x) else None
    snf = smith_normal_form(a)
    z = matvec(snf.U, x)
    r = snf.rank
    w = []
    for i, zi in enumerate(z):
        if i < r:
            if zi % snf.diagonal[i]:
                return None
            w.append(zi // snf.diagonal[i])
        elif zi:
            return None
    n = len(a[0])
    w = (w + [0] * n)[:n]
    return matvec(snf.V, w)


def in_lattice(generators, x):
    """Is ``x`` an integer combination of the given generator vectors?"""
    if not generators:
        return not any(x)
    return solve_integer(transpose(generators), x) is not None


def kernel_basis(a, ncols=None):
    """A basis (list of vectors) of the integer kernel of ``a``."""
    if not a:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    snf = smith_normal_form(a)
    n = len(a[0])
    return [[snf.V[i][j] for i in range(n)] for j in range(snf.rank, n)]


def lattice_basis(generators, dim):
    """A basis of the lattice spanned by ``generators`` inside Z^dim."""
    if not generators:
        return []
    snf = smith_normal_form(transpose(generators))
    return [[snf.U_inv[i][j] * snf.diagonal[j] for i in range(dim)] for j in range(snf.rank)]


def quotient_invariants(big_basis, small_generators):
    """Structure of ``span(big_basis) / span(small_generators)``.

    The small lattice must lie inside the big one. Returns
    ``(torsion, free_rank)`` where ``torsion`` lists invariant factors > 1.
    """
    k = len(big_basis)
    if k == 0:
        return [], 0
    b = transpose(big_basis)
    coords = []
    for g in small_generators:
        c = solve_integer(b, g)
        if c is None:
            raise ValueError("small lattice is not contained in the big lattice")
        coords.append(c)
    if not coords:
        return [], k
    snf = smith_normal_form(transpose(coords))
    torsion = [d for d in snf.diagonal if d > 1]
    return torsion, k - snf.rank


def vec_gcd(values):
    g = 0
    for v in values:
        g = gcd(g, v)
    return g

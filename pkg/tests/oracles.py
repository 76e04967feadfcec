"""Brute-force oracles that share no code with the package's cell arithmetic.

Paths are explicit edge sequences; the Vershik successor is the textbook
rule (bump the lowest non-maximal edge, reset everything above it to the
minimal path).  Divisibility and coin problems are plain reachable-set scans.
"""

from functools import reduce
from itertools import product as iproduct
from math import gcd


# -- paths -------------------------------------------------------------------


def edges_of(d, n):
    """Edges of block ``n`` as ``(source, range, rank)`` tuples."""
    return [(e.source, e.range, e.rank) for e in d.block(n).edges]


def all_paths(d, n):
    """Every path of length ``n`` from the top, as a tuple of edge tuples."""
    paths = [((), v) for v in range(d.top)]
    for i in range(n):
        es = edges_of(d, i)
        paths = [(p + (e,), e[1]) for p, v in paths for e in es if e[0] == v]
    return [p for p, _ in paths]


def position(d, n):
    """``path -> (end vertex, 1-based Vershik position)`` by explicit sorting."""
    by_end = {}
    for p in all_paths(d, n):
        end = p[-1][1] if p else 0
        by_end.setdefault(end, []).append(p)
    out = {}
    for v, ps in by_end.items():
        # the last edge is the most significant digit
        ps.sort(key=lambda p: tuple(e[2] for e in reversed(p)))
        for k, p in enumerate(ps, 1):
            out[p] = (v, k)
    return out


def _extreme_path(d, i, v, pick):
    """Path of length ``i`` ending at ``v`` using only min (or max) edges."""
    path = []
    for lvl in range(i - 1, -1, -1):
        into = [e for e in edges_of(d, lvl) if e[1] == v]
        e = pick(into, key=lambda e: e[2])
        path.append(e)
        v = e[0]
    return tuple(reversed(path))


def successor(d, path):
    """Vershik successor of a finite path, or None on the maximal path."""
    for i, e in enumerate(path):
        into = [f for f in edges_of(d, i) if f[1] == e[1]]
        bigger = [f for f in into if f[2] == e[2] + 1]
        if bigger:
            nxt = bigger[0]
            return _extreme_path(d, i, nxt[0], min) + (nxt,) + path[i + 1:]
    return None


def predecessor(d, path):
    for i, e in enumerate(path):
        into = [f for f in edges_of(d, i) if f[1] == e[1]]
        smaller = [f for f in into if f[2] == e[2] - 1]
        if smaller:
            prv = smaller[0]
            return _extreme_path(d, i, prv[0], max) + (prv,) + path[i + 1:]
    return None


def step(d, path, power):
    for _ in range(abs(power)):
        path = successor(d, path) if power > 0 else predecessor(d, path)
        if path is None:
            return None
    return path


def truncate(path, n):
    return path[:n]


# -- divisibility ------------------------------------------------------------


def incidence_from_edges(d, n):
    """``a[w][v]`` = number of edges ``v -> w`` in block ``n``."""
    rows = d.n_vertices(n + 1)
    cols = d.n_vertices(n)
    a = [[0] * cols for _ in range(rows)]
    for s, r, _ in edges_of(d, n):
        a[r][s] += 1
    return a


def divides_unit(d, p, max_levels=5000):
    """Is ``[1_X]`` divisible by ``p``?  Scan heights mod p level by level,
    stopping at the first repeated (block phase, heights mod p) state."""
    h = [1] * d.top
    seen = set()
    for n in range(max_levels):
        if all(x % p == 0 for x in h):
            return True
        if d.stationary and n >= d.stationary_start:
            state = ((n - d.stationary_start) % len(d.period), tuple(x % p for x in h))
            if state in seen:
                return False
            seen.add(state)
        if d.depth is not None and n >= d.depth:
            return False
        a = incidence_from_edges(d, n)
        h = [sum(a[w][v] * h[v] for v in range(len(h))) % p for w in range(len(a))]
    raise RuntimeError("scan did not settle")


# -- coin problems -----------------------------------------------------------


def parity_reach(m, chis, limit):
    """``reach[s]`` = set of parities of ``sum l_i chi_i`` over ``l`` with
    ``sum l_i m_i = s``, for ``0 <= s <= limit``; coin-major sweep."""
    reach = [set() for _ in range(limit + 1)]
    reach[0].add(0)
    for mi, ci in zip(m, chis):
        for s in range(mi, limit + 1):
            for par in list(reach[s - mi]):
                reach[s].add((par + ci) % 2)
    return reach


def combina_threshold(m, chis):
    """Least ``N >= 1`` such that every ``n >= N`` is solvable for both parities
    (sums counted in units of ``q = gcd(m)``)."""
    q = reduce(gcd, m)
    units = [x // q for x in m]
    big = max(units)
    limit = 4 * big * big + 8 * sum(units) + 20
    reach = parity_reach(units, chis, limit)
    tail = range(limit - 2 * big, limit + 1)
    if not all(reach[n] == {0, 1} for n in tail):
        return None
    last_bad = max((n for n in range(1, limit + 1) if reach[n] != {0, 1}), default=0)
    return last_bad + 1


def enumerate_solutions(m, chis, total):
    """All ``l`` with ``sum l_i m_i == total``, by brute force over boxes."""
    ranges = [range(total // mi + 1) for mi in m]
    return [l for l in iproduct(*ranges) if sum(a * b for a, b in zip(l, m)) == total]


def semigroup_threshold(heights, p):
    """Least ``N >= 1`` with ``p n`` a nonnegative combination of heights for all ``n >= N``."""
    big = max(heights)
    limit = 4 * big * big // p + 4 * sum(heights) + 20
    ok = [False] * (limit * p + 1)
    ok[0] = True
    for h in heights:
        for s in range(h, len(ok)):
            ok[s] = ok[s] or ok[s - h]
    bad = [n for n in range(1, limit + 1) if not ok[n * p]]
    assert all(ok[n * p] for n in range(limit - big, limit + 1))
    return (max(bad) + 1) if bad else 1

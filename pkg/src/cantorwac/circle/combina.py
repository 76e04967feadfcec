"""Coin problem with a parity side condition.

Given sizes ``m_i`` with parity labels ``chi_i``, represent ``n q`` as
``sum l_i m_i`` (``q = gcd(m)``) with ``sum l_i chi_i`` of a prescribed parity.
"""

from dataclasses import dataclass
from functools import reduce
from math import gcd


def case_tag(m, chis):
    m, chis = list(m), [c % 2 for c in chis]
    if any(mi % 2 == 0 and ci for mi, ci in zip(m, chis)) and any(mi % 2 for mi in m):
        return 1
    if any(mi % 2 and not ci for mi, ci in zip(m, chis)) and any(chis):
        return 2
    return None


@dataclass
class Combina:
    m: tuple
    chis: tuple
    case: object
    q: int
    threshold: object
    _table: list = None

    def solve(self, n, chi):
        """``l`` with ``sum l_i m_i = n q`` and ``sum l_i chi_i = chi`` mod 2, or None."""
        target = n * self.q
        table = _extend(self, n)
        if table[n][chi % 2] is None:
            return None
        l = [0] * len(self.m)
        cur, par = n, chi % 2
        while cur:
            i = table[cur][par]
            l[i] += 1
            cur, par = cur - self.m[i] // self.q, (par - self.chis[i]) % 2
        assert sum(a * b for a, b in zip(l, self.m)) == target
        return tuple(l)


def _extend(c, n):
    """Back-pointer table ``t[s][parity]`` (last coin index) up to ``s = n``."""
    table = c._table
    if table is None:
        table = [[-1, None]]
        c._table = table
    units = [mi // c.q for mi in c.m]
    for s in range(len(table), n + 1):
        row = [None, None]
        for par in (0, 1):
            for i, u in enumerate(units):
                if u <= s and table[s - u][(par - c.chis[i]) % 2] is not None:
                    row[par] = i
                    break
        table.append(row)
    return table


def combina(m, chis):
    """Case tag, threshold ``N`` and a solver (``N`` is None when no case applies)."""
    m, chis = tuple(int(x) for x in m), tuple(int(x) % 2 for x in chis)
    if len(m) != len(chis) or not m or min(m) < 1:
        raise ValueError("m and chi must be nonempty lists of equal length with m_i >= 1")
    q = reduce(gcd, m)
    tag = case_tag(m, chis)
    c = Combina(m, chis, tag, q, None)
    if tag is None:
        return c
    window = max(m) // q
    # once `window` consecutive n are solvable for both parities, all larger n are
    n, run, last_bad = 0, 0, -1
    while run < window:
        n += 1
        table = _extend(c, n)
        if table[n][0] is not None and table[n][1] is not None:
            run += 1
        else:
            run, last_bad = 0, n
    c.threshold = max(1, last_bad + 1)
    return c

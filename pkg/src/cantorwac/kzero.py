"""The dimension group K^0 as a directed system of integer lattices.

Classes live at a level as integer vectors over the towers; the connecting
maps are the incidence matrices.  Every yes/no answer carries a small
certificate dict that the ``check_*`` functions re-verify without search.
"""

from dataclasses import dataclass, field

from . import config
from .bratteli.sets import CellFunction, ClopenSet, alpha, pullback, union_all
from .errors import ContractError
from .intlinalg import matpow, matvec, rank

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class K0Element:
    diagram: object = field(compare=False)
    level: int
    vector: tuple

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(x) for x in self.vector))
        if len(self.vector) != self.diagram.n_vertices(self.level):
            raise ContractError(f"vector of length {len(self.vector)} at level {self.level} "
                                f"with {self.diagram.n_vertices(self.level)} towers")

    def push(self, m):
        return push_forward(self, m)

    def _pair(self, other):
        n = max(self.level, other.level)
        return self.push(n), other.push(n), n

    def __add__(self, other):
        a, b, n = self._pair(other)
        return K0Element(self.diagram, n, [x + y for x, y in zip(a.vector, b.vector)])

    def __sub__(self, other):
        a, b, n = self._pair(other)
        return K0Element(self.diagram, n, [x - y for x, y in zip(a.vector, b.vector)])

    def __neg__(self):
        return K0Element(self.diagram, self.level, [-x for x in self.vector])

    def scale(self, k):
        return K0Element(self.diagram, self.level, [k * x for x in self.vector])

    def is_zero_here(self):
        return not any(self.vector)


@dataclass
class TriState:
    """Verdict plus certificate.  ``witness`` holds live objects (sets,
    transfer functions) that do not go into serialized reports."""

    verdict: str
    certificate: dict = field(default_factory=dict)
    witness: object = None

    @property
    def yes(self):
        return self.verdict == YES

    @property
    def no(self):
        return self.verdict == NO

    @property
    def unknown(self):
        return self.verdict == UNKNOWN

    def as_dict(self):
        return {"verdict": self.verdict, "certificate": self.certificate}


def unit(d, level=0):
    """``[1_X]`` at ``level``."""
    return K0Element(d, level, d.heights(level))


def zero(d, level=0):
    return K0Element(d, level, [0] * d.n_vertices(level))


def k0_class(f):
    """Tower sums of an integer cell function."""
    d = f.diagram
    vec = [0] * d.n_vertices(f.level)
    for (v, _), x in f.values.items():
        vec[v] += int(x)
    return K0Element(d, f.level, vec)


def set_class(s):
    return K0Element(s.diagram, s.level, s.class_vector())


def push_forward(a, m):
    if m < a.level:
        raise ContractError(f"cannot push level-{a.level} class back to level {m}")
    vec = list(a.vector)
    for n in range(a.level, m):
        vec = matvec(a.diagram.incidence(n), vec)
    return K0Element(a.diagram, m, vec)


def _bound_for(d, bound):
    return bound if d.depth is None else min(bound, d.depth)


def _aligned_start(d, level):
    """First level >= ``level`` inside the repeating part at phase 0."""
    s, per = d.stationary_start, len(d.period)
    n = max(level, s)
    return n + (-(n - s)) % per


def period_matrix(d, n):
    """Product of one full period of incidence matrices from level ``n``."""
    return d.composed_incidence(n, n + len(d.period))


def _kernel_stable_power(k):
    r = 0
    while rank(matpow(k, r)) != rank(matpow(k, r + 1)):
        r += 1
    return r


# -- equality ------------------------------------------------------------


def classes_equal(a, b, bound):
    diff = a - b
    d = a.diagram
    top = _bound_for(d, bound)
    for n in range(diff.level, max(diff.level, top) + 1):
        if diff.push(n).is_zero_here():
            return TriState(YES, {"kind": "equal-at-level", "level": n})
    if not d.stationary:
        return TriState(UNKNOWN, {"bound": top, "level_reached": max(diff.level, top)})
    n0 = _aligned_start(d, diff.level)
    k = period_matrix(d, n0)
    r = _kernel_stable_power(k)
    image = matvec(matpow(k, r), list(diff.push(n0).vector))
    if any(image):
        return TriState(NO, {"kind": "stable-kernel", "start": n0, "power": r,
                             "image": image})
    # zero only past the bound: still a yes, certified at that level
    return TriState(YES, {"kind": "equal-at-level", "level": n0 + r * len(d.period)})


def check_equal_certificate(a, b, tri):
    cert = tri.certificate
    diff = a - b
    d = a.diagram
    if tri.yes:
        return cert["level"] >= diff.level and diff.push(cert["level"]).is_zero_here()
    if tri.no:
        n0, r = cert["start"], cert["power"]
        if n0 < diff.level or not d.stationary or n0 < d.stationary_start:
            return False
        k = period_matrix(d, n0)
        if rank(matpow(k, r)) != rank(matpow(k, r + 1)):
            return False
        return any(matvec(matpow(k, r), list(diff.push(n0).vector)))
    return False


def is_coboundary(f, bound):
    """Decide ``f in B_alpha``; a yes carries ``g`` with ``f = g - g o alpha^-1``."""
    d = f.diagram
    tri = classes_equal(k0_class(f), zero(d, f.level), bound)
    if not tri.yes:
        return tri
    level = max(tri.certificate["level"], f.level)
    fl = f.refine(level)
    h = d.heights(level)
    g = {}
    for v in range(len(h)):
        run = 0
        for k in range(1, h[v] + 1):
            run += fl((v, k))
            g[(v, k)] = run
    g = CellFunction(d, level, g)
    tri.witness = g
    tri.certificate = dict(tri.certificate, transfer_level=level)
    if not check_transfer(f, g, -1):
        raise AssertionError("transfer function fails the coboundary identity")
    return tri


def check_transfer(f, g, power, modulus=None):
    """``f == g - g o alpha**power`` cell-exactly (optionally mod ``modulus``)."""
    shifted = pullback(g, power)
    diff = g.combine(shifted, lambda x, y: x - y)
    lhs = f.combine(diff, lambda x, y: (x - y) % modulus if modulus else x - y)
    return all(x == 0 for x in lhs.values.values())


# -- divisibility ----------------------------------------------------------


def divisible_by(a, p, bound):
    if p < 1:
        raise ContractError("p must be positive")
    d = a.diagram
    top = _bound_for(d, bound)
    for n in range(a.level, max(a.level, top) + 1):
        vec = a.push(n).vector
        if all(x % p == 0 for x in vec):
            return TriState(YES, {"kind": "divisible-at-level", "level": n, "p": p,
                                  "quotient": [x // p for x in vec]})
    if not d.stationary:
        return TriState(UNKNOWN, {"bound": top, "p": p})
    n0 = _aligned_start(d, a.level)
    vec = [x % p for x in a.push(n0).vector]
    seen = {}
    n = n0
    while len(seen) < config.CYCLE_STATE_LIMIT:
        state = (d.phase(n), tuple(vec))
        if not any(vec):
            full = a.push(n).vector
            return TriState(YES, {"kind": "divisible-at-level", "level": n, "p": p,
                                  "quotient": [x // p for x in full]})
        if state in seen:
            return TriState(NO, {"kind": "modular-cycle", "p": p, "start": n0,
                                 "cycle_from": seen[state], "cycle_to": n})
        seen[state] = n
        vec = [x % p for x in matvec(d.incidence(n), vec)]
        n += 1
    return TriState(UNKNOWN, {"bound": top, "p": p, "state_limit": config.CYCLE_STATE_LIMIT})


def check_divisible_certificate(a, p, tri):
    cert = tri.certificate
    d = a.diagram
    if tri.yes:
        vec = a.push(cert["level"]).vector
        return [p * q for q in cert["quotient"]] == list(vec)
    if tri.no:
        n0, i, j = cert["start"], cert["cycle_from"], cert["cycle_to"]
        if not (d.stationary and a.level <= n0 <= i < j) or n0 < d.stationary_start:
            return False
        if d.phase(i) != d.phase(j):
            return False
        vec = [x % p for x in a.push(n0).vector]
        states = {}
        for n in range(n0, j + 1):
            if not any(vec):
                return False
            states[n] = tuple(vec)
            vec = [x % p for x in matvec(d.incidence(n), vec)]
        return states[i] == states[j]
    return False


# -- periodic spectrum -----------------------------------------------------


def spectrum_base_set(d, level, p):
    h = d.heights(level)
    if any(x % p for x in h):
        raise ContractError(f"p={p} does not divide every height at level {level}")
    return ClopenSet(d, level, [(v, k) for v in range(len(h)) for k in range(1, h[v] + 1, p)])


def check_spectrum_set(u, p):
    """U, alpha(U), ..., alpha^(p-1)(U) are disjoint and cover X."""
    d = u.diagram
    translates = [u]
    for _ in range(p - 1):
        translates.append(alpha(translates[-1]))
    level = max(t.level for t in translates)
    seen = set()
    for t in translates:
        cells = t.refine(level).cells
        if seen & cells:
            return False
        seen |= cells
    return seen == set(d.cells(level)) and alpha(translates[-1]) == u


def periodic_spectrum(d, pmax, bound):
    """``[(p, TriState)]`` for ``p = 1..pmax``; yes-witness is the base set U."""
    out = []
    one = unit(d)
    for p in range(1, pmax + 1):
        tri = divisible_by(one, p, bound)
        if tri.yes:
            u = spectrum_base_set(d, tri.certificate["level"], p)
            if not check_spectrum_set(u, p):
                raise AssertionError(f"spectrum set for p={p} fails the partition check")
            tri.witness = u
            tri.certificate = dict(tri.certificate, base_set=[list(c) for c in u.sorted_cells()])
        out.append((p, tri))
    return out


def spectrum_set(results):
    """Split ``periodic_spectrum`` output into yes / no / unknown lists of p."""
    split = {YES: [], NO: [], UNKNOWN: []}
    for p, tri in results:
        split[tri.verdict].append(p)
    return split


# -- mod 2 -----------------------------------------------------------------


def mod2_solve(f, bound):
    """Find ``g: X -> Z_2`` with ``f = g - g o alpha`` (values taken mod 2)."""
    d = f.diagram
    f2 = f.map(lambda x: int(x) % 2)
    tri = divisible_by(k0_class(f2), 2, bound)
    if not tri.yes:
        return tri
    level = tri.certificate["level"]
    fl = f2.refine(level)
    h = d.heights(level)
    g = {}
    for v in range(len(h)):
        cur = 0
        for k in range(1, h[v] + 1):
            g[(v, k)] = cur
            cur = (cur - fl((v, k))) % 2
    g = CellFunction(d, level, g)
    if not check_transfer(f2, g, 1, modulus=2):
        raise AssertionError("mod-2 transfer fails f = g - g o alpha")
    tri.witness = g
    tri.certificate = dict(tri.certificate, transfer_level=level)
    return tri


def indicator_class(sets):
    d = sets[0].diagram
    return set_class(union_all(d, sets))


def class_mod2_equal(a, b, bound):
    """Is ``a - b`` divisible by 2 (equality in K^0 / 2K^0)?"""
    return divisible_by(a - b, 2, bound)


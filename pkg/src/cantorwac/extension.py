"""Z_m skew products ``(x, j) -> (alpha x, j + c(x))`` as directed systems.

Over a level-N tower ``w`` sit ``m`` extension towers ``(w, j)`` whose k-th
floor is ``X(w, k) x {j + s_k(w)}`` with ``s`` the partial sums of ``c``
along the tower.  The roof of the extension is ``R_N x Z_m``: it does not
shrink to a point, so the tower classes satisfy one extra relation per
fiber.  Once ``c`` is constant (value ``c*``) on the roof ``R_N``,

    sum_w e(w, l - S_w) = sum_w e(w, l)        for every l in Z_m,

where ``S_w`` is the sum of ``c`` over tower ``w``: the roof floors that
land in fiber ``l`` and the base floors of fiber ``l`` carry the same class.
K^0 of the extension is the limit of ``Z^(V_N x Z_m)`` modulo these
relations.
"""

from dataclasses import dataclass, field

from . import config
from .bratteli.sets import CellFunction, ClopenSet, alpha, pullback
from .errors import ContractError
from .intlinalg import in_lattice, kernel_basis, lattice_basis, matvec, quotient_invariants, solve_integer
from .kzero import NO, UNKNOWN, YES, K0Element, TriState, divisible_by, k0_class, periodic_spectrum, spectrum_set, unit


@dataclass(frozen=True, eq=False)
class ZmCocycle:
    values: CellFunction
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ContractError("modulus must be positive")
        object.__setattr__(self, "values", self.values.map(lambda x: int(x) % self.m))

    @property
    def diagram(self):
        return self.values.diagram

    @property
    def level(self):
        return self.values.level

    @classmethod
    def constant(cls, d, level, value, m):
        return cls(CellFunction.constant(d, level, value), m)

    @classmethod
    def indicator(cls, s, m):
        return cls(CellFunction.indicator(s), m)


def _primes(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def minimality(c, bound):
    """``alpha x c`` is minimal iff ``c`` mod q is not a Z_q-coboundary for each
    prime q dividing m; each test is a divisibility question in K^0."""
    checks = {}
    for q in _primes(c.m):
        tri = divisible_by(k0_class(c.values.map(lambda x: x % q)), q, bound)
        checks[q] = tri
    verdicts = {t.verdict for t in checks.values()}
    if YES in verdicts:
        flag = NO
    elif verdicts <= {NO}:
        flag = YES
    else:
        flag = UNKNOWN
    return flag, checks


class SkewDirectedSystem:
    def __init__(self, c, bound=None):
        self.c = c
        self.m = c.m
        d = self.diagram = c.diagram
        self.bound = bound if bound is not None else c.level + config.REFINEMENT_BUDGET + 8
        self.start = self._roof_level()
        self.cache = {}
        self.c_star = c.values(self._roof_cell_at_c_level())

    # -- structure ----------------------------------------------------------

    def _roof_cell_at_c_level(self):
        d, n = self.diagram, self.start
        h = d.heights(n)
        return d.ancestor((0, h[0]), n, self.c.level)

    def _roof_level(self):
        d, lc = self.diagram, self.c.level
        top = lc + self.bound if d.depth is None else min(lc + self.bound, d.depth)
        for n in range(lc, top + 1):
            h = d.heights(n)
            tops = {d.ancestor((w, h[w]), n, lc) for w in range(len(h))}
            if len(tops) == 1:
                return n
        raise ContractError(f"roof never falls inside one level-{lc} cell up to level {top}")

    def size(self, n):
        return self.diagram.n_vertices(n) * self.m

    def idx(self, w, j):
        return w * self.m + j % self.m

    def partial_sums(self, n):
        """``s[w]`` = ``[s_1, ..., s_h]`` and the tower totals ``S``."""
        key = ("s", n)
        if key not in self.cache:
            if n < self.c.level:
                raise ContractError(f"level {n} is coarser than the cocycle")
            f = self.c.values.refine(n)
            h = self.diagram.heights(n)
            s, totals = [], []
            for w in range(len(h)):
                run, row = 0, []
                for k in range(1, h[w] + 1):
                    row.append(run)
                    run = (run + f((w, k))) % self.m
                s.append(row)
                totals.append(run)
            self.cache[key] = (s, totals)
        return self.cache[key]

    def totals(self, n):
        """Sum of ``c`` along each level-``n`` tower mod ``m``, by recursion on the
        level so deep levels never expand into cells."""
        key = ("S", n)
        if key not in self.cache:
            if n <= self.c.level:
                out = self.partial_sums(n)[1]
            else:
                prev = self.totals(n - 1)
                out = [sum(prev[v] for _, v in plist) % self.m
                       for plist in self.diagram._links(n - 1)[1]]
            self.cache[key] = out
        return self.cache[key]

    def heights(self, n):
        h = self.diagram.heights(n)
        return [h[w] for w in range(len(h)) for _ in range(self.m)]

    def relations(self, n):
        if n < self.start:
            raise ContractError(f"roof relations need level >= {self.start}")
        totals = self.totals(n)
        out = []
        for l in range(self.m):
            r = [0] * self.size(n)
            for w, sw in enumerate(totals):
                r[self.idx(w, l - sw)] += 1
                r[self.idx(w, l)] -= 1
            out.append(r)
        return out

    def incidence(self, n):
        """Matrix from level-``n`` extension towers to level ``n+1`` ones."""
        key = ("inc", n)
        if key not in self.cache:
            d = self.diagram
            links = d._links(n)[1]
            totals = self.totals(n)
            a = [[0] * self.size(n) for _ in range(self.size(n + 1))]
            for w, plist in enumerate(links):
                shift = 0
                for _, v in sorted(plist):
                    for j in range(self.m):
                        a[self.idx(w, j)][self.idx(v, j + shift)] += 1
                    shift = (shift + totals[v]) % self.m
            self.cache[key] = a
        return self.cache[key]

    def push(self, vec, n, m):
        for k in range(n, m):
            vec = matvec(self.incidence(k), vec)
        return vec

    def shift(self, vec, n, by=1):
        """gamma*: the class of tower ``(w, j)`` moves to ``(w, j + by)``."""
        out = [0] * self.size(n)
        for w in range(self.diagram.n_vertices(n)):
            for j in range(self.m):
                out[self.idx(w, j + by)] = vec[self.idx(w, j)]
        return out

    def pi_star(self, vec, n):
        return [vec[w] for w in range(len(vec)) for _ in range(self.m)]

    def floors(self, n, w, j):
        """The floors of extension tower ``(w, j)`` as ``(ClopenSet, fiber)`` pairs."""
        s, _ = self.partial_sums(n)
        h = self.diagram.heights(n)
        return [(ClopenSet(self.diagram, n, [(w, k)]), (j + s[w][k - 1]) % self.m) for k in range(1, h[w] + 1)]

    def state(self, n):
        return (self.diagram.phase(n), tuple(self.totals(n)))


def build_extension(c, bound=None):
    return SkewDirectedSystem(c, bound)


def check_containment(ext, n):
    """Extension floors at level ``n + 1`` sit inside the level-``n`` floors the
    incidence matrix says they do, and each floor steps to the next under
    ``alpha x c``."""
    d, m = ext.diagram, ext.m
    a = ext.incidence(n)
    f = ext.c.values
    for w in range(d.n_vertices(n + 1)):
        for j in range(m):
            fl = ext.floors(n + 1, w, j)
            for (s, t), (s2, t2) in zip(fl, fl[1:]):
                if alpha(s) != s2 or (t + f.value_on(s)) % m != t2:
                    return False
            row = a[ext.idx(w, j)]
            found = [0] * ext.size(n)
            for v in range(d.n_vertices(n)):
                for jj in range(m):
                    big = ext.floors(n, v, jj)
                    first_set, first_t = big[0]
                    hits = sum(1 for s, t in fl if s <= first_set and t == first_t)
                    found[ext.idx(v, jj)] += hits
            if found != row:
                return False
    return True


# -- periodic spectrum of the extension -------------------------------------


def _divisible_at(ext, n, p):
    h = ext.heights(n)
    gens = [[p * int(i == k) for i in range(len(h))] for k in range(len(h))] + ext.relations(n)
    return solve_integer([list(col) for col in zip(*gens)], h)


def ext_divisible(ext, p, bound):
    """Is ``[1]`` divisible by ``p`` in the extension's K^0?"""
    d = ext.diagram
    top = bound if d.depth is None else min(bound, d.depth)
    for n in range(ext.start, max(ext.start, top) + 1):
        sol = _divisible_at(ext, n, p)
        if sol is not None:
            size = ext.size(n)
            return TriState(YES, {"kind": "ext-divisible-at-level", "level": n, "p": p,
                                  "quotient": sol[:size], "relation_coefficients": sol[size:]})
    if not d.stationary:
        return TriState(UNKNOWN, {"bound": top, "p": p})
    n = max(ext.start, d.stationary_start)
    vec = [x % p for x in ext.heights(n)]
    seen = {}
    while len(seen) < config.CYCLE_STATE_LIMIT:
        state = (ext.state(n), tuple(vec))
        if state in seen:
            return TriState(NO, {"kind": "ext-modular-cycle", "p": p, "start": max(ext.start, d.stationary_start),
                                 "cycle_from": seen[state], "cycle_to": n})
        if _divisible_at(ext, n, p) is not None:
            return ext_divisible(ext, p, n)
        seen[state] = n
        vec = [x % p for x in matvec(ext.incidence(n), vec)]
        n += 1
    return TriState(UNKNOWN, {"bound": top, "p": p, "state_limit": config.CYCLE_STATE_LIMIT})


def check_ext_divisible(ext, p, tri):
    cert = tri.certificate
    if tri.yes:
        n = cert["level"]
        h = ext.heights(n)
        rel = ext.relations(n)
        lhs = [p * q for q in cert["quotient"]]
        for t, r in zip(cert["relation_coefficients"], rel):
            lhs = [a + t * b for a, b in zip(lhs, r)]
        return lhs == h
    if tri.no:
        d = ext.diagram
        n0, i, j = cert["start"], cert["cycle_from"], cert["cycle_to"]
        if not d.stationary or n0 < max(ext.start, d.stationary_start) or not n0 <= i < j:
            return False
        vec = [x % p for x in ext.heights(n0)]
        states = {}
        for n in range(n0, j + 1):
            if _divisible_at(ext, n, p) is not None:
                return False
            states[n] = (ext.state(n), tuple(vec))
            vec = [x % p for x in matvec(ext.incidence(n), vec)]
        return states[i] == states[j]
    return False


def ext_spectrum(ext, pmax, bound):
    return [(p, ext_divisible(ext, p, bound)) for p in range(1, pmax + 1)]


# -- torsion ---------------------------------------------------------------


def f0_vector(ext, n):
    """Class of ``f0(x, k) = 1 if 0 <= k < c(alpha^-1 x)`` at level ``n``."""
    d, m = ext.diagram, ext.m
    prev = pullback(ext.c.values, -1)
    if prev.level > n:
        raise ContractError(f"c o alpha^-1 needs level {prev.level}")
    prev = prev.refine(n)
    vec = [0] * ext.size(n)
    for w in range(d.n_vertices(n)):
        for j in range(m):
            for s, t in ext.floors(n, w, j):
                cp = prev.value_on(s)
                vec[ext.idx(w, j)] += int(t < cp)
    return vec


def check_f0_identity(c):
    """``f0 - f0 o gamma^-1 == 1_U - 1_U o (alpha x c)^-1`` with ``U = X x {0}``,
    evaluated on every cell and fiber."""
    m = c.m
    prev = pullback(c.values, -1)
    for cell in prev.diagram.cells(prev.level):
        cp = prev(cell)
        for k in range(m):
            lhs = int(k < cp) - int((k - 1) % m < cp)
            # (alpha x c)^-1 (x, k) = (alpha^-1 x, k - c(alpha^-1 x))
            rhs = int(k == 0) - int((k - cp) % m == 0)
            if lhs != rhs:
                return False
    return True


@dataclass
class TorsionReport:
    minimal: str
    levels: list = field(default_factory=list)
    torsion: list = None
    free_rank: int = None
    stabilized: bool = False
    f0_order: int = None
    f0_identity: bool = None

    @property
    def cyclic_order(self):
        if self.torsion is None:
            return None
        if len(self.torsion) > 1:
            return None
        return self.torsion[0] if self.torsion else 1

    def as_dict(self):
        return {
            "minimal": self.minimal,
            "levels": self.levels,
            "torsion": self.torsion,
            "free_rank": self.free_rank,
            "stabilized": self.stabilized,
            "cyclic_order": self.cyclic_order,
            "f0_order": self.f0_order,
            "f0_identity": self.f0_identity,
        }


def _quotient_at(ext, n):
    size = ext.size(n)
    rel = ext.relations(n)
    # x with (I - G) x in span(R): kernel of [I - G | -R], first coordinates
    cols = []
    for k in range(size):
        e = [int(i == k) for i in range(size)]
        ge = ext.shift(e, n)
        cols.append([a - b for a, b in zip(e, ge)])
    cols += [[-x for x in r] for r in rel]
    mat = [list(row) for row in zip(*cols)]
    ker = kernel_basis(mat, len(cols))
    l1 = lattice_basis([v[:size] for v in ker], size)
    nv = ext.diagram.n_vertices(n)
    l0 = rel + [ext.pi_star([int(i == w) for i in range(nv)], n) for w in range(nv)]
    torsion, free = quotient_invariants(l1, l0)
    return l1, l0, torsion, free


def torsion_check(ext, bound, stable_runs=2):
    """Torsion of ``Ker(id - gamma*) / pi*(K^0)`` computed level by level until
    the invariant factors repeat ``stable_runs`` times."""
    flag, _ = minimality(ext.c, bound)
    report = TorsionReport(minimal=flag, f0_identity=check_f0_identity(ext.c))
    d = ext.diagram
    top = bound if d.depth is None else min(bound, d.depth)
    prev, run = None, 0
    first = max(ext.start, pullback(ext.c.values, -1).level)
    for n in range(first, max(first, top) + 1):
        l1, l0, torsion, free = _quotient_at(ext, n)
        f0 = f0_vector(ext, n)
        order = None
        if in_lattice(l1, f0):
            for t in range(1, ext.m * 4 + 1):
                if in_lattice(l0, [t * x for x in f0]):
                    order = t
                    break
        report.levels.append({"level": n, "torsion": torsion, "free_rank": free, "f0_order": order})
        key = (tuple(torsion), free, order)
        run = run + 1 if key == prev else 1
        prev = key
        report.torsion, report.free_rank, report.f0_order = torsion, free, order
        if run >= stable_runs:
            report.stabilized = True
            break
    return report


# -- spectrum prediction from the base system ------------------------------


def _two_power_gap(d, pmax, bound):
    """``n`` with ``2^(n-1)`` in PS and ``2^n`` not.  Only ``2^n <= pmax`` is
    searched: a larger gap adds nothing to the spectrum below ``pmax``."""
    trail = []
    n = 1
    while 2 ** n <= pmax:
        lo = divisible_by(unit(d), 2 ** (n - 1), bound)
        hi = divisible_by(unit(d), 2 ** n, bound)
        trail.append([n, lo.verdict, hi.verdict])
        if lo.yes and hi.no:
            return n, lo, trail
        if not (lo.yes and hi.yes):
            break
        n += 1
    return None, None, trail


def ps_extension(c, pmax, bound):
    """PS of ``alpha x c`` computed on the extension directly and predicted from
    the divisibility data of X; disagreement raises."""
    if c.m != 2:
        raise ContractError("the spectrum prediction is for Z_2 cocycles")
    d = c.diagram
    base = periodic_spectrum(d, pmax, bound)
    ps = spectrum_set(base)
    ext = build_extension(c)
    direct = ext_spectrum(ext, pmax, bound)
    dset = spectrum_set(direct)

    cls = divisible_by(k0_class(c.values), 2, bound)
    prediction = {"class_mod2_zero": cls.verdict}
    if cls.yes:
        branch, predicted = "equal", list(ps[YES])
    elif cls.no:
        n, lo, trail = _two_power_gap(d, pmax, bound)
        prediction["two_power_trail"] = trail
        if n is None:
            branch, predicted = "equal", list(ps[YES])
        else:
            q = lo.certificate["quotient"]
            f = K0Element(d, lo.certificate["level"], q)
            gate = divisible_by(k0_class(c.values) - f, 2, bound)
            prediction.update(n=n, f_level=lo.certificate["level"], f_vector=q, gate=gate.verdict)
            if gate.yes:
                branch = "doubled"
                predicted = sorted({p for p in ps[YES]} | {2 * p for p in ps[YES] if 2 * p <= pmax})
            elif gate.no:
                branch, predicted = "equal", list(ps[YES])
            else:
                branch, predicted = "unknown", None
    else:
        branch, predicted = "unknown", None

    decided = not (ps[UNKNOWN] or dset[UNKNOWN]) and predicted is not None
    agree = (predicted == dset[YES]) if decided else None
    if decided and not agree:
        raise AssertionError(f"direct PS {dset[YES]} != predicted {predicted}")
    if not set(ps[YES]) <= set(dset[YES]) | set(dset[UNKNOWN]):
        raise AssertionError("PS(alpha) not contained in PS(alpha x c)")
    return {
        "pmax": pmax,
        "ps_base": ps,
        "ps_extension": dset,
        "branch": branch,
        "predicted": predicted,
        "agree": agree,
        "prediction": prediction,
        "certificates": {str(p): t.as_dict() for p, t in direct},
        "_direct": direct,
    }

"""Building sigma with sigma alpha sigma^-1 = beta on a lumped tower partition.

The recipe: pick a tower partition Q of Y whose lumped cells refine the
target partition, let p be the gcd of its heights, find a level of X where
p divides every height and the towers are tall enough for every height to
be a sum of Q heights, then pack copies of Q towers end to end into the X
towers.  sigma sends each X floor to the matching floor of a Q copy.
"""

from dataclasses import dataclass, field
from functools import reduce
from math import gcd

from .bratteli.sets import ClopenSet, alpha, refine_cells, roof, union_all
from .bratteli.towers import divide_tower, kr_partition
from .errors import ContractError, RefusalError, UnknownError
from .kzero import divisible_by, unit


def _representable(targets, gens):
    """``ok[x]`` for ``0 <= x <= targets``: x is a nonnegative combination of gens."""
    ok = [False] * (targets + 1)
    ok[0] = True
    for x in range(1, targets + 1):
        ok[x] = any(g <= x and ok[x - g] for g in gens)
    return ok


def semigroup_threshold(heights, p=None):
    """Least ``N >= 1`` with ``p*n`` representable by ``heights`` for all ``n >= N``."""
    heights = [int(h) for h in heights]
    if not heights:
        raise ContractError("empty height list")
    g = reduce(gcd, heights)
    p = g if p is None else p
    if p != g:
        raise ContractError(f"p={p} is not the gcd {g} of the heights")
    gens = sorted({h // p for h in heights})
    if gens[0] == 1:
        return 1
    # every n past (min-1)*(max-1) is representable (gcd 1)
    limit = (gens[0] - 1) * (gens[-1] - 1)
    ok = _representable(limit, gens)
    last_bad = max((x for x in range(limit + 1) if not ok[x]), default=0)
    return max(1, last_bad + 1)


def height_decomposition(h, heights):
    """Counts ``a_w`` (in the order of ``heights``) with ``sum a_w h_w = h``.

    Tallest towers are filled first, each with the largest count that still
    leaves a representable remainder.  Returns None when ``h`` is not
    representable.
    """
    order = sorted(range(len(heights)), key=lambda i: (-heights[i], i))
    # suffix[i][x]: x representable by heights of order[i:]
    suffix = [None] * (len(order) + 1)
    suffix[len(order)] = [x == 0 for x in range(h + 1)]
    for i in range(len(order) - 1, -1, -1):
        hw, nxt = heights[order[i]], suffix[i + 1]
        cur = list(nxt)
        for x in range(hw, h + 1):
            cur[x] = cur[x] or cur[x - hw]
        suffix[i] = cur
    if not suffix[0][h]:
        return None
    a = [0] * len(heights)
    rest = h
    for i, w in enumerate(order):
        hw = heights[w]
        count = rest // hw
        while not suffix[i + 1][rest - count * hw]:
            count -= 1
        a[w] = count
        rest -= count * hw
    return tuple(a)


@dataclass
class MatchingPlan:
    """``a[v][w]`` copies of Q tower ``w`` packed into P tower ``v``.

    ``segments[v]`` lists ``(w, copy, first_floor)``; ``pi`` sends the Q'
    floor ``((w, copy), j)`` to the P cell ``(v, first_floor + j - 1)``.
    """

    a: list
    b: list
    p_heights: tuple
    q_heights: tuple
    segments: dict
    pi: dict

    def check(self):
        for v, hv in enumerate(self.p_heights):
            if sum(n * hw for n, hw in zip(self.a[v], self.q_heights)) != hv:
                raise ContractError(f"height equation fails for tower {v}")
        if sum(self.p_heights) != sum(bw * hw for bw, hw in zip(self.b, self.q_heights)):
            raise ContractError("cell counts of P and Q' differ")
        if len(set(self.pi.values())) != len(self.pi) or len(self.pi) != sum(self.p_heights):
            raise ContractError("pi is not a bijection")
        for ((w, c), j), (v, k) in self.pi.items():
            nxt = self.pi.get(((w, c), j + 1))
            if nxt is not None and nxt != (v, k + 1):
                raise ContractError(f"copy {(w, c)} floor {j} is not followed consecutively")
        return True

    def table(self):
        return [[v, [[w, n] for w, n in enumerate(row) if n]] for v, row in enumerate(self.a)]


def tower_matching(p_heights, q_heights, a):
    p_heights, q_heights = tuple(p_heights), tuple(q_heights)
    if len(a) != len(p_heights) or any(len(row) != len(q_heights) for row in a):
        raise ContractError("matrix a has the wrong shape")
    for v, hv in enumerate(p_heights):
        if sum(n * hw for n, hw in zip(a[v], q_heights)) != hv:
            raise ContractError(f"a does not decompose h({v}) = {hv}")
    b = [sum(a[v][w] for v in range(len(p_heights))) for w in range(len(q_heights))]
    used = [0] * len(q_heights)
    segments, pi = {}, {}
    for v in range(len(p_heights)):
        floor = 1
        segs = []
        for w in range(len(q_heights)):
            for _ in range(a[v][w]):
                c = used[w]
                used[w] += 1
                segs.append((w, c, floor))
                for j in range(1, q_heights[w] + 1):
                    pi[((w, c), j)] = (v, floor + j - 1)
                floor += q_heights[w]
        segments[v] = segs
    plan = MatchingPlan([list(r) for r in a], b, p_heights, q_heights, segments, pi)
    plan.check()
    return plan


@dataclass
class PartitionMap:
    """sigma as a map from level-``x_level`` cells of X onto floors of Q'."""

    x_diagram: object
    y_diagram: object
    x_level: int
    q_level: int
    cell_map: dict
    plan: object = None
    p: int = 1
    threshold: int = 1
    certificates: dict = field(default_factory=dict)

    def preimage(self, s):
        """Union of X cells whose images lie in ``s``; raises if some image straddles it."""
        out = []
        for c, img in sorted(self.cell_map.items()):
            inter = img & s
            if inter.is_empty():
                continue
            if not img <= s:
                raise ContractError(f"image of X cell {c} straddles the set")
            out.append(c)
        return ClopenSet(self.x_diagram, self.x_level, out)

    def image(self, s):
        level = max(s.level, self.x_level)
        coarse = s.refine(level).coarsen()
        if coarse.level > self.x_level:
            raise ContractError("set is finer than the matched level; sigma is only fixed on cells")
        cells = coarse.refine(self.x_level).cells
        return union_all(self.y_diagram, [self.cell_map[c] for c in sorted(cells)])

    def lumped_cells(self):
        """Cells of the lumped Q partition of Y: non-roof cells, then the roof."""
        d, q = self.y_diagram, self.q_level
        h = d.heights(q)
        inner = [ClopenSet(d, q, [(w, k)]) for w in range(len(h)) for k in range(1, h[w])]
        return inner + [roof(d, q)]


def identity_map(d, level):
    """sigma = id, matched at ``level`` (X and Y the same system)."""
    cells = {c: ClopenSet(d, level, [c]) for c in d.cells(level)}
    return PartitionMap(d, d, level, level, cells)


def _lumped_refines(d, q, partition):
    h = d.heights(q)
    level = max([q] + [s.level for s in partition])
    owner = {}
    for i, s in enumerate(partition):
        for c in s.refine(level).cells:
            owner[c] = i

    def single(cells_q):
        found = {owner[c] for c in refine_cells(d, cells_q, q, level)}
        return len(found) == 1

    if any(not single([(w, k)]) for w in range(len(h)) for k in range(1, h[w])):
        return False
    return single([(w, h[w]) for w in range(len(h))])


def choose_q_level(y, partition, bound):
    start = max(s.level for s in partition)
    top = start + bound if y.depth is None else min(start + bound, y.depth)
    for q in range(start, top + 1):
        if _lumped_refines(y, q, partition):
            return q
    raise UnknownError(f"no level of Y up to {top} has lumped cells finer than the partition")


def _split_base(y, q, w, parts):
    """``parts`` nonempty pieces of the base cell ``(w, 1)``: single cells, then the rest."""
    level = q
    cells = [(w, 1)]
    while len(cells) < parts:
        level += 1
        y.check_level(level)
        cells = sorted(refine_cells(y, cells, level - 1, level))
    pieces = [ClopenSet(y, level, [c]) for c in cells[:parts - 1]]
    pieces.append(ClopenSet(y, level, cells[parts - 1:]))
    return pieces


def synthesize_conjugator(x, y, partition, bound):
    """sigma: X -> Y with sigma alpha sigma^-1 (U) = beta(U) for the lumped
    cells U of a Y tower partition refining ``partition``."""
    q = choose_q_level(y, partition, bound)
    qh = y.heights(q)
    p = reduce(gcd, qh)
    tri = divisible_by(unit(x), p, bound)
    if tri.no:
        # the least divisor of p missing from PS(X) is the sharpest obstruction
        for e in range(2, p + 1):
            if p % e == 0:
                sub = divisible_by(unit(x), e, bound)
                if sub.no:
                    raise RefusalError(f"p={e} is not in the periodic spectrum of X (Q heights have gcd {p})",
                                       dict(sub.as_dict(), q_gcd=p))
        raise RefusalError(f"p={p} is not in the periodic spectrum of X", tri.as_dict())
    if tri.unknown:
        raise UnknownError(f"p={p} in PS(X) undecided", tri.as_dict())
    big_n = semigroup_threshold(qh, p)
    start = tri.certificate["level"]
    top = start + bound if x.depth is None else min(start + bound, x.depth)
    # room for one copy of every Q tower on top of the threshold, so that
    # each Q tower can be forced into use
    need = p * big_n + sum(qh)
    n = next((m for m in range(start, top + 1) if min(x.heights(m)) >= need), None)
    if n is None:
        raise UnknownError(f"no level of X up to {top} has all heights >= {need}")
    xh = x.heights(n)
    a = [height_decomposition(hv, qh) for hv in xh]
    if any(row is None for row in a):
        raise AssertionError("height above the semigroup threshold failed to decompose")
    if any(sum(row[w] for row in a) == 0 for w in range(len(qh))):
        rest = height_decomposition(xh[0] - sum(qh), qh)
        a[0] = tuple(r + 1 for r in rest)
    return assemble(x, y, n, q, a, p, big_n, {"spectrum": tri.as_dict()})


def assemble(x, y, x_level, q_level, a, p=None, threshold=None, certificates=None):
    """sigma from a packing matrix ``a``: no search, so a stored plan can be
    rebuilt and re-verified."""
    qh = y.heights(q_level)
    plan = tower_matching(x.heights(x_level), qh, a)
    part = kr_partition(y, q_level)
    for w in range(len(qh)):
        part = divide_tower(part, w, _split_base(y, q_level, w, plan.b[w]))
    floors = {}
    for t in part.towers:
        for j, f in enumerate(t.floors, 1):
            floors[(t.label, j)] = f
    cell_map = {xcell: floors[qcell] for qcell, xcell in plan.pi.items()}
    return PartitionMap(x, y, x_level, q_level, cell_map, plan,
                        reduce(gcd, qh) if p is None else p,
                        threshold or 1, certificates or {})


@dataclass
class ConjugacyReport:
    entries: list
    deviation: object = None
    epsilon: object = None

    @property
    def ok(self):
        good = all(e["ok"] for e in self.entries)
        if self.deviation is not None and self.epsilon is not None:
            good = good and self.deviation < self.epsilon
        return good

    def failing(self):
        return [e["set"] for e in self.entries if not e["ok"]]

    def as_dict(self):
        out = {"ok": self.ok, "entries": self.entries}
        if self.deviation is not None:
            out["deviation"] = str(self.deviation)
        if self.epsilon is not None:
            out["epsilon"] = str(self.epsilon)
        return out


def conjugated_image(pm, u):
    """``sigma alpha sigma^-1 (U)``."""
    return pm.image(alpha(pm.preimage(u)))


def verify_approx_conjugacy(pm, partition=None, epsilon="exact", deviation=None):
    """Check ``sigma alpha sigma^-1 (U) = beta(U)`` for the lumped cells and the
    given partition; ``deviation`` (from a cocycle construction) is compared
    against ``epsilon`` when both are given."""
    sets = [("Q~", s) for s in pm.lumped_cells()]
    sets += [("F", s) for s in (partition or [])]
    entries = []
    for tag, u in sets:
        try:
            ok = conjugated_image(pm, u) == alpha(u)
            why = ""
        except ContractError as exc:
            ok, why = False, str(exc)
        entry = {"set": f"{tag}:{u.level}:{sorted(u.cells)}", "ok": ok}
        if why:
            entry["reason"] = why
        entries.append(entry)
    eps = None if epsilon == "exact" else epsilon
    return ConjugacyReport(entries, deviation, eps)


def decide_wac(x, y, pmax, bound):
    """Compare periodic spectra up to ``pmax`` in both directions."""
    from .kzero import periodic_spectrum, spectrum_set

    sx, sy = periodic_spectrum(x, pmax, bound), periodic_spectrum(y, pmax, bound)
    px, py = spectrum_set(sx), spectrum_set(sy)
    obstructions = []
    for (p, tx), (_, ty) in zip(sx, sy):
        if tx.yes and ty.no:
            obstructions.append({"p": p, "in": "X", "not_in": "Y", "certificate": ty.as_dict()})
        if ty.yes and tx.no:
            obstructions.append({"p": p, "in": "Y", "not_in": "X", "certificate": tx.as_dict()})
    if obstructions:
        verdict = "no"
    elif px["unknown"] or py["unknown"]:
        verdict = "unknown"
    else:
        verdict = "yes"
    return {"verdict": verdict, "pmax": pmax, "spectrum_x": px, "spectrum_y": py,
            "obstructions": obstructions}

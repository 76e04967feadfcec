"""Topological full group elements as cell-wise powers of alpha."""

from dataclasses import dataclass

from . import config
from .bratteli.sets import ClopenSet, alpha, union_all
from .errors import ContractError, RefusalError, UnknownError
from .kzero import classes_equal, set_class


@dataclass(frozen=True, eq=False)
class FullGroupElement:
    """``x -> alpha**n(x) (x)`` with ``n`` constant on level-``level`` cells."""

    diagram: object
    level: int
    powers: dict

    def __post_init__(self):
        missing = set(self.diagram.cells(self.level)) - set(self.powers)
        if missing:
            raise ContractError(f"power function undefined on {sorted(missing)[:3]}")

    @classmethod
    def identity(cls, d, level=0):
        return cls(d, level, {c: 0 for c in d.cells(level)})

    @classmethod
    def alpha_power(cls, d, n, level=0):
        return cls(d, level, {c: n for c in d.cells(level)})

    @classmethod
    def from_permutation(cls, d, level, perm):
        """Element permuting level cells within towers; ``perm`` maps cell to cell,
        unlisted cells are fixed."""
        powers = {}
        for c in d.cells(level):
            img = perm.get(c, c)
            if img[0] != c[0]:
                raise ContractError(f"{c} -> {img} leaves its tower")
            powers[c] = img[1] - c[1]
        return cls(d, level, powers)

    def power(self, cell, level):
        return self.powers[self.diagram.ancestor(cell, level, self.level)]

    def pieces(self):
        return [(ClopenSet(self.diagram, self.level, [c]), n) for c, n in sorted(self.powers.items())]

    def max_power(self):
        return max(abs(n) for n in self.powers.values())

    def is_identity(self):
        return all(n == 0 for n in self.powers.values())

    def coarsened(self):
        """Same element on the coarsest level where the powers stay cell-constant."""
        d, level, powers = self.diagram, self.level, dict(self.powers)
        while level > 0:
            up = {}
            for c, n in powers.items():
                up.setdefault(d.parent(level, c), set()).add(n)
            if any(len(ns) != 1 for ns in up.values()):
                break
            powers = {c: ns.pop() for c, ns in up.items()}
            level -= 1
        return FullGroupElement(d, level, powers)

    def image_pieces(self):
        return [alpha(s, n) for s, n in self.pieces()]

    def __repr__(self):
        nz = {c: n for c, n in sorted(self.powers.items()) if n}
        return f"FullGroupElement(level={self.level}, nonzero={nz})"


def from_pieces(d, pieces):
    """Assemble an element from ``(ClopenSet, power)`` pieces partitioning X."""
    level = max(s.level for s, _ in pieces)
    powers = {}
    for s, n in pieces:
        for c in s.refine(level).cells:
            if c in powers:
                raise ContractError(f"pieces overlap at {c}")
            powers[c] = n
    return FullGroupElement(d, level, powers).coarsened()


def apply(g, s):
    d = g.diagram
    level = max(g.level, s.level)
    s = s.refine(level)
    groups = {}
    for c in s.cells:
        groups.setdefault(g.power(c, level), set()).add(c)
    images = [alpha(ClopenSet(d, level, cells), n) for n, cells in sorted(groups.items())]
    if not images:
        return ClopenSet.empty(d, level)
    return union_all(d, images)


def is_bijective(g):
    d = g.diagram
    images = g.image_pieces()
    level = max(s.level for s in images)
    seen = set()
    for s in images:
        cells = s.refine(level).cells
        if seen & cells:
            return False
        seen |= cells
    return seen == set(d.cells(level))


def compose(g, h):
    """``g o h``: first ``h`` then ``g``."""
    d = g.diagram
    pieces = []
    for s, n in h.pieces():
        img = alpha(s, n)
        for t, m in g.pieces():
            part = img & t
            if not part.is_empty():
                pieces.append((alpha(part, -n), n + m))
    return from_pieces(d, pieces)


def invert(g):
    return from_pieces(g.diagram, [(alpha(s, n), -n) for s, n in g.pieces()])


def equal(g, h):
    level = max(g.level, h.level)
    return all(g.power(c, level) == h.power(c, level) for c in g.diagram.cells(level))


# -- Hopf exchanges --------------------------------------------------------


def _floors_by_tower(cells):
    out = {}
    for v, k in sorted(cells):
        out.setdefault(v, []).append(k)
    return out


def _subset_level(u, v, bound):
    d = u.diagram
    start = max(u.level, v.level)
    top = bound if d.depth is None else min(bound, d.depth)
    for n in range(start, max(start, top) + 1):
        a, b = u.refine(n).class_vector(), v.refine(n).class_vector()
        if all(x <= y for x, y in zip(a, b)):
            return n
    return None


def hopf_exchange(u, v, bound, subset=False):
    """``gamma`` with ``gamma(U) = V`` (or ``gamma(U) <= V`` when ``subset``).

    Floors of ``U - V`` are swapped with the lowest available floors of
    ``V - U`` in the same tower; everything else is fixed.
    """
    d = u.diagram
    if subset:
        level = _subset_level(u, v, bound)
        if level is None:
            raise UnknownError(f"[1_U] <= [1_V] not certified up to level {bound}")
    else:
        tri = classes_equal(set_class(u), set_class(v), bound)
        if tri.no:
            raise RefusalError("[1_U] != [1_V]", tri.certificate)
        if tri.unknown:
            raise UnknownError("class equality undecided", tri.certificate)
        level = max(tri.certificate["level"], u.level, v.level)
    uc, vc = u.refine(level).cells, v.refine(level).cells
    src, dst = _floors_by_tower(uc - vc), _floors_by_tower(vc - uc)
    perm = {}
    for tower, ks in src.items():
        targets = dst.get(tower, [])
        if len(targets) < len(ks):
            raise AssertionError(f"tower {tower}: {len(ks)} floors to move, {len(targets)} free")
        for a, b in zip(ks, targets):
            perm[(tower, a)] = (tower, b)
            perm[(tower, b)] = (tower, a)
    g = FullGroupElement.from_permutation(d, level, perm)
    img = apply(g, u)
    if not (img <= v if subset else img == v):
        raise AssertionError("exchange does not carry U onto V")
    return g


# -- conjugating alpha onto a prescribed partition action --------------------


def _euler_path(counts, start, end):
    """Hierholzer on a multigraph given as ``{(a, b): multiplicity}``; the
    lowest-labelled unused edge is always taken first."""
    adj = {}
    for (a, b), m in sorted(counts.items()):
        if m:
            adj.setdefault(a, []).extend([b] * m)
    for a in adj:
        adj[a].sort(reverse=True)  # pop() takes the smallest
    stack, path = [start], []
    while stack:
        x = stack[-1]
        if adj.get(x):
            stack.append(adj[x].pop())
        else:
            path.append(stack.pop())
    path.reverse()
    if len(path) != sum(counts.values()) + 1 or path[-1] != end:
        return None
    return path


def lemma_key_conjugator(partition, targets, bound=None):
    """``sigma`` in the full group with ``sigma alpha sigma^-1 (P_i) = targets[i]``.

    ``targets`` are the images of the partition sets under some other
    homeomorphism; each must have the class of its source.
    """
    partition, targets = list(partition), list(targets)
    if len(partition) != len(targets):
        raise ContractError("partition and targets differ in length")
    d = partition[0].diagram
    bound = config.REFINEMENT_BUDGET + 8 if bound is None else bound
    start = max(s.level for s in partition + targets)
    for i, (p, t) in enumerate(zip(partition, targets)):
        tri = classes_equal(set_class(p), set_class(t), start + bound)
        if not tri.yes:
            raise ContractError(f"partition set {i}: [1_U] = [1_beta(U)] is {tri.verdict}")
        start = max(start, tri.certificate["level"])
    if all(alpha(p) == t for p, t in zip(partition, targets)):
        return FullGroupElement.identity(d)

    k = len(partition)
    top = start + bound if d.depth is None else min(start + bound, d.depth)
    for level in range(start, top + 1):
        pc = [p.refine(level).cells for p in partition]
        tc = [t.refine(level).cells for t in targets]
        atoms = {(i, j): pc[i] & tc[j] for i in range(k) for j in range(k)}
        nonempty = sorted(key for key, cells in atoms.items() if cells)
        towers = range(d.n_vertices(level))
        if any(not any(c[0] == v for c in atoms[key]) for key in nonempty for v in towers):
            continue
        i0, j0 = nonempty[0]
        h = d.heights(level)
        labels = {}
        for v in towers:
            counts = {}
            for (i, j) in nonempty:
                counts[(j, i)] = sum(1 for c in atoms[(i, j)] if c[0] == v)
            counts[(j0, i0)] -= 1
            path = _euler_path(counts, i0, j0)
            if path is None or len(path) != h[v]:
                break
            for kk, lab in enumerate(path, 1):
                labels[(v, kk)] = lab
        else:
            sigma = _match_atoms(d, level, atoms, labels)
            if not check_key_conjugator(sigma, partition, targets):
                raise AssertionError("constructed conjugator fails verification")
            return sigma
    raise UnknownError(f"no level up to {top} carries every atom in every tower")


def _match_atoms(d, level, atoms, labels):
    h = d.heights(level)
    tgt = {}
    for (v, kk), lab in labels.items():
        prev = labels[(v, h[v])] if kk == 1 else labels[(v, kk - 1)]
        # the base floor is alpha of the whole roof, all labelled j0
        tgt.setdefault((lab, prev), set()).add((v, kk))
    tau = {}
    for key, cells in atoms.items():
        src, dst = _floors_by_tower(cells), _floors_by_tower(tgt.get(key, ()))
        for v, ks in src.items():
            for a, b in zip(ks, dst.get(v, [])):
                tau[(v, a)] = (v, b)
    if len(tau) != len(d.cells(level)):
        raise AssertionError("atom matching is not a bijection")
    return FullGroupElement.from_permutation(d, level, {b: a for a, b in tau.items()})


def check_key_conjugator(sigma, partition, targets):
    inv = invert(sigma)
    return all(apply(sigma, alpha(apply(inv, p))) == t for p, t in zip(partition, targets))

"""Clopen sets, cell functions and the Vershik map on the cell algebra."""

from dataclasses import dataclass

from .. import config
from ..errors import ContractError, DepthError


def refine_cells(d, cells, n_from, n_to):
    cells = set(cells)
    for n in range(n_from, n_to):
        cells = {c for cell in cells for c in d.children(n, cell)}
    return cells


@dataclass(frozen=True, eq=False)
class ClopenSet:
    """A finite union of level-``level`` cells of ``diagram``."""

    diagram: object
    level: int
    cells: frozenset

    def __post_init__(self):
        object.__setattr__(self, "cells", frozenset(self.cells))

    @classmethod
    def whole(cls, d, level=0):
        return cls(d, level, d.cells(level))

    @classmethod
    def empty(cls, d, level=0):
        return cls(d, level, ())

    @classmethod
    def cell(cls, d, level, v, k):
        return cls(d, level, [(v, k)])

    def refine(self, level):
        if level < self.level:
            raise ValueError(f"cannot refine level-{self.level} set to level {level}")
        if level == self.level:
            return self
        self.diagram.check_level(level)
        return ClopenSet(self.diagram, level, refine_cells(self.diagram, self.cells, self.level, level))

    def coarsen(self):
        """Same set at the smallest level where it is a union of cells."""
        d, cur, level = self.diagram, self.cells, self.level
        while level > 0:
            parents = {}
            for c in cur:
                parents.setdefault(d.parent(level, c), set()).add(c)
            if any(len(kids) != len(d.children(level - 1, p)) for p, kids in parents.items()):
                break
            cur, level = frozenset(parents), level - 1
        return ClopenSet(d, level, cur)

    def _aligned(self, other):
        if other.diagram is not self.diagram and other.diagram != self.diagram:
            raise ContractError("clopen sets live on different diagrams")
        level = max(self.level, other.level)
        return self.refine(level).cells, other.refine(level).cells, level

    def __or__(self, other):
        a, b, n = self._aligned(other)
        return ClopenSet(self.diagram, n, a | b)

    def __and__(self, other):
        a, b, n = self._aligned(other)
        return ClopenSet(self.diagram, n, a & b)

    def __sub__(self, other):
        a, b, n = self._aligned(other)
        return ClopenSet(self.diagram, n, a - b)

    def complement(self):
        return ClopenSet.whole(self.diagram, self.level) - self

    def __eq__(self, other):
        if not isinstance(other, ClopenSet):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a == b

    def __hash__(self):
        c = self.coarsen()
        return hash((c.level, c.cells))

    def __le__(self, other):
        a, b, _ = self._aligned(other)
        return a <= b

    def isdisjoint(self, other):
        a, b, _ = self._aligned(other)
        return a.isdisjoint(b)

    def is_empty(self):
        return not self.cells

    def class_vector(self):
        """Number of cells in each tower; this represents ``[1_S]`` in K^0."""
        vec = [0] * self.diagram.n_vertices(self.level)
        for v, _ in self.cells:
            vec[v] += 1
        return tuple(vec)

    def sorted_cells(self):
        return sorted(self.cells)

    def __repr__(self):
        return f"ClopenSet(level={self.level}, cells={sorted(self.cells)})"


def union_all(d, sets, level=None):
    sets = list(sets)
    if level is None:
        level = max([s.level for s in sets], default=0)
    out = set()
    for s in sets:
        out |= s.refine(level).cells
    return ClopenSet(d, level, out)


@dataclass(frozen=True, eq=False)
class CellFunction:
    """A function constant on the cells of one level (values are any objects)."""

    diagram: object
    level: int
    values: dict

    def __post_init__(self):
        missing = set(self.diagram.cells(self.level)) - set(self.values)
        if missing:
            raise ContractError(f"cell function undefined on {sorted(missing)[:3]}")

    @classmethod
    def constant(cls, d, level, value):
        return cls(d, level, {c: value for c in d.cells(level)})

    @classmethod
    def indicator(cls, s):
        return cls(s.diagram, s.level, {c: int(c in s.cells) for c in s.diagram.cells(s.level)})

    def __call__(self, cell):
        return self.values[cell]

    def refine(self, level):
        if level == self.level:
            return self
        d = self.diagram
        vals = dict(self.values)
        for n in range(self.level, level):
            vals = {c: vals[cell] for cell in d.cells(n) for c in d.children(n, cell)}
        return type(self)(d, level, vals)

    def value_on(self, s):
        """The value on a clopen set, or raise if the function is not constant there."""
        level = max(self.level, s.level)
        f = self.refine(level)
        vals = {f.values[c] for c in s.refine(level).cells}
        if len(vals) != 1:
            raise ContractError(f"function not constant on {s!r}")
        return vals.pop()

    def map(self, fn):
        return CellFunction(self.diagram, self.level, {c: fn(v) for c, v in self.values.items()})

    def combine(self, other, fn):
        level = max(self.level, other.level)
        a, b = self.refine(level), other.refine(level)
        return CellFunction(self.diagram, level, {c: fn(a.values[c], b.values[c]) for c in a.values})

    def equals(self, other):
        level = max(self.level, other.level)
        return self.refine(level).values == other.refine(level).values

    def level_set(self, value):
        return ClopenSet(self.diagram, self.level, [c for c, v in self.values.items() if v == value])


def _budget_limit(d, level, budget):
    budget = config.REFINEMENT_BUDGET if budget is None else budget
    limit = level + budget
    if d.depth is not None:
        limit = min(limit, d.depth)
    return limit


def _step(d, level, cells, forward):
    h = d.heights(level)
    out, edge = set(), []
    for v, k in cells:
        if forward and k < h[v]:
            out.add((v, k + 1))
        elif not forward and k > 1:
            out.add((v, k - 1))
        else:
            edge.append(v)
    if not edge:
        return out
    if len(edge) == len(h):
        out.update((v, 1) if forward else (v, h[v]) for v in range(len(h)))
        return out
    return None


def alpha(s, power=1, budget=None):
    """``alpha**power (s)`` as an exact cell set.

    Roof cells are mapped as a block (the whole roof goes onto the whole
    base); a set containing only part of the roof is refined until that
    happens or the refinement budget is spent.
    """
    d = s.diagram
    cur = s
    forward = power > 0
    for _ in range(abs(power)):
        limit = _budget_limit(d, cur.level, budget)
        level, cells = cur.level, cur.cells
        while True:
            res = _step(d, level, cells, forward)
            if res is not None:
                break
            if level >= limit:
                raise DepthError(
                    f"image of a level-{cur.level} set under alpha^{'+' if forward else '-'}1 "
                    f"not resolvable by level {limit}")
            cells = refine_cells(d, cells, level, level + 1)
            level += 1
        cur = ClopenSet(d, level, res)
    return cur


vershik_action = alpha


def pullback(f, power, budget=None):
    """The cell function ``x -> f(alpha**power (x))``."""
    d = f.diagram
    limit = _budget_limit(d, f.level, budget)
    level = f.level
    while True:
        vals = {}
        try:
            for c in d.cells(level):
                vals[c] = f.value_on(alpha(ClopenSet(d, level, [c]), power, budget))
        except (ContractError, DepthError):
            if level >= limit:
                raise DepthError(f"f o alpha^{power} not cell-constant by level {limit}")
            level += 1
            continue
        return type(f)(d, level, vals)


def roof(d, level):
    h = d.heights(level)
    return ClopenSet(d, level, [(v, h[v]) for v in range(len(h))])


def base(d, level):
    return ClopenSet(d, level, [(v, 1) for v in range(d.n_vertices(level))])

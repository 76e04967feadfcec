"""Ordered Bratteli diagrams.

Level 0 holds the top vertices; block ``n`` carries the edges from level
``n`` to level ``n + 1``. A diagram is either finite (explicit blocks only)
or stationary: after the initial blocks a fixed tuple of blocks repeats
forever (a period of length 1 is the classical stationary diagram).

A cell ``(v, k)`` of level ``n`` is the set of infinite paths whose first
``n`` edges form the ``k``-th path (1-based, Vershik order) ending at ``v``.
Paths ending at a common vertex are ordered by the rank of the last edge
first, then recursively by the prefix.
"""

from bisect import bisect_left
from dataclasses import dataclass, field

from ..errors import DepthError, StructuralError
from ..intlinalg import matmul


@dataclass(frozen=True, order=True)
class Edge:
    source: int
    range: int
    rank: int


@dataclass(frozen=True)
class LevelBlock:
    """Edges from one level to the next, which has ``n_targets`` vertices."""

    n_targets: int
    edges: tuple

    def __post_init__(self):
        edges = (e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        object.__setattr__(self, "edges", tuple(sorted(edges, key=lambda e: (e.range, e.rank, e.source))))


@dataclass(frozen=True)
class BratteliDiagram:
    top: int
    blocks: tuple
    period: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "period", tuple(self.period))
        object.__setattr__(self, "_cache", {})
        if self.top < 1:
            raise StructuralError("top level needs at least one vertex")
        prev = self.top
        for i, blk in enumerate(self.blocks + self.period):
            for e in blk.edges:
                if not (0 <= e.source < prev and 0 <= e.range < blk.n_targets):
                    raise StructuralError(f"block {i}: edge {e} out of vertex range")
            prev = blk.n_targets
        if self.period and self.period[-1].n_targets != self.period_sources():
            raise StructuralError("period does not close up: vertex counts differ")

    # -- shape -----------------------------------------------------------

    @property
    def stationary(self):
        return bool(self.period)

    @property
    def depth(self):
        """Number of materialized levels below the top, ``None`` if unbounded."""
        return None if self.period else len(self.blocks)

    @property
    def stationary_start(self):
        return len(self.blocks)

    def period_sources(self):
        return self.blocks[-1].n_targets if self.blocks else self.top

    def phase(self, n):
        """Position of block ``n`` inside the period (``None`` before it starts)."""
        if not self.period or n < len(self.blocks):
            return None
        return (n - len(self.blocks)) % len(self.period)

    def has_level(self, n):
        return n >= 0 and (self.period or n <= len(self.blocks))

    def check_level(self, n):
        if n < 0:
            raise ValueError(f"negative level {n}")
        if not self.has_level(n):
            raise DepthError(f"level {n} exceeds materialized depth {self.depth} of {self.label()}")

    def block(self, n):
        if n < len(self.blocks):
            return self.blocks[n]
        if not self.period:
            raise DepthError(f"level {n + 1} exceeds materialized depth {self.depth} of {self.label()}")
        return self.period[(n - len(self.blocks)) % len(self.period)]

    def n_vertices(self, n):
        self.check_level(n)
        return self.top if n == 0 else self.block(n - 1).n_targets

    def label(self):
        return self.name or "diagram"

    # -- per-level data ---------------------------------------------------

    def heights(self, n):
        """Tuple of tower heights ``h_n(v)``."""
        key = ("h", n)
        cache = self._cache
        if key not in cache:
            self.check_level(n)
            if n == 0:
                cache[key] = (1,) * self.top
            else:
                prev = self.heights(n - 1)
                h = [0] * self.n_vertices(n)
                for e in self.block(n - 1).edges:
                    h[e.range] += prev[e.source]
                cache[key] = tuple(h)
        return cache[key]

    def _links(self, n):
        """Offsets for block ``n``.

        Returns ``(children, parents)`` where ``children[v]`` lists
        ``(w, offset)`` for edges out of ``v`` and ``parents[w]`` is the sorted
        list of ``(offset, v)`` for edges into ``w``.
        """
        key = ("links", n)
        cache = self._cache
        if key not in cache:
            blk = self.block(n)
            h = self.heights(n)
            check_ranks(blk, n)
            children = [[] for _ in range(self.n_vertices(n))]
            parents = [[] for _ in range(blk.n_targets)]
            running = [0] * blk.n_targets
            for e in blk.edges:
                children[e.source].append((e.range, running[e.range]))
                parents[e.range].append((running[e.range], e.source))
                running[e.range] += h[e.source]
            cache[key] = (tuple(map(tuple, children)), tuple(map(tuple, parents)))
        return cache[key]

    def children(self, n, cell):
        """Level ``n + 1`` cells making up the level-``n`` cell."""
        v, k = cell
        return [(w, off + k) for w, off in self._links(n)[0][v]]

    def parent(self, n, cell):
        """Level ``n - 1`` cell containing the level-``n`` cell."""
        w, k = cell
        plist = self._links(n - 1)[1][w]
        i = bisect_left(plist, (k, -1)) - 1
        off, v = plist[i]
        return (v, k - off)

    def ancestor(self, cell, n_from, n_to):
        for n in range(n_from, n_to, -1):
            cell = self.parent(n, cell)
        return cell

    def cells(self, n):
        h = self.heights(n)
        return [(v, k) for v in range(len(h)) for k in range(1, h[v] + 1)]

    def incidence(self, n):
        """Matrix ``M[w][v]`` = number of edges from level-``n`` ``v`` to level-``n+1`` ``w``."""
        blk = self.block(n)
        m = [[0] * self.n_vertices(n) for _ in range(blk.n_targets)]
        for e in blk.edges:
            m[e.range][e.source] += 1
        return m

    def composed_incidence(self, n, m):
        """Product of incidence matrices carrying level ``n`` to level ``m``."""
        size = self.n_vertices(n)
        result = [[int(i == j) for j in range(size)] for i in range(size)]
        for i in range(n, m):
            result = matmul(self.incidence(i), result)
        return result

    def max_parent(self, n, w):
        """Source of the maximal edge into level-``n`` vertex ``w``."""
        return self._links(n - 1)[1][w][-1][1]

    def min_parent(self, n, w):
        return self._links(n - 1)[1][w][0][1]


def check_ranks(blk, n):
    by_range = {}
    for e in blk.edges:
        by_range.setdefault(e.range, []).append(e.rank)
    for w, ranks in by_range.items():
        if sorted(ranks) != list(range(1, len(ranks) + 1)):
            raise StructuralError(
                f"vertex {w} at level {n + 1}: order-ranks {sorted(ranks)} are not 1..{len(ranks)}")


def make_block(n_targets, edges):
    return LevelBlock(n_targets, tuple(Edge(*e) for e in edges))


def block_from_matrix(matrix, order=None):
    """Block with ``matrix[w][v]`` edges from ``v`` into ``w``.

    ``order[w]`` optionally lists the sources into ``w`` in increasing rank
    (with repetitions); default is by source index.
    """
    edges = []
    for w, row in enumerate(matrix):
        if order is not None:
            seq = list(order[w])
        else:
            seq = [v for v, cnt in enumerate(row) for _ in range(cnt)]
        if sorted(seq) != sorted(v for v, cnt in enumerate(row) for _ in range(cnt)):
            raise StructuralError(f"ordering for vertex {w} does not match the incidence row")
        edges.extend(Edge(v, w, r + 1) for r, v in enumerate(seq))
    return LevelBlock(len(matrix), tuple(edges))

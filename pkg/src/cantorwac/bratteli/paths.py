"""Finite path prefixes: the finite-precision points of the path space.

The successor rule here works edge by edge and never looks at cells, so it
doubles as an independent check of the cell-level Vershik map.
"""

from dataclasses import dataclass

from ..errors import ContractError, DepthError


def _edges_into(d, n, w):
    return sorted((e for e in d.block(n).edges if e.range == w), key=lambda e: e.rank)


@dataclass(frozen=True)
class PathPrefix:
    diagram: object
    edges: tuple

    def __post_init__(self):
        edges = tuple(self.edges)
        object.__setattr__(self, "edges", edges)
        for a, b in zip(edges, edges[1:]):
            if a.range != b.source:
                raise ContractError(f"edges {a} and {b} do not compose")

    @property
    def level(self):
        return len(self.edges)

    @property
    def vertex(self):
        return self.edges[-1].range if self.edges else None

    def cell(self):
        d = self.diagram
        if not self.edges:
            raise ContractError("empty prefix has no cell below the top")
        k = 1
        for n, e in enumerate(self.edges):
            k += sum(d.heights(n)[f.source] for f in _edges_into(d, n, e.range) if f.rank < e.rank)
        return (self.vertex, k)

    @classmethod
    def from_cell(cls, d, n, cell):
        edges = []
        w, k = cell
        for m in range(n, 0, -1):
            h = d.heights(m - 1)
            off = 0
            for e in _edges_into(d, m - 1, w):
                if k <= off + h[e.source]:
                    edges.append(e)
                    w, k = e.source, k - off
                    break
                off += h[e.source]
        return cls(d, tuple(reversed(edges)))

    def _extreme_path_to(self, n, v, pick):
        d = self.diagram
        edges = []
        for m in range(n, 0, -1):
            e = pick(_edges_into(d, m - 1, v))
            edges.append(e)
            v = e.source
        return list(reversed(edges))

    def successor(self):
        return self._shift(+1)

    def predecessor(self):
        return self._shift(-1)

    def _shift(self, step):
        d = self.diagram
        for i, e in enumerate(self.edges):
            into = _edges_into(d, i, e.range)
            j = e.rank - 1 + step
            if 0 <= j < len(into):
                new = into[j]
                pick = (lambda es: es[-1]) if step < 0 else (lambda es: es[0])
                head = self._extreme_path_to(i, new.source, pick)
                return PathPrefix(d, tuple(head) + (new,) + self.edges[i + 1:])
        raise DepthError(f"prefix of length {self.level} sits on the {'roof' if step > 0 else 'base'}; "
                         "its image needs a longer prefix")


def all_prefixes(d, n):
    return [PathPrefix.from_cell(d, n, c) for c in d.cells(n)]

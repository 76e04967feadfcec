"""Kakutani-Rohlin partitions and tower division."""

from dataclasses import dataclass

from ..errors import PartitionError
from .sets import ClopenSet, alpha, union_all


@dataclass(frozen=True)
class Tower:
    label: object
    floors: tuple

    @property
    def height(self):
        return len(self.floors)

    @property
    def base(self):
        return self.floors[0]

    @property
    def roof(self):
        return self.floors[-1]


@dataclass(frozen=True, eq=False)
class KRPartition:
    """Towers of clopen floors; ``lumped`` merges all roof floors into one cell."""

    diagram: object
    level: int
    towers: tuple
    lumped: bool = False

    @property
    def heights(self):
        return {t.label: t.height for t in self.towers}

    def tower(self, label):
        for t in self.towers:
            if t.label == label:
                return t
        raise KeyError(label)

    def roof(self):
        return union_all(self.diagram, [t.roof for t in self.towers])

    def floor_cells(self):
        """All floors as ``((label, k), ClopenSet)`` pairs, ``k`` 1-based."""
        return [((t.label, k + 1), f) for t in self.towers for k, f in enumerate(t.floors)]

    def cells(self):
        """The partition's cells; the lumped view returns the roof as the last cell."""
        if not self.lumped:
            return [f for _, f in self.floor_cells()]
        inner = [f for t in self.towers for f in t.floors[:-1]]
        return inner + [self.roof()]

    def cell_count(self):
        return sum(t.height for t in self.towers)

    def check(self):
        """Verify the partition and tower properties exactly; raise on failure."""
        d = self.diagram
        floors = [f for _, f in self.floor_cells()]
        level = max(f.level for f in floors)
        seen = set()
        for f in floors:
            cells = f.refine(level).cells
            if not cells:
                raise PartitionError("empty floor")
            if seen & cells:
                raise PartitionError("floors overlap")
            seen |= cells
        if seen != set(d.cells(level)):
            raise PartitionError("floors do not cover the space")
        for t in self.towers:
            for k in range(t.height - 1):
                if alpha(t.floors[k]) != t.floors[k + 1]:
                    raise PartitionError(f"tower {t.label}: alpha(floor {k + 1}) != floor {k + 2}")
        return True


def kr_partition(d, n, lumped=False):
    """The level-``n`` partition ``{X(v, k)}`` read off the diagram."""
    h = d.heights(n)
    towers = tuple(
        Tower(v, tuple(ClopenSet(d, n, [(v, k)]) for k in range(1, h[v] + 1)))
        for v in range(len(h))
    )
    return KRPartition(d, n, towers, lumped)


def divide_tower(p, label, parts):
    """Split tower ``label`` into ``len(parts)`` towers of the same height.

    ``parts`` must partition the base floor; new tower ``i`` has floors
    ``alpha**j (parts[i])`` and label ``(label, i)``.
    """
    t = p.tower(label)
    parts = list(parts)
    if not parts:
        raise PartitionError("no parts given")
    covered = None
    for i, part in enumerate(parts):
        if part.is_empty():
            raise PartitionError(f"part {i} is empty")
        if covered is not None and not covered.isdisjoint(part):
            raise PartitionError(f"part {i} overlaps an earlier part")
        covered = part if covered is None else covered | part
    if covered != t.base:
        raise PartitionError("parts do not cover the base floor exactly")
    new = []
    for i, part in enumerate(parts):
        floors = [part]
        for k in range(1, t.height):
            nxt = alpha(floors[-1])
            if not nxt <= t.floors[k]:
                raise PartitionError(f"alpha-iterate {k} of part {i} leaves the tower")
            floors.append(nxt)
        new.append(Tower((label, i), tuple(floors)))
    towers = []
    for old in p.towers:
        towers.extend(new if old.label == label else [old])
    level = max(f.level for tw in towers for f in tw.floors)
    return KRPartition(p.diagram, level, tuple(towers), p.lumped)

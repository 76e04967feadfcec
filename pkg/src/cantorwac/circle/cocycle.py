"""Locally constant Isom(T)-valued cocycles on a Bratteli-Vershik system."""

from fractions import Fraction

from ..bratteli.fileformat import field_columns
from ..bratteli.paths import PathPrefix
from ..bratteli.sets import CellFunction
from ..errors import ContractError
from .isom import IDENTITY, IsomT


class CircleCocycle(CellFunction):
    """Cell function with :class:`IsomT` values."""

    def __post_init__(self):
        super().__post_init__()
        bad = [c for c, g in self.values.items() if not isinstance(g, IsomT)]
        if bad:
            raise ContractError(f"cocycle value at {bad[0]} is not an isometry")

    @classmethod
    def from_pairs(cls, d, level, pairs):
        """``pairs`` maps cell to ``(rot, flip)``."""
        return cls(d, level, {c: IsomT(Fraction(r), f) for c, (r, f) in pairs.items()})

    @classmethod
    def rotations(cls, d, level, rots):
        return cls(d, level, {c: IsomT(Fraction(r), 0) for c, r in rots.items()})

    def orientation(self):
        """``o(phi)`` as an integer cell function."""
        return CellFunction(self.diagram, self.level, {c: g.flip for c, g in self.values.items()})

    def is_rotation(self):
        return all(g.flip == 0 for g in self.values.values())

    def tower_orientation(self, level=None):
        """``o(phi)_v``: flips summed mod 2 along each tower."""
        f = self.refine(self.level if level is None else level)
        out = [0] * self.diagram.n_vertices(f.level)
        for (v, _), g in f.values.items():
            out[v] ^= g.flip
        return out

    def compose(self, other):
        """Pointwise ``self_x o other_x``."""
        out = self.combine(other, lambda a, b: a * b)
        return CircleCocycle(out.diagram, out.level, out.values)


def as_cocycle(f):
    return f if isinstance(f, CircleCocycle) else CircleCocycle(f.diagram, f.level, dict(f.values))


# -- file format -----------------------------------------------------------


class CocycleParseError(ContractError):
    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def parse_cocycle(text, d):
    """Records ``level v k num den flip``, one per cell; ``#`` starts a comment."""
    level, pairs = None, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 6:
            raise CocycleParseError(f"expected 6 fields, got {len(parts)}", lineno)
        cols = field_columns(line)
        try:
            lv, v, k, num, den, flip = (int(x) for x in parts)
        except ValueError:
            i = next(i for i, x in enumerate(parts) if not x.lstrip("-").isdigit())
            raise CocycleParseError(f"not an integer: {parts[i]!r}", lineno, cols[i]) from None
        if den <= 0:
            raise CocycleParseError("denominator must be positive", lineno, cols[4])
        if flip not in (0, 1):
            raise CocycleParseError("flip must be 0 or 1", lineno, cols[5])
        if level is None:
            level = lv
        elif lv != level:
            raise CocycleParseError(f"mixed levels {level} and {lv}", lineno)
        if (v, k) in pairs:
            raise CocycleParseError(f"duplicate cell {(v, k)}", lineno)
        pairs[(v, k)] = (Fraction(num, den), flip)
    if level is None:
        raise CocycleParseError("no records", 1)
    try:
        return CircleCocycle.from_pairs(d, level, pairs)
    except ContractError as exc:
        raise CocycleParseError(str(exc), 1) from None


def serialize_cocycle(phi):
    lines = []
    for (v, k), g in sorted(phi.values.items()):
        lines.append(f"{phi.level} {v} {k} {g.rot.numerator} {g.rot.denominator} {g.flip}")
    return "\n".join(lines) + "\n"


def load_cocycle(path, d):
    with open(path, encoding="utf-8") as fh:
        return parse_cocycle(fh.read(), d)


# -- orbits ----------------------------------------------------------------


def skew_orbit(x, t, phi, steps):
    """``[(cell, t), ...]`` along ``(x, t) -> (alpha x, phi_x(t))``.

    ``x`` is a :class:`PathPrefix` at least as deep as ``phi``; stepping off
    the roof of that prefix raises a depth error.
    """
    if x.level < phi.level:
        raise ContractError(f"prefix of length {x.level} is coarser than the cocycle level {phi.level}")
    d = phi.diagram
    t = Fraction(t)
    out = [(x.cell(), t)]
    for _ in range(steps):
        g = phi(d.ancestor(x.cell(), x.level, phi.level))
        x = x.successor()
        t = g(t)
        out.append((x.cell(), t))
    return out


def orbit_start(d, level, cell):
    return PathPrefix.from_cell(d, level, cell)


def identity_cocycle(d, level=0):
    return CircleCocycle.constant(d, level, IDENTITY)

"""Isometries of the circle R/Z with exact rational rotation parts."""

from dataclasses import dataclass
from fractions import Fraction


def frac(t):
    """Representative of ``t`` in ``[0, 1)``."""
    t = Fraction(t)
    return t - (t.numerator // t.denominator)


def circle_norm(t):
    """Distance from ``t`` to 0 on the circle."""
    t = frac(t)
    return min(t, 1 - t)


def minimal_lift(t):
    """The lift of ``t`` in ``(-1/2, 1/2]``."""
    t = frac(t)
    return t if t <= Fraction(1, 2) else t - 1


@dataclass(frozen=True, order=True)
class IsomT:
    """``R_rot`` if ``flip == 0``, else ``R_rot o lambda`` with ``lambda(t) = -t``."""

    rot: Fraction = Fraction(0)
    flip: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rot", frac(self.rot))
        object.__setattr__(self, "flip", int(self.flip) % 2)

    @classmethod
    def rotation(cls, t):
        return cls(t, 0)

    @classmethod
    def reflection(cls, t=0):
        return cls(t, 1)

    def __call__(self, t):
        t = Fraction(t)
        return frac(self.rot + (-t if self.flip else t))

    def __mul__(self, other):
        """Composition ``self o other``."""
        sign = -1 if self.flip else 1
        return IsomT(self.rot + sign * other.rot, self.flip ^ other.flip)

    def inverse(self):
        return self if self.flip else IsomT(-self.rot, 0)

    @property
    def orientation(self):
        return self.flip

    def distance(self, other):
        """``sup_t |self(t) - other(t)|``."""
        if self.flip != other.flip:
            return Fraction(1, 2)
        return circle_norm(self.rot - other.rot)

    def __str__(self):
        return f"R[{self.rot}]" + ("L" if self.flip else "")


IDENTITY = IsomT()
LAMBDA = IsomT(0, 1)


def product(isoms):
    """``g_k o ... o g_1`` for ``isoms = [g_1, ..., g_k]``."""
    out = IDENTITY
    for g in isoms:
        out = g * out
    return out

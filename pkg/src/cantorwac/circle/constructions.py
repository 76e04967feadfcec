"""Straightening, the eta coboundary correction, and the omega matching cocycle.

All three work tower by tower on the X partition matched by a
:class:`~cantorwac.conjsynth.PartitionMap`, and every bound they claim is
recomputed cell by cell from the constructed objects.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from ..bratteli.sets import CellFunction, pullback
from ..errors import ContractError, RefusalError
from ..kzero import mod2_solve
from .cocycle import CircleCocycle
from .isom import IDENTITY, LAMBDA, IsomT, circle_norm, frac, minimal_lift, product


def orientation_class(phi, bound):
    """Is ``[o(phi)]`` zero in K^0 / 2K^0?  A yes carries ``f`` with ``o(phi) = f - f o alpha``."""
    return mod2_solve(phi.orientation(), bound)


@dataclass
class Straightening:
    psi: CircleCocycle
    xi: CircleCocycle
    transfer: CellFunction


def straighten(phi, bound):
    """``psi`` (values id or lambda) and rotations ``xi`` with
    ``psi_{alpha x} phi_x psi_x = R_{xi(x)}``."""
    tri = orientation_class(phi, bound)
    if not tri.yes:
        raise RefusalError(f"orientation class is {tri.verdict}; cannot straighten", tri.as_dict())
    f = tri.witness
    psi = CircleCocycle(f.diagram, f.level, {c: LAMBDA if b else IDENTITY for c, b in f.values.items()})
    psi_alpha = pullback(psi, 1)
    level = max(psi_alpha.level, phi.level, psi.level)
    pa, ph, ps = psi_alpha.refine(level), phi.refine(level), psi.refine(level)
    vals = {}
    for c in pa.values:
        g = pa(c) * ph(c) * ps(c).inverse()
        if g.flip:
            raise AssertionError(f"straightened value at {c} still flips")
        vals[c] = g
    xi = CircleCocycle(f.diagram, level, vals)
    return Straightening(psi, xi, f)


def _pulled_to_x(pm, cocycle):
    """``cocycle o sigma`` on the matched X cells; ``cocycle`` must be constant on
    the image of each cell."""
    out = {}
    for c, img in pm.cell_map.items():
        try:
            out[c] = cocycle.value_on(img)
        except ContractError:
            raise ContractError(f"cocycle on Y is not constant on sigma of X cell {c}") from None
    return out


def _on_x_cells(pm, cocycle):
    if cocycle.level > pm.x_level:
        raise ContractError(f"cocycle level {cocycle.level} is finer than the matched level {pm.x_level}")
    return cocycle.refine(pm.x_level)


def _tower_cells(d, level):
    h = d.heights(level)
    return h, [[(v, k) for k in range(1, h[v] + 1)] for v in range(len(h))]


@dataclass
class EtaFunction:
    level: int
    values: CellFunction
    kappa: dict
    kappa_lift: dict
    per_tower: dict
    deviation: Fraction
    epsilon: Fraction = None

    @property
    def ok(self):
        return self.epsilon is None or self.deviation < self.epsilon

    def as_dict(self):
        return {
            "level": self.level,
            "kappa": {str(v): str(k) for v, k in sorted(self.kappa.items())},
            "kappa_lift": {str(v): str(k) for v, k in sorted(self.kappa_lift.items())},
            "per_tower_deviation": {str(v): str(k) for v, k in sorted(self.per_tower.items())},
            "deviation": str(self.deviation),
            "epsilon": None if self.epsilon is None else str(self.epsilon),
            "ok": self.ok,
        }


def eta_construction(pm, xi, zeta, epsilon):
    """``eta: X -> T`` making ``xi - zeta sigma`` and ``eta - eta alpha`` close.

    ``xi`` is a rotation cocycle on X, ``zeta`` one on Y.  Every X tower must
    be taller than ``1/epsilon``.
    """
    epsilon = Fraction(epsilon)
    x = pm.x_diagram
    h, towers = _tower_cells(x, pm.x_level)
    short = [v for v in range(len(h)) if h[v] * epsilon <= 1]
    if short:
        raise RefusalError(f"tower {short[0]} has height {h[short[0]]} <= 1/epsilon = {1 / epsilon}",
                           {"short_towers": short})
    if not (xi.is_rotation() and zeta.is_rotation()):
        raise ContractError("eta construction takes rotation cocycles")
    xi_p = _on_x_cells(pm, xi)
    zs = _pulled_to_x(pm, zeta)
    diff = {c: frac(zs[c].rot - xi_p(c).rot) for c in xi_p.values}

    eta, kappa, lift = {}, {}, {}
    for v, cells in enumerate(towers):
        kappa[v] = frac(sum(diff[c] for c in cells))
        lift[v] = minimal_lift(kappa[v])
        run = Fraction(0)
        for j, c in enumerate(cells):
            eta[c] = frac(run - j * lift[v] / h[v])
            run += diff[c]
    eta_fn = CellFunction(x, pm.x_level, eta)

    # recompute the deviation from scratch on a level where eta o alpha is cell-constant
    eta_alpha = pullback(eta_fn, 1)
    level = eta_alpha.level
    e, xr = eta_fn.refine(level), xi_p.refine(level)
    zr = CellFunction(x, pm.x_level, {c: g.rot for c, g in zs.items()}).refine(level)
    per_tower = {v: Fraction(0) for v in range(len(h))}
    for c in x.cells(level):
        dev = circle_norm(xr(c).rot - zr(c) - (e(c) - eta_alpha(c)))
        v = c[0] if level == pm.x_level else x.ancestor(c, level, pm.x_level)[0]
        per_tower[v] = max(per_tower[v], dev)
    for v in per_tower:
        if per_tower[v] != abs(lift[v]) / h[v]:
            raise AssertionError(f"tower {v}: deviation {per_tower[v]} != |kappa~|/h = {abs(lift[v]) / h[v]}")
    return EtaFunction(pm.x_level, eta_fn, kappa, lift, per_tower, max(per_tower.values()), epsilon)


@dataclass
class OmegaResult:
    omega: CircleCocycle
    kappa: dict
    kappa_lift: dict
    chi: dict
    per_tower: dict
    per_cell: dict
    sup_deviation: Fraction
    bound: Fraction
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.sup_deviation < self.bound and all(
            d < Fraction(1, h) for d, h in self.details.get("tower_checks", []))

    def as_dict(self):
        return {
            "kappa": {str(v): str(k) for v, k in sorted(self.kappa.items())},
            "kappa_lift": {str(v): str(k) for v, k in sorted(self.kappa_lift.items())},
            "chi": {str(v): row for v, row in sorted(self.chi.items())},
            "per_tower_deviation": {str(v): str(k) for v, k in sorted(self.per_tower.items())},
            "sup_deviation": str(self.sup_deviation),
            "bound": str(self.bound),
            "ok": self.ok,
        }


def parity_hypothesis(pm, phi, psi):
    """Per X tower: ``(sum of o(phi), sum of o(psi sigma))`` mod 2."""
    x = pm.x_diagram
    h, towers = _tower_cells(x, pm.x_level)
    phi_p = _on_x_cells(pm, phi)
    ps = _pulled_to_x(pm, psi)
    return {v: (sum(phi_p(c).flip for c in cells) % 2, sum(ps[c].flip for c in cells) % 2)
            for v, cells in enumerate(towers)}


def omega_construction(pm, phi, psi):
    """``omega: X -> Isom(T)`` with ``psi_{sigma x} omega_x`` close to ``omega_{alpha x} phi_x``."""
    x = pm.x_diagram
    parity = parity_hypothesis(pm, phi, psi)
    bad = {v: p for v, p in parity.items() if p[0] != p[1]}
    if bad:
        raise RefusalError("tower orientation sums differ", {"towers": {str(v): list(p) for v, p in bad.items()}})
    h, towers = _tower_cells(x, pm.x_level)
    phi_p = _on_x_cells(pm, phi)
    ps = _pulled_to_x(pm, psi)

    omega, kappa, lift, chi = {}, {}, {}, {}
    for v, cells in enumerate(towers):
        hv = h[v]
        fs = [phi_p(c) for c in cells]
        gs = [ps[c] for c in cells]
        full = product(gs) * product(fs).inverse()
        if full.flip:
            raise AssertionError("parity hypothesis holds but the tower product flips")
        kappa[v] = full.rot
        lift[v] = minimal_lift(full.rot)
        # chi[v][j]: flips of psi sigma on floors j+1..h (floor j+1 is alpha^j of the base)
        row = [sum(g.flip for g in gs[j:]) % 2 for j in range(hv)]
        chi[v] = row
        for j, c in enumerate(cells):
            eta = -((-1) ** row[j]) * j * lift[v] / hv
            base = product(gs[:j]) * product(fs[:j]).inverse()
            omega[c] = IsomT.rotation(eta) * base
    om = CircleCocycle(x, pm.x_level, omega)

    om_alpha = pullback(om, 1)
    level = om_alpha.level
    o, f = om.refine(level), phi_p.refine(level)
    g_sigma = CircleCocycle(x, pm.x_level, ps).refine(level)
    per_cell, per_tower = {}, {v: Fraction(0) for v in range(len(h))}
    for c in x.cells(level):
        left = g_sigma(c) * o(c)
        right = om_alpha(c) * f(c)
        if left.flip != right.flip:
            raise AssertionError(f"orientations disagree at {c}")
        dev = left.distance(right)
        if dev != circle_norm(left.rot - right.rot):
            raise AssertionError("deviation is not the rotation difference")
        per_cell[c] = dev
        v = c[0] if level == pm.x_level else x.ancestor(c, level, pm.x_level)[0]
        per_tower[v] = max(per_tower[v], dev)
    checks = []
    for v in per_tower:
        expected = abs(lift[v]) / h[v]
        if per_tower[v] != expected:
            raise AssertionError(f"tower {v}: deviation {per_tower[v]} != |kappa~|/h = {expected}")
        checks.append((per_tower[v], h[v]))
    sup = max(per_tower.values())
    bound = Fraction(1, min(h))
    res = OmegaResult(om, kappa, lift, chi, per_tower, per_cell, sup, bound, {"tower_checks": checks})
    if not res.ok:
        raise AssertionError(f"sup deviation {sup} is not below {bound}")
    return res

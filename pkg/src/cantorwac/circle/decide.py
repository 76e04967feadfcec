"""Deciding weak approximate conjugacy of Isom(T) skew products.

The decision reports every condition that holds (they can overlap) and
keeps each sub-answer as a certificate dict, so
:func:`check_wacxt_certificates` can re-verify a decision from the inputs
alone.
"""

from ..extension import ZmCocycle, build_extension, check_ext_divisible, ps_extension
from ..kzero import (NO, UNKNOWN, YES, K0Element, TriState, check_divisible_certificate,
                     divisible_by, k0_class, periodic_spectrum, spectrum_set, unit)

A, B, C = "(a)", "(b)", "(c)"


def _mod2(phi):
    return phi.orientation().map(lambda x: x % 2)


def _o_class(phi):
    return k0_class(_mod2(phi))


def _spectra(d, pmax, bound):
    res = periodic_spectrum(d, pmax, bound)
    return spectrum_set(res), {str(p): t.as_dict() for p, t in res}


def _containment(ps_x, ps_y):
    """PS(beta) inside PS(alpha), judged on ``p <= pmax``."""
    bad = [p for p in ps_y[YES] if p in ps_x[NO]]
    if bad:
        return NO, {"p": bad[0], "in_Y": True, "in_X": False}
    open_ = [p for p in ps_y[YES] + ps_y[UNKNOWN] if p not in ps_x[YES]]
    if open_:
        return UNKNOWN, {"p": open_[0]}
    return YES, {}


def _condition_b(x, phi, y, psi, bound):
    """Search ``n`` with ``2^(n-1) [f] = [1_X]``, ``2^(n-1) [g] = [1_Y]`` and both
    mod 2 matches.  Divisibility by ``2^(n-1)`` fails for all larger ``n`` once
    it fails for one, so a no on either side ends the search."""
    trail = []
    ox, oy = _o_class(phi), _o_class(psi)
    saw_unknown = False
    for n in range(1, bound + 1):
        q = 2 ** (n - 1)
        dx, dy = divisible_by(unit(x), q, bound), divisible_by(unit(y), q, bound)
        step = {"n": n, "divide_X": dx.as_dict(), "divide_Y": dy.as_dict()}
        trail.append(step)
        if dx.no or dy.no:
            return (UNKNOWN if saw_unknown else NO), trail
        if not (dx.yes and dy.yes):
            return UNKNOWN, trail
        f = K0Element(x, dx.certificate["level"], dx.certificate["quotient"])
        g = K0Element(y, dy.certificate["level"], dy.certificate["quotient"])
        mx, my = divisible_by(f - ox, 2, bound), divisible_by(g - oy, 2, bound)
        step.update(match_X=mx.as_dict(), match_Y=my.as_dict())
        if mx.yes and my.yes:
            return YES, trail
        if not (mx.no or my.no):
            saw_unknown = True
    return UNKNOWN, trail


def decide_wacxt(x, phi, y, psi, pmax, bound):
    """Is ``alpha x phi`` weakly approximately conjugate to ``beta x psi``?

    Returns a dict whose ``verdict`` is the first of ``(a)``, ``(b)``, ``(c)``
    that holds, ``no`` or ``unknown``; ``held`` lists every condition that holds.
    Spectra are compared only for ``p <= pmax``.
    """
    ps_x, cert_x = _spectra(x, pmax, bound)
    ps_y, cert_y = _spectra(y, pmax, bound)
    contain, contain_cert = _containment(ps_x, ps_y)

    o_x = divisible_by(_o_class(phi), 2, bound)
    o_y = divisible_by(_o_class(psi), 2, bound)
    conds = {}
    if o_x.yes and o_y.yes:
        conds[A] = YES
    elif o_x.no or o_y.no:
        conds[A] = NO
    else:
        conds[A] = UNKNOWN

    b_trail, c_info = [], None
    if o_y.yes:
        conds[B] = conds[C] = NO
    elif o_y.unknown:
        conds[B] = conds[C] = UNKNOWN
    else:
        conds[B], b_trail = _condition_b(x, phi, y, psi, bound)
        ext = ps_extension(ZmCocycle(_mod2(psi), 2), pmax, bound)
        pe = ext["ps_extension"]
        if pe[UNKNOWN] or ps_y[UNKNOWN]:
            conds[C] = UNKNOWN
        else:
            conds[C] = YES if pe[YES] == ps_y[YES] else NO
        c_info = {"ps_Y": ps_y[YES], "ps_Y_ext": pe[YES], "branch": ext["branch"],
                  "certificates": ext["certificates"]}

    held = [k for k in (A, B, C) if conds[k] == YES]
    if contain == NO or all(v == NO for v in conds.values()):
        verdict = NO
    elif contain == YES and held:
        verdict = held[0]
    else:
        verdict = UNKNOWN
    return {
        "verdict": verdict,
        "held": held if contain == YES else [],
        "conditions": conds,
        "pmax": pmax,
        "containment": {"verdict": contain, **contain_cert},
        "spectra": {"X": ps_x, "Y": ps_y},
        "certificates": {
            "spectrum_X": cert_x,
            "spectrum_Y": cert_y,
            "orientation_X": o_x.as_dict(),
            "orientation_Y": o_y.as_dict(),
            "b_trail": b_trail,
            "c": c_info,
        },
    }


def decide_wacxt_symmetric(x, phi, y, psi, pmax, bound):
    """Two-sided form: equal spectra and either both sides orientation
    preserving or neither, with equal spectra of the orientation extensions."""
    ps_x, _ = _spectra(x, pmax, bound)
    ps_y, _ = _spectra(y, pmax, bound)
    o_x = divisible_by(_o_class(phi), 2, bound)
    o_y = divisible_by(_o_class(psi), 2, bound)
    out = {"ps_X": ps_x, "ps_Y": ps_y, "orientation": [o_x.verdict, o_y.verdict]}
    if ps_x[UNKNOWN] or ps_y[UNKNOWN] or o_x.unknown or o_y.unknown:
        return dict(out, verdict=UNKNOWN)
    if ps_x[YES] != ps_y[YES]:
        return dict(out, verdict=NO, reason="spectra differ")
    if o_x.yes and o_y.yes:
        return dict(out, verdict="(1)")
    if o_x.yes != o_y.yes:
        return dict(out, verdict=NO, reason="exactly one side is orientation preserving")
    ex = ps_extension(ZmCocycle(_mod2(phi), 2), pmax, bound)["ps_extension"]
    ey = ps_extension(ZmCocycle(_mod2(psi), 2), pmax, bound)["ps_extension"]
    out.update(ps_X_ext=ex, ps_Y_ext=ey)
    if ex[UNKNOWN] or ey[UNKNOWN]:
        return dict(out, verdict=UNKNOWN)
    if ex[YES] == ey[YES]:
        return dict(out, verdict="(2)")
    return dict(out, verdict=NO, reason="extension spectra differ")


def _tri(d):
    return TriState(d["verdict"], d["certificate"])


def _check_div(a, p, d):
    if d["verdict"] == UNKNOWN:
        return True
    return check_divisible_certificate(a, p, _tri(d))


def check_wacxt_certificates(x, phi, y, psi, decision):
    """Re-verify every yes/no sub-certificate of ``decision`` without searching."""
    certs = decision["certificates"]
    for d, key in ((x, "spectrum_X"), (y, "spectrum_Y")):
        for p, c in certs[key].items():
            if not _check_div(unit(d), int(p), c):
                return False
    if not (_check_div(_o_class(phi), 2, certs["orientation_X"])
            and _check_div(_o_class(psi), 2, certs["orientation_Y"])):
        return False
    ox, oy = _o_class(phi), _o_class(psi)
    for step in certs["b_trail"]:
        q = 2 ** (step["n"] - 1)
        dx, dy = step["divide_X"], step["divide_Y"]
        if not (_check_div(unit(x), q, dx) and _check_div(unit(y), q, dy)):
            return False
        if "match_X" in step:
            f = K0Element(x, dx["certificate"]["level"], dx["certificate"]["quotient"])
            g = K0Element(y, dy["certificate"]["level"], dy["certificate"]["quotient"])
            if not (_check_div(f - ox, 2, step["match_X"]) and _check_div(g - oy, 2, step["match_Y"])):
                return False
    if certs["c"] is not None:
        ext = build_extension(ZmCocycle(_mod2(psi), 2))
        for p, c in certs["c"]["certificates"].items():
            if c["verdict"] != UNKNOWN and not check_ext_divisible(ext, int(p), _tri(c)):
                return False
    return True

"""Command line front end.  Exit status: 0 decided, 2 unknown, 1 error."""

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import conjsynth, extension, kzero
from .bratteli import ClopenSet, PathPrefix, builtin, parse, validate_diagram
from .circle import (CircleCocycle, IsomT, combina, decide_wacxt, decide_wacxt_symmetric,
                     eta_construction, omega_construction, parse_cocycle, skew_orbit, straighten)
from .circle.decide import check_wacxt_certificates
from .errors import CantorWacError, RefusalError, UnknownError
from .report import digest, dumps, explain, make_report

EXIT_DECIDED, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


class JobError(CantorWacError):
    pass


# -- inputs ------------------------------------------------------------------


def load_diagram(spec):
    """``builtin:<name>`` or a diagram file path; returns ``(diagram, digest)``."""
    if spec.startswith("builtin:"):
        try:
            return builtin(spec[len("builtin:"):]), digest(spec)
        except KeyError as exc:
            raise JobError(str(exc.args[0])) from None
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise JobError(f"cannot read {spec}: {exc.strerror}") from None
    return parse(text), digest(text)


def load_circle(spec, d):
    """``const:<rot>[:<flip>]`` or a cocycle file path."""
    if spec.startswith("const:"):
        parts = spec.split(":")[1:]
        try:
            rot = Fraction(parts[0])
            flip = int(parts[1]) if len(parts) > 1 else 0
        except (ValueError, IndexError, ZeroDivisionError):
            raise JobError(f"bad constant cocycle {spec!r}") from None
        return CircleCocycle.constant(d, 0, IsomT(rot, flip)), digest(spec)
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise JobError(f"cannot read {spec}: {exc.strerror}") from None
    return parse_cocycle(text, d), digest(text)


def load_zm(spec, d, m):
    """``const:<a>``, ``cell:<level>:<v>.<k>[,<v>.<k>...]`` or ``orientation:<cocycle>``."""
    try:
        if spec.startswith("const:"):
            return extension.ZmCocycle.constant(d, 0, int(spec[6:]) % m, m), digest(spec)
        if spec.startswith("cell:"):
            _, level, cells = spec.split(":", 2)
            cl = [tuple(int(x) for x in c.split(".")) for c in cells.split(",")]
            return extension.ZmCocycle.indicator(ClopenSet(d, int(level), cl), m), digest(spec)
    except ValueError:
        raise JobError(f"bad Z_m cocycle {spec!r}") from None
    if spec.startswith("orientation:"):
        phi, dg = load_circle(spec[len("orientation:"):], d)
        return extension.ZmCocycle(phi.orientation().map(lambda x: x % m), m), dg
    raise JobError(f"unknown Z_m cocycle form {spec!r}")


def _rational(text):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None
    return value


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated integer list: {text!r}") from None


# -- commands ----------------------------------------------------------------


def _pool_map(fn, items, threads):
    if threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def cmd_validate(a, inputs):
    d, inputs["X"] = load_diagram(a.X)
    rep = validate_diagram(d, a.levels or 6)
    return dict(rep.as_dict(), verdict="yes" if rep.ok else "no")


def _spectrum_results(d, pmax, bound, threads):
    one = kzero.unit(d)

    def one_p(p):
        tri = kzero.divisible_by(one, p, bound)
        if tri.yes:
            u = kzero.spectrum_base_set(d, tri.certificate["level"], p)
            if not kzero.check_spectrum_set(u, p):
                raise AssertionError(f"spectrum set for p={p} fails the partition check")
            tri.certificate = dict(tri.certificate, base_set=[list(c) for c in u.sorted_cells()])
        return p, tri

    return _pool_map(one_p, range(1, pmax + 1), threads)


def cmd_spectrum(a, inputs):
    d, inputs["X"] = load_diagram(a.X)
    res = _spectrum_results(d, a.pmax, a.bound, a.threads)
    split = kzero.spectrum_set(res)
    return {"verdict": "unknown" if split["unknown"] else "decided", "spectrum": split,
            "certificates": {str(p): t.as_dict() for p, t in res}}


def cmd_decide_wac(a, inputs):
    x, inputs["X"] = load_diagram(a.X)
    y, inputs["Y"] = load_diagram(a.Y)
    return conjsynth.decide_wac(x, y, a.pmax, a.bound)


def _target(y, level):
    return [ClopenSet(y, level, [c]) for c in y.cells(level)]


def _plan_dict(pm):
    plan = pm.plan
    return {"a": plan.a, "table": plan.table(),
            "pi": [[w, c, j, v, k] for ((w, c), j), (v, k) in sorted(plan.pi.items())]}


def cmd_synthesize(a, inputs):
    x, inputs["X"] = load_diagram(a.X)
    y, inputs["Y"] = load_diagram(a.Y)
    level = a.levels if a.levels is not None else 2
    part = _target(y, level)
    try:
        pm = conjsynth.synthesize_conjugator(x, y, part, a.bound)
    except RefusalError as exc:
        return {"verdict": "refused", "reason": str(exc), "certificate": exc.certificate}
    rep = conjsynth.verify_approx_conjugacy(pm, part)
    return {"verdict": "yes" if rep.ok else "no", "target_level": level, "x_level": pm.x_level,
            "q_level": pm.q_level, "p": pm.p, "threshold": pm.threshold, "plan": _plan_dict(pm),
            "check": rep.as_dict(), "certificates": pm.certificates}


def _circle_pair(a, inputs):
    x, inputs["X"] = load_diagram(a.X)
    phi, inputs["phi"] = load_circle(a.phi, x)
    y, inputs["Y"] = load_diagram(a.Y)
    psi, inputs["psi"] = load_circle(a.psi, y)
    return x, phi, y, psi


def cmd_decide_wacxt(a, inputs):
    x, phi, y, psi = _circle_pair(a, inputs)
    if a.symmetric:
        return decide_wacxt_symmetric(x, phi, y, psi, a.pmax, a.bound)
    return decide_wacxt(x, phi, y, psi, a.pmax, a.bound)


def cmd_straighten(a, inputs):
    x, inputs["X"] = load_diagram(a.X)
    phi, inputs["phi"] = load_circle(a.phi, x)
    try:
        st = straighten(phi, a.bound)
    except RefusalError as exc:
        return {"verdict": "refused", "reason": str(exc), "certificate": exc.certificate}
    return {"verdict": "yes", "level": st.xi.level,
            "psi_flips": {f"{v}.{k}": g.flip for (v, k), g in sorted(st.psi.values.items())},
            "xi": {f"{v}.{k}": g.rot for (v, k), g in sorted(st.xi.values.items())}}


def _matched(a, x, y, *cocycles):
    level = max([a.levels if a.levels is not None else 1] + [c.level for c in cocycles])
    return conjsynth.synthesize_conjugator(x, y, _target(y, level), a.bound)


def cmd_eta(a, inputs):
    x, xi, y, zeta = _circle_pair(a, inputs)
    pm = _matched(a, x, y, zeta)
    try:
        eta = eta_construction(pm, xi, zeta, a.epsilon)
    except RefusalError as exc:
        return {"verdict": "refused", "reason": str(exc), "certificate": exc.certificate}
    return dict(eta.as_dict(), verdict="yes" if eta.ok else "no", x_level=pm.x_level)


def cmd_omega(a, inputs):
    x, phi, y, psi = _circle_pair(a, inputs)
    pm = _matched(a, x, y, psi)
    try:
        om = omega_construction(pm, phi, psi)
    except RefusalError as exc:
        return {"verdict": "refused", "reason": str(exc), "certificate": exc.certificate}
    return dict(om.as_dict(), verdict="yes" if om.ok else "no", x_level=pm.x_level)


def cmd_combina(a, inputs):
    c = combina(a.m, a.chi)
    if c.case is None:
        return {"verdict": "no", "case": None, "reason": "neither hypothesis holds"}
    ns = a.n or [c.threshold, c.threshold + 1]
    samples = [{"n": n, "chi": chi, "l": c.solve(n, chi)} for n in ns for chi in (0, 1)]
    return {"verdict": "yes", "case": c.case, "q": c.q, "threshold": c.threshold, "m": list(c.m),
            "chis": list(c.chis), "samples": samples}


def cmd_extension_torsion(a, inputs):
    d, inputs["X"] = load_diagram(a.X)
    c, inputs["c"] = load_zm(a.c, d, a.modulus)
    rep = extension.torsion_check(extension.build_extension(c, a.bound), a.bound)
    verdict = "decided" if rep.stabilized and rep.minimal != "unknown" else "unknown"
    return dict(rep.as_dict(), verdict=verdict)


def cmd_extension_spectrum(a, inputs):
    d, inputs["X"] = load_diagram(a.X)
    c, inputs["c"] = load_zm(a.c, d, a.modulus)
    ext = extension.build_extension(c, a.bound)
    res = _pool_map(lambda p: (p, extension.ext_divisible(ext, p, a.bound)), range(1, a.pmax + 1), a.threads)
    split = kzero.spectrum_set(res)
    out = {"verdict": "unknown" if split["unknown"] else "decided", "spectrum": split,
           "certificates": {str(p): t.as_dict() for p, t in res}}
    if a.modulus == 2:
        pred = extension.ps_extension(c, a.pmax, a.bound)
        out["prediction"] = {k: pred[k] for k in ("branch", "predicted", "agree", "prediction")}
    return out


def cmd_orbit(a, inputs):
    x, inputs["X"] = load_diagram(a.X)
    phi, inputs["phi"] = load_circle(a.phi, x)
    level = max(a.levels or 0, phi.level)
    cell = tuple(a.cell)
    start = (level, cell)
    # deepen inside the starting cell until the orbit stays below the roof
    top = level + a.bound if x.depth is None else min(level + a.bound, x.depth)
    while x.heights(level)[cell[0]] - cell[1] < a.steps and level < top:
        h = x.heights(level + 1)
        cell = max(x.children(level, cell), key=lambda c: (h[c[0]] - c[1], -c[0]))
        level += 1
    traj = skew_orbit(PathPrefix.from_cell(x, level, cell), a.t, phi, a.steps)
    return {"verdict": "decided", "start": [start[0], list(start[1])], "level": level,
            "trajectory": [[list(c), t, f"{float(t):.6f}"] for c, t in traj]}


COMMANDS = {
    "validate": cmd_validate,
    "spectrum": cmd_spectrum,
    "decide-wac": cmd_decide_wac,
    "synthesize": cmd_synthesize,
    "decide-wacxt": cmd_decide_wacxt,
    "straighten": cmd_straighten,
    "eta": cmd_eta,
    "omega": cmd_omega,
    "combina": cmd_combina,
    "extension-torsion": cmd_extension_torsion,
    "extension-spectrum": cmd_extension_spectrum,
    "orbit": cmd_orbit,
}

POSITIONAL = {
    "validate": ["X"], "spectrum": ["X"], "decide-wac": ["X", "Y"], "synthesize": ["X", "Y"],
    "decide-wacxt": ["X", "phi", "Y", "psi"], "straighten": ["X", "phi"],
    "eta": ["X", "phi", "Y", "psi"], "omega": ["X", "phi", "Y", "psi"], "combina": [],
    "extension-torsion": ["X"], "extension-spectrum": ["X"], "orbit": ["X", "phi"],
}


# -- certificate re-checking -------------------------------------------------


def _tri(c):
    return kzero.TriState(c["verdict"], c["certificate"])


def _check_spectrum(d, certs):
    for p, c in certs.items():
        tri = _tri(c)
        if tri.unknown:
            continue
        if not kzero.check_divisible_certificate(kzero.unit(d), int(p), tri):
            return False
        if tri.yes:
            u = ClopenSet(d, c["certificate"]["level"], [tuple(x) for x in c["certificate"]["base_set"]])
            if not kzero.check_spectrum_set(u, int(p)):
                return False
    return True


def check_certificate(report):
    """Re-verify a stored report's certificates from its inputs, without search."""
    a = _namespace(report)
    cmd, r = report["command"], report["result"]
    inputs = {}
    if cmd == "spectrum":
        d, inputs["X"] = load_diagram(a.X)
        ok = _check_spectrum(d, r["certificates"])
    elif cmd == "decide-wac":
        x, inputs["X"] = load_diagram(a.X)
        y, inputs["Y"] = load_diagram(a.Y)
        ok = all(kzero.check_divisible_certificate(kzero.unit(x if ob["not_in"] == "X" else y),
                                                   ob["p"], _tri(ob["certificate"]))
                 for ob in r["obstructions"])
    elif cmd == "decide-wacxt" and "certificates" in r:
        x, phi, y, psi = _circle_pair(a, inputs)
        ok = check_wacxt_certificates(x, phi, y, psi, r)
    elif cmd == "synthesize" and r["verdict"] != "refused":
        x, inputs["X"] = load_diagram(a.X)
        y, inputs["Y"] = load_diagram(a.Y)
        pm = conjsynth.assemble(x, y, r["x_level"], r["q_level"], r["plan"]["a"])
        ok = conjsynth.verify_approx_conjugacy(pm, _target(y, r["target_level"])).ok == (r["verdict"] == "yes")
    elif cmd == "extension-spectrum":
        d, inputs["X"] = load_diagram(a.X)
        c, inputs["c"] = load_zm(a.c, d, a.modulus)
        ext = extension.build_extension(c, a.bound)
        ok = all(extension.check_ext_divisible(ext, int(p), _tri(t))
                 for p, t in r["certificates"].items() if t["verdict"] != "unknown")
    elif cmd == "combina" and r.get("samples"):
        ok = all(s["l"] is not None
                 and sum(l * m for l, m in zip(s["l"], r["m"])) == s["n"] * r["q"]
                 and sum(l * c for l, c in zip(s["l"], r["chis"])) % 2 == s["chi"]
                 for s in r["samples"] if s["n"] >= r["threshold"])
    else:
        # commands whose result is its own certificate: recompute and compare
        fresh = make_report(cmd, report["params"], {}, COMMANDS[cmd](a, inputs))
        ok = fresh["result"] == r
    if inputs and inputs != report["inputs"]:
        raise JobError("input digests differ from the report")
    return ok


def _namespace(report):
    params = dict(report["params"])
    for key in ("epsilon", "t"):
        if params.get(key) is not None:
            params[key] = Fraction(params[key])
    params.setdefault("threads", 1)
    return argparse.Namespace(**params)


# -- entry point -------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="cantorwac", description=__doc__)
    ap.add_argument("--check-certificate", metavar="REPORT",
                    help="re-verify the certificates of a structured report")
    ap.add_argument("--format", choices=["text", "structured"], default="text")
    ap.add_argument("-v", "--verbose", action="count", default=1)
    ap.add_argument("-q", "--quiet", action="store_const", const=0, dest="verbose",
                    help="one-line verdict only")
    sub = ap.add_subparsers(dest="command")
    for name, names in POSITIONAL.items():
        p = sub.add_parser(name)
        for pos in names:
            p.add_argument(pos)
        p.add_argument("--levels", type=int)
        p.add_argument("--bound", type=int, default=12)
        p.add_argument("--pmax", type=int, default=8)
        p.add_argument("--epsilon", type=_rational)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--format", choices=["text", "structured"], default=argparse.SUPPRESS)
        if name == "decide-wacxt":
            p.add_argument("--symmetric", action="store_true", help="two-sided form")
        if name.startswith("extension"):
            p.add_argument("--c", required=True, help="const:<a> | cell:<level>:<v>.<k>,... | orientation:<cocycle>")
            p.add_argument("--modulus", type=int, default=2)
        if name == "combina":
            p.add_argument("--m", type=_int_list, required=True)
            p.add_argument("--chi", type=_int_list, required=True)
            p.add_argument("--n", type=_int_list)
        if name == "orbit":
            p.add_argument("--cell", type=_int_list, default=[0, 1])
            p.add_argument("--t", type=_rational, default=Fraction(0))
            p.add_argument("--steps", type=int, default=10)
    return ap


def _params(a):
    skip = {"command", "check_certificate", "format", "verbose", "threads"}
    return {k: v for k, v in sorted(vars(a).items()) if k not in skip}


def run(argv=None):
    """Returns ``(exit status, report or None, rendered text)``."""
    ap = build_parser()
    a = ap.parse_args(argv)
    inputs = {}
    try:
        if a.check_certificate:
            with open(a.check_certificate, encoding="utf-8") as fh:
                stored = json.load(fh)
            ok = check_certificate(stored)
            text = f"certificate check: {'ok' if ok else 'FAILED'}\n"
            return (EXIT_DECIDED if ok else EXIT_ERROR), None, text
        if not a.command:
            ap.error("a command is required")
        if a.command in ("eta",) and a.epsilon is None:
            raise JobError("eta needs --epsilon p/q")
        t0 = time.perf_counter()
        result = COMMANDS[a.command](a, inputs)
        rep = make_report(a.command, _params(a), inputs, result, round(time.perf_counter() - t0, 3))
    except UnknownError as exc:
        rep = make_report(a.command, _params(a), inputs, {"verdict": "unknown", "reason": str(exc),
                                                      "certificate": exc.certificate})
    except (CantorWacError, OSError, json.JSONDecodeError) as exc:
        return EXIT_ERROR, None, f"error: {type(exc).__name__}: {exc}\n"
    text = dumps(rep) if a.format == "structured" else explain(rep, a.verbose)
    status = EXIT_UNKNOWN if rep["result"].get("verdict") == "unknown" else EXIT_DECIDED
    return status, rep, text


def main(argv=None):
    status, _, text = run(argv)
    (sys.stdout if status != EXIT_ERROR else sys.stderr).write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

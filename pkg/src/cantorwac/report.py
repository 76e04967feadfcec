"""Reports: a command echo, input digests, a deterministic ``result`` section,
and timing kept apart from it."""

import hashlib
import json
from fractions import Fraction

from . import __version__

TOOL = "cantorwac"


def digest(text):
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def jsonable(obj):
    """Exact rationals become ``"p/q"`` strings; tuples and sets become lists."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def make_report(command, params, inputs, result, seconds=None):
    return {
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "params": jsonable(params),
        "inputs": inputs,
        "result": jsonable(result),
        "timing": {"seconds": seconds},
    }


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def verdict_bytes(report):
    """The part of a report that must be byte-identical across runs."""
    body = {k: report[k] for k in ("tool", "version", "command", "params", "inputs", "result")}
    return json.dumps(body, sort_keys=True).encode("utf-8")


# -- text rendering --------------------------------------------------------


def _table(rows, header=None):
    rows = [[str(c) for c in r] for r in rows]
    if header:
        rows = [list(header)] + rows
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows if i < len(r)) for i in range(max(map(len, rows)))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    if header:
        lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _spectrum_line(split):
    return "yes " + str(split.get("yes", [])) + "  no " + str(split.get("no", [])) + \
        "  unknown " + str(split.get("unknown", []))


def _unresolved(obj, path=""):
    """First certificate with an unknown verdict, depth first in key order."""
    if isinstance(obj, dict):
        if obj.get("verdict") == "unknown" and "certificate" in obj:
            return path, obj["certificate"]
        for k in sorted(obj):
            hit = _unresolved(obj[k], f"{path}.{k}" if path else str(k))
            if hit:
                return hit
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            hit = _unresolved(v, f"{path}[{i}]")
            if hit:
                return hit
    return None


def _explain_synthesize(r, out):
    plan = r.get("plan")
    if not plan:
        return
    out.append(f"X level {r['x_level']}, Q level {r['q_level']}, p = {r['p']}, threshold N = {r['threshold']}")
    out.append("packing (X tower: Q tower x copies):")
    out.append(_table([[v, ", ".join(f"{w} x{n}" for w, n in segs)] for v, segs in plan["table"]],
                      ["X tower", "Q towers"]))
    out.append("pi (Q' floor -> X floor):")
    out.append(_table([[f"({w},{c})", j, f"({v},{k})"] for (w, c, j, v, k) in plan["pi"]],
                      ["Q' tower", "floor", "X cell"]))


def _explain_wacxt(r, out):
    c = r.get("certificates", {}).get("c")
    if r.get("verdict") == "(c)" and c:
        out.append(_table([["PS(beta)", c["ps_Y"]], ["PS(beta x o(psi))", c["ps_Y_ext"]]],
                          ["spectrum", f"p <= {r['pmax']}"]))
    conds = r.get("conditions", {})
    if conds:
        out.append(_table([[k, v] for k, v in sorted(conds.items())], ["condition", "holds"]))
    if "spectra" in r:
        out.append(_table([["X", _spectrum_line(r["spectra"]["X"])], ["Y", _spectrum_line(r["spectra"]["Y"])]]))


def _explain_cocycle(r, out):
    for key in ("kappa_lift", "per_tower_deviation"):
        if key in r:
            out.append(_table([[v, x] for v, x in sorted(r[key].items(), key=lambda t: int(t[0]))],
                              ["tower", key]))
    if "chi" in r:
        out.append("chi table:")
        out.append(_table([[v] + row for v, row in sorted(r["chi"].items(), key=lambda t: int(t[0]))]))


def explain(report, verbosity=1):
    """Aligned text for a report.  Verbosity 0 is one line, 1 adds the tables,
    2 appends the full structured report so nothing is lost."""
    r = report["result"]
    verdict = r.get("verdict", "?")
    out = [f"{report['command']}: {verdict}"]
    if verbosity >= 1:
        if "reason" in r:
            out.append(f"reason: {r['reason']}")
        cmd = report["command"]
        if cmd == "spectrum" and "spectrum" in r:
            out.append(_spectrum_line(r["spectrum"]))
        elif cmd == "decide-wac":
            out.append(_table([["X", _spectrum_line(r["spectrum_x"])], ["Y", _spectrum_line(r["spectrum_y"])]]))
            for ob in r.get("obstructions", []):
                out.append(f"obstruction: p={ob['p']} in {ob['in']} but not in {ob['not_in']}")
        elif cmd == "synthesize":
            _explain_synthesize(r, out)
        elif cmd == "decide-wacxt":
            _explain_wacxt(r, out)
        elif cmd in ("eta", "omega"):
            _explain_cocycle(r, out)
        elif cmd == "combina" and r.get("samples"):
            out.append(f"case {r['case']}, N = {r['threshold']}")
            out.append(_table([[s["n"], s["chi"], s["l"]] for s in r["samples"]], ["n", "chi", "l"]))
        elif cmd == "extension-spectrum":
            out.append(_spectrum_line(r["spectrum"]))
            pred = r.get("prediction")
            if pred:
                out.append(f"formula branch {pred['branch']}, predicted {pred['predicted']}, agree {pred['agree']}")
        elif cmd == "extension-torsion":
            out.append(f"minimal: {r['minimal']}, torsion {r['torsion']}, cyclic order {r['cyclic_order']}, "
                       f"f0 order {r['f0_order']}, f0 identity {r['f0_identity']}")
            out.append(_table([[lv["level"], lv["torsion"], lv["free_rank"], lv["f0_order"]] for lv in r["levels"]],
                              ["level", "torsion", "free rank", "f0 order"]))
        elif cmd == "orbit":
            out.append(_table([[i, c, t, d] for i, (c, t, d) in enumerate(r["trajectory"])],
                              ["step", "cell", "t", "t (decimal, display only)"]))
        if verdict == "unknown":
            bound = report["params"].get("bound")
            out.append(f"exhausted bound: {bound}")
            hit = _unresolved(r)
            if hit:
                out.append(f"smallest unresolved query: {hit[0]} {json.dumps(hit[1], sort_keys=True)}")
    if verbosity >= 2:
        out.append(dumps(report).rstrip())
    return "\n".join(s for s in out if s) + "\n"

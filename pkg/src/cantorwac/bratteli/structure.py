"""Structural checks and telescoping."""

from dataclasses import dataclass, field
from math import gcd

from ..errors import ContractError
from ..intlinalg import matmul
from .diagram import BratteliDiagram, Edge, LevelBlock, check_ranks


@dataclass
class Check:
    name: str
    ok: bool
    witness: str = ""


@dataclass
class ValidationReport:
    depth: int
    checks: list = field(default_factory=list)
    positivity_window: int = None

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def as_dict(self):
        return {
            "depth": self.depth,
            "ok": self.ok,
            "positivity_window": self.positivity_window,
            "checks": [{"name": c.name, "ok": c.ok, "witness": c.witness} for c in self.checks],
        }


def _composed(d, start, k):
    m = d.incidence(start)
    for i in range(start + 1, start + k):
        m = matmul(d.incidence(i), m)
    return m


def positivity_window(d, depth):
    """Least ``k`` such that every product of ``k`` consecutive incidence
    matrices (below level 1, or in the repeating part) is strictly positive."""
    if d.stationary:
        starts = [max(1, d.stationary_start) + i for i in range(len(d.period))]
        horizon = depth
    else:
        starts = None
        horizon = min(depth, d.depth)
    for k in range(1, horizon + 1):
        if starts is None:
            ss = range(1, horizon - k + 1)
            if not ss:
                break
        else:
            ss = starts
        if all(all(x > 0 for row in _composed(d, s, k) for x in row) for s in ss):
            return k
    return None


def _extreme_cycles(d, pick):
    """Periodic points of the period-composed max (or min) predecessor map."""
    start = max(1, d.stationary_start)
    size = d.n_vertices(start + len(d.period))

    def up(w):
        n = start + len(d.period)
        for m in range(n, start, -1):
            w = pick(d, m, w)
        return w

    f = {w: up(w) for w in range(size)}
    periodic = set()
    for w in range(size):
        x = w
        for _ in range(size):
            x = f[x]
        periodic.add(x)
    return sorted(periodic)


def validate_diagram(d, depth):
    """Check the model hypotheses up to ``depth``; malformed ranks raise."""
    if d.depth is not None:
        depth = min(depth, d.depth)
    report = ValidationReport(depth=depth)
    for n in range(depth):
        check_ranks(d.block(n), n)

    bad_in = next(((n + 1, w) for n in range(depth) for w in range(d.n_vertices(n + 1))
                   if not any(e.range == w for e in d.block(n).edges)), None)
    report.checks.append(Check("in-degree >= 1", bad_in is None,
                               "" if bad_in is None else f"vertex {bad_in[1]} at level {bad_in[0]}"))
    bad_out = next(((n, v) for n in range(depth) for v in range(d.n_vertices(n))
                    if not any(e.source == v for e in d.block(n).edges)), None)
    report.checks.append(Check("out-degree >= 1", bad_out is None,
                               "" if bad_out is None else f"vertex {bad_out[1]} at level {bad_out[0]}"))

    if bad_in is None:
        if d.stationary:
            for nm, pick in (("unique maximal path", BratteliDiagram.max_parent),
                             ("unique minimal path", BratteliDiagram.min_parent)):
                cyc = _extreme_cycles(d, pick)
                report.checks.append(Check(nm, len(cyc) == 1,
                                           f"periodic extreme chains through vertices {cyc} (structural)"))
        else:
            mid = (depth + 1) // 2
            for nm, pick in (("unique maximal path", BratteliDiagram.max_parent),
                             ("unique minimal path", BratteliDiagram.min_parent)):
                tops = set()
                for w in range(d.n_vertices(depth)):
                    x = w
                    for m in range(depth, mid, -1):
                        x = pick(d, m, x)
                    tops.add(x)
                report.checks.append(Check(nm, len(tops) == 1,
                                           f"{len(tops)} distinct chains at level {mid} (up to depth {depth})"))

        report.positivity_window = positivity_window(d, depth)
        report.checks.append(Check(
            "positivity window", report.positivity_window is not None,
            f"window {report.positivity_window}" if report.positivity_window else f"not found up to depth {depth}"))
    return report


def _composed_block(d, a, b):
    """Single block from level ``a`` to ``b`` with lexicographic path order."""
    edges = []
    for w in range(d.n_vertices(b)):
        rank = 0

        # paths into w in Vershik order: last edge rank outermost
        def paths(level, v):
            if level == a:
                yield v
                return
            into = sorted((e for e in d.block(level - 1).edges if e.range == v), key=lambda e: e.rank)
            for e in into:
                yield from paths(level - 1, e.source)
        for src in paths(b, w):
            rank += 1
            edges.append(Edge(src, w, rank))
    return LevelBlock(d.n_vertices(b), tuple(edges))


def telescope(d, levels=None, every=None):
    """Contract a diagram onto the selected levels.

    Give either an explicit strictly increasing ``levels`` list starting at 0
    (the result is finite) or ``every=k`` for levels ``0, k, 2k, ...``
    (stationary diagrams stay stationary).
    """
    if every is not None:
        if every < 1:
            raise ContractError("every must be positive")
        if not d.stationary:
            levels = list(range(0, d.depth + 1, every))
        else:
            s, per = d.stationary_start, len(d.period)
            i0 = -(-s // every)  # first selected level inside the repeating part
            lcm = per * every // gcd(per, every)
            n_period = lcm // every
            sel = [i * every for i in range(i0 + n_period + 1)]
            blocks = [_composed_block(d, a, b) for a, b in zip(sel, sel[1:])]
            return BratteliDiagram(d.top, tuple(blocks[:i0]), tuple(blocks[i0:]), name=f"{d.name}/every{every}")
    if not levels:
        raise ContractError("empty level selection")
    levels = list(levels)
    if levels[0] != 0 or any(b <= a for a, b in zip(levels, levels[1:])):
        raise ContractError("levels must start at 0 and increase strictly")
    for n in levels:
        d.check_level(n)
    blocks = [_composed_block(d, a, b) for a, b in zip(levels, levels[1:])]
    return BratteliDiagram(d.top, tuple(blocks), (), name=f"{d.name}/telescoped")


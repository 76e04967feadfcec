"""Line-oriented text format for ordered Bratteli diagrams.

::

    bratteli 1
    name fibonacci
    top 1
    block 2          # next level has 2 vertices; edge lines follow
    0 0 1            # source range rank
    0 1 1
    period           # blocks below repeat forever (omit for a finite diagram)
    block 2
    ...

``serialize`` emits a canonical form, so ``parse(serialize(d)) == d`` and
``serialize(parse(text))`` is a fixed point.
"""

import re

from ..errors import CantorWacError
from .diagram import BratteliDiagram, Edge, LevelBlock


class ParseError(CantorWacError):
    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def field_columns(line):
    """1-based start column of each whitespace-separated field."""
    return [m.start() + 1 for m in re.finditer(r"\S+", line)]


def _ints(parts, lineno, line, count):
    if len(parts) != count:
        raise ParseError(f"expected {count} integers, got {len(parts)}", lineno)
    # parts are the trailing fields of the line
    cols = field_columns(line)[-len(parts):]
    out = []
    for p, col in zip(parts, cols):
        try:
            out.append(int(p))
        except ValueError:
            raise ParseError(f"not an integer: {p!r}", lineno, col) from None
    return out


def parse(text):
    name, top = "", None
    blocks, period = [], []
    target = blocks
    current = None
    seen_header = False

    def flush():
        if current is not None:
            target.append(LevelBlock(current[0], tuple(current[1])))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        parts = line.split()
        if not parts:
            continue
        key = parts[0]
        if not seen_header:
            if parts != ["bratteli", "1"]:
                raise ParseError("expected header 'bratteli 1'", lineno)
            seen_header = True
            continue
        if key == "name":
            name = line.split(None, 1)[1] if len(parts) > 1 else ""
        elif key == "top":
            (top,) = _ints(parts[1:], lineno, line, 1)
        elif key == "block":
            flush()
            (n,) = _ints(parts[1:], lineno, line, 1)
            current = (n, [])
        elif key == "period":
            flush()
            current = None
            if target is period:
                raise ParseError("duplicate 'period'", lineno)
            target = period
        elif key == "end":
            break
        else:
            if current is None:
                raise ParseError("edge line outside a block", lineno)
            current[1].append(Edge(*_ints(parts, lineno, line, 3)))
    flush()
    if not seen_header:
        raise ParseError("empty input", 1)
    if top is None:
        raise ParseError("missing 'top' line", 1)
    return BratteliDiagram(top, tuple(blocks), tuple(period), name=name)


def serialize(d):
    lines = ["bratteli 1"]
    if d.name:
        lines.append(f"name {d.name}")
    lines.append(f"top {d.top}")

    def emit(blk):
        lines.append(f"block {blk.n_targets}")
        lines.extend(f"{e.source} {e.range} {e.rank}" for e in blk.edges)

    for blk in d.blocks:
        emit(blk)
    if d.period:
        lines.append("period")
        for blk in d.period:
            emit(blk)
    lines.append("end")
    return "\n".join(lines) + "\n"


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(d, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(d))

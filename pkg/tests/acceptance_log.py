"""Collects one pass/fail line per acceptance criterion."""

_RESULTS = {}


def record(key, title, ok, detail=""):
    _RESULTS[key] = (title, bool(ok), detail)
    line = format_line(key)
    print(line)
    return ok


def format_line(key):
    title, ok, detail = _RESULTS[key]
    tail = f" ({detail})" if detail else ""
    return f"[{'PASS' if ok else 'FAIL'}] {key}: {title}{tail}"


def lines():
    return [format_line(k) for k in sorted(_RESULTS, key=_order)]


def _order(key):
    head = key.split()[0].rstrip("abcdefghijklmnopqrstuvwxyz")
    return (int(head) if head.isdigit() else 99, key)

"""Ready-made diagrams used by tests, docs and the CLI (``builtin:<name>``)."""

from .diagram import BratteliDiagram, block_from_matrix


def odometer(q=2, first=None, name=None):
    """The ``q``-adic odometer: one vertex per level, ``q`` edges per level.

    ``first`` overrides the number of edges out of the root, which gives an
    odometer whose heights are ``first * q**(n-1)``.
    """
    first = q if first is None else first
    return BratteliDiagram(
        top=1,
        blocks=(block_from_matrix([[first]]),),
        period=(block_from_matrix([[q]]),),
        name=name or (f"odometer{q}" if first == q else f"odometer{q}x{first}"),
    )


def dyadic():
    return odometer(2, name="dyadic")


def fibonacci():
    """Incidence ``[[1, 1], [1, 0]]`` at every level, heights ``(F_{n+1}, F_n)``.

    A single ordering repeated every level cannot be properly ordered for
    this matrix, so the ordering alternates with period two.
    """
    a = [[1, 1], [1, 0]]
    return BratteliDiagram(
        top=1,
        blocks=(block_from_matrix([[1], [1]]),),
        period=(block_from_matrix(a, order=[[0, 1], [0]]), block_from_matrix(a, order=[[1, 0], [0]])),
        name="fibonacci",
    )


def two_tower(h1, h2):
    """Level-1 towers of heights ``h1`` and ``h2``, then the full 2x2 pattern."""
    return BratteliDiagram(
        top=1,
        blocks=(block_from_matrix([[h1], [h2]]),),
        period=(block_from_matrix([[1, 1], [1, 1]]),),
        name=f"twotower{h1}_{h2}",
    )


BUILTINS = {
    "dyadic": dyadic,
    "fibonacci": fibonacci,
    "triadic": lambda: odometer(3, name="triadic"),
    "odometer2x3": lambda: odometer(2, first=3),
}


def builtin(name):
    if name in BUILTINS:
        return BUILTINS[name]()
    if name.startswith("twotower"):
        h1, h2 = name[len("twotower"):].split("_")
        return two_tower(int(h1), int(h2))
    if name.startswith("odometer"):
        return odometer(int(name[len("odometer"):]))
    raise KeyError(f"unknown builtin diagram {name!r}")

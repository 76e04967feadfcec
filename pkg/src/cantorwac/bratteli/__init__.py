"""Cantor minimal systems as properly ordered Bratteli diagrams."""

from .diagram import BratteliDiagram, Edge, LevelBlock, block_from_matrix, make_block
from .fileformat import ParseError, dump, load, parse, serialize
from .library import builtin, dyadic, fibonacci, odometer, two_tower
from .paths import PathPrefix, all_prefixes
from .sets import CellFunction, ClopenSet, alpha, base, pullback, roof, union_all, vershik_action
from .structure import ValidationReport, positivity_window, telescope, validate_diagram
from .towers import KRPartition, Tower, divide_tower, kr_partition

__all__ = [
    "BratteliDiagram", "Edge", "LevelBlock", "block_from_matrix", "make_block",
    "ParseError", "dump", "load", "parse", "serialize",
    "builtin", "dyadic", "fibonacci", "odometer", "two_tower",
    "PathPrefix", "all_prefixes",
    "CellFunction", "ClopenSet", "alpha", "base", "pullback", "roof", "union_all", "vershik_action",
    "ValidationReport", "positivity_window", "telescope", "validate_diagram",
    "KRPartition", "Tower", "divide_tower", "kr_partition",
]

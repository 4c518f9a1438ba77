"""Exact lower bounds on Huffman code redundancy when only some symbol
probabilities are known."""

from .exactnum import ClosedFormReal, compare, parse_canonical, to_canonical, to_decimal
from .optimize import BoundResult, r_min_n, r_min_star_oracle, r_min_upto, threshold
from .prune import r_min_star, run_algorithm3
from .source import Source, SubSource

__all__ = [
    "BoundResult", "ClosedFormReal", "Source", "SubSource", "compare",
    "parse_canonical", "r_min_n", "r_min_star", "r_min_star_oracle",
    "r_min_upto", "run_algorithm3", "threshold", "to_canonical", "to_decimal",
]
__version__ = "0.1.0"

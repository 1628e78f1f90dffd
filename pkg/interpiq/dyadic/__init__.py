"""
InterpIQ Dyadic Module

Whitney squares of the disk, their four-family coloring, per-square minimizers
and certified separation between same-class squares.
"""

from .squares import (
    DyadicIndex,
    DyadicSquare,
    SeparationEstimate,
    square_of,
    color_class,
    square_center,
    square_separation,
    separation_details,
    squares_frame,
    occupied_squares,
    level_squares,
)
from .partition import SquareMinimizer, split4, per_square_minimizer

__all__ = [
    "DyadicIndex",
    "DyadicSquare",
    "SeparationEstimate",
    "square_of",
    "color_class",
    "square_center",
    "square_separation",
    "separation_details",
    "squares_frame",
    "occupied_squares",
    "level_squares",
    "SquareMinimizer",
    "split4",
    "per_square_minimizer",
]

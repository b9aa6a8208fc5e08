"""
Numeric and graph tools for dipcheck
"""

from src.tools.laplace import LaplaceDist, prob_le
from src.tools.piecewise import INF, PiecewiseExpPoly
from src.tools.scc import strongly_connected_components

__all__ = [
    "INF",
    "LaplaceDist",
    "PiecewiseExpPoly",
    "prob_le",
    "strongly_connected_components",
]

"""Robber locating game workbench: exact solving, strategy graphs, strategy translations."""
from .graph import Graph, GraphError, SubdividedGraph, build_graph, subdivide
from .solver import decide_localizable, localization_number, subdivision_number
from .strategy import StrategyTable
from .strategy_graph import StrategyGraph, build, is_cop_winning

__all__ = ["Graph", "GraphError", "SubdividedGraph", "build_graph", "subdivide", "decide_localizable",
           "localization_number", "subdivision_number", "StrategyTable", "StrategyGraph", "build",
           "is_cop_winning"]
__version__ = "0.1.0"

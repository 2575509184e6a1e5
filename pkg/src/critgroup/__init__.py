"""Critical groups of multigraphs: Smith forms, pair orders, markings,
path certificates and collapsed values of integer matrices."""

from .collapsed import CollapsedReport, collapsed_values, eigenvector_collapse_pairs, is_spread
from .constructions import MarkedGraph, reduce_to_string
from .errors import (
    CritGroupError,
    DimensionError,
    DisconnectedGraphError,
    InvariantError,
    MarkingError,
    ParseError,
    SearchBudgetExceeded,
)
from .graph import Multigraph, parse_graph, format_graph, spanning_tree_count
from .group import GroupStructure, Marking, critical_group, marking, pair_order, pair_orders
from .linalg import BACKEND, Cokernel, IntMatrix, smith_normal_form
from .paths import PathSystem, order_one_pair, order_two_certificate, verify_path_system

__all__ = [
    "BACKEND",
    "Cokernel",
    "CollapsedReport",
    "CritGroupError",
    "DimensionError",
    "DisconnectedGraphError",
    "GroupStructure",
    "IntMatrix",
    "InvariantError",
    "MarkedGraph",
    "Marking",
    "MarkingError",
    "Multigraph",
    "ParseError",
    "PathSystem",
    "SearchBudgetExceeded",
    "collapsed_values",
    "critical_group",
    "eigenvector_collapse_pairs",
    "format_graph",
    "is_spread",
    "marking",
    "order_one_pair",
    "order_two_certificate",
    "pair_order",
    "pair_orders",
    "parse_graph",
    "reduce_to_string",
    "smith_normal_form",
    "spanning_tree_count",
    "verify_path_system",
]

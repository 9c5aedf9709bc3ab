"""Classify Boolean gate bases by non-deterministic power and rewrite circuits over them."""

from .boolfun import BoolFun
from .circuit import Circuit, Semantics, equiv, parse_circuit, serialize, truth_table
from .clone import CloneClosure, GateBase, PowerClassification, classify, closure, is_complete

__all__ = [
    "BoolFun",
    "Circuit",
    "CloneClosure",
    "GateBase",
    "PowerClassification",
    "Semantics",
    "classify",
    "closure",
    "equiv",
    "is_complete",
    "parse_circuit",
    "serialize",
    "truth_table",
]

__version__ = "0.1.0"

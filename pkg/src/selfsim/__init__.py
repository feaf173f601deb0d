"""Self-similar groups generated by Mealy automata."""

from __future__ import annotations

from .automaton import (
    IDENTITY_NAME,
    Automaton,
    AutomatonError,
    act,
    dual,
    graph_of,
    inverse_automaton,
    is_homomorphism,
    is_invertible,
    minimize,
    power,
    product,
    render_square_tiles,
    square_tiles,
)
from .graph import LabeledGraph
from .group import GroupWord, equals, restrict, wreath_decomposition
from .kernels import BACKEND
from .nucleus import NucleusReport, is_contracting, is_nuclear, nucleus

__version__ = "0.1.0"

__all__ = [
    "IDENTITY_NAME",
    "Automaton",
    "AutomatonError",
    "BACKEND",
    "GroupWord",
    "LabeledGraph",
    "NucleusReport",
    "act",
    "dual",
    "equals",
    "graph_of",
    "inverse_automaton",
    "is_contracting",
    "is_homomorphism",
    "is_invertible",
    "is_nuclear",
    "minimize",
    "nucleus",
    "power",
    "product",
    "render_square_tiles",
    "restrict",
    "square_tiles",
    "wreath_decomposition",
]

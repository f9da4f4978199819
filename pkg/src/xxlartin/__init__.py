"""Certified angle, link and rank-one checks for XXL type Artin groups."""

__version__ = "0.1.0"

from .presentation import ArtinType, LabeledGraph, classify, parse_graph, serialize_graph
from .words import Word, parse_compact

__all__ = [
    "ArtinType", "LabeledGraph", "Word", "__version__", "classify", "parse_compact", "parse_graph",
    "serialize_graph",
]

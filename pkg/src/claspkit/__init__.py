"""Clasp diagrams of knots: exact invariants, moves, pure braids and finite-type data."""

from __future__ import annotations

from .core import Chord, ClaspDiagram, EMPTY, mirror, parse_diagram, serialize_diagram
from .errors import ClaspError, ConfigError, DomainError, OracleMismatch, ParseError, ResourceError

__version__ = "0.1.0"

__all__ = [
    "Chord",
    "ClaspDiagram",
    "EMPTY",
    "mirror",
    "parse_diagram",
    "serialize_diagram",
    "ClaspError",
    "ConfigError",
    "DomainError",
    "OracleMismatch",
    "ParseError",
    "ResourceError",
    "__version__",
]

"""Removable-singularity analysis of constant-coefficient linear PDE systems
through their polynomial symbol matrices."""

__version__ = "0.1.0"

from .poly import GaussPoly, GaussRational
from .sysparse import ParseError, SystemSpec, emit, parse

__all__ = ["GaussPoly", "GaussRational", "ParseError", "SystemSpec", "emit", "parse", "__version__"]

"""Genealogies of a Feller diffusion descended from a single founder."""
from .errors import ConvergenceError, DomainError, ResourceCapError
from .kernel import DiffusionParams, TimePair

__version__ = "0.1.0"

__all__ = ["ConvergenceError", "DiffusionParams", "DomainError", "ResourceCapError",
           "TimePair", "__version__"]

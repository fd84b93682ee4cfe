"""Hyperbolic Fourier analysis: modular functions, the biorthogonal system
of the hyperbolic trigonometric functions, and its applications."""

from . import biortho, cfrac, contours, faber, genfun, hfs, kleingordon, modular, transfer
from .errors import BoundaryAmbiguous, DomainError, HyperFourierError, NumericalFailure

__version__ = "0.1.0"

__all__ = [
    "biortho",
    "cfrac",
    "contours",
    "faber",
    "genfun",
    "hfs",
    "kleingordon",
    "modular",
    "transfer",
    "HyperFourierError",
    "DomainError",
    "NumericalFailure",
    "BoundaryAmbiguous",
]

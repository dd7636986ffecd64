"""Numerical laboratory for steady periodic gravity water waves with vorticity."""

from . import blowup, cli, field, inteq, laminar, pressure, vorticity, wavegen
from .errors import WavecrestError

__version__ = "0.1.0"

__all__ = [
    "blowup",
    "cli",
    "field",
    "inteq",
    "laminar",
    "pressure",
    "vorticity",
    "wavegen",
    "WavecrestError",
    "__version__",
]

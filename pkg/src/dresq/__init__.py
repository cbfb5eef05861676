"""dresq: circuit-QED simulator for a two-qubit double-resonator coupler.

Modules:
    fock          tensor-product Fock space, ladder operators, eigensolver
    device        device parameters, Hamiltonian builder, analytic coupling
    spectroscopy  eigenvalue sweeps, dressed-state labels, gap extraction
    dynamics      Lindblad evolution, pulse schedules, vacuum-Rabi chevrons
    fitting       decay / damped-cosine / chevron-coupling least squares
    svgplot       deterministic SVG line plots and heatmaps
    cli           command-line front end
"""

from .errors import (
    DresqError,
    ConfigError,
    PhysicsError,
    NumericsError,
    IntegrationError,
    FitError,
)
from .fock import HilbertSpace, OperatorMatrix
from .device import DeviceParams, OperatingPoint

__all__ = [
    "DresqError",
    "ConfigError",
    "PhysicsError",
    "NumericsError",
    "IntegrationError",
    "FitError",
    "HilbertSpace",
    "OperatorMatrix",
    "DeviceParams",
    "OperatingPoint",
]

__version__ = "0.1.0"

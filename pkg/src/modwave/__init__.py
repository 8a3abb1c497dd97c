"""Parametric photon-pair generation from modulated qubit arrays in a waveguide.

Two independent computation engines (a Floquet master equation and a
diagrammatic Green-function resummation) plus closed-form references, a scan
runner and a CLI. All frequencies and rates are expressed in units of the
single-qubit radiative decay rate gamma_1D.
"""

__version__ = "0.1.0"

from .hilbert import FockBasis, build_basis, annihilation, creation, sandwich_superop
from .model import SystemConfig, EffectiveHamiltonian
from .master import FloquetSolution, stationary_rho

__all__ = [
    "__version__",
    "FockBasis",
    "build_basis",
    "annihilation",
    "creation",
    "sandwich_superop",
    "SystemConfig",
    "EffectiveHamiltonian",
    "FloquetSolution",
    "stationary_rho",
]

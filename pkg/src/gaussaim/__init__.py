"""Bound states of the attractive Gaussian well.

Three independent solvers: the asymptotic iteration method on the truncated
Maclaurin potential, a Rayleigh-Ritz estimate with a scaled oscillator trial
function, and Numerov shooting on the exact potential.
"""

from .aim import aim_levels, convergence_table, delta, find_eigenvalue
from .errors import (ContractError, FewerRootsError, GaussAimError, NoBoundStateError,
                     NoConvergenceError, PoleError, QuadratureError, RepresentationError,
                     SolverError, UnboundError)
from .kernels import BACKEND
from .models import (AimConfig, HarmonicPotential, Method, PotentialModel, QuantumNumbers,
                     SpectrumEntry)
from .numerov import ShootingGrid, shoot_eigenvalue
from .polynomial import EXACT, LaurentPoly, Representation
from .variational import TrialWavefunction, expectation_energy, optimize_b

__all__ = [
    "AimConfig", "BACKEND", "ContractError", "EXACT", "FewerRootsError", "GaussAimError",
    "HarmonicPotential", "LaurentPoly", "Method", "NoBoundStateError", "NoConvergenceError",
    "PoleError", "PotentialModel", "QuadratureError", "QuantumNumbers", "Representation",
    "RepresentationError", "ShootingGrid", "SolverError", "SpectrumEntry", "TrialWavefunction",
    "UnboundError", "aim_levels", "convergence_table", "delta", "expectation_energy",
    "find_eigenvalue", "optimize_b", "shoot_eigenvalue",
]

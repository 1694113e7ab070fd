"""Value types shared by the AIM, variational and Numerov solvers."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from math import factorial
from typing import Any

import numpy as np

from .errors import ContractError


@dataclass(frozen=True)
class PotentialModel:
    """Attractive Gaussian well ``V(r) = -depth * exp(-range_ * r**2)``.

    With the default units (``hbar = 1``, ``mass = 0.5``) the factor
    ``2m/hbar**2`` is one, so reduced energies equal physical energies.
    """

    depth: float = 400.0
    range_: float = 1.0
    mass: float = 0.5
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("depth", "range_", "mass", "hbar"):
            if not getattr(self, name) > 0:
                raise ContractError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def energy_scale(self) -> float:
        """``2m/hbar**2``: multiplies energies to give the reduced ``epsilon``."""
        return 2.0 * self.mass / self.hbar ** 2

    @property
    def reduced_depth(self) -> float:
        return self.depth * self.energy_scale

    @property
    def well_bottom(self) -> float:
        return -self.depth

    def potential(self, r):
        return -self.depth * np.exp(-self.range_ * np.asarray(r, dtype=float) ** 2)

    def taylor_coefficients(self, order: int) -> list[float]:
        """Coefficients of ``r**0, r**2, ..., r**order`` of the Maclaurin series."""
        return truncated_potential_coefficients(self.depth, order, self.range_)


@dataclass(frozen=True)
class HarmonicPotential:
    """``V(r) = strength * r**2``; exactly solvable reference for sanity checks."""

    strength: float = 1.0
    mass: float = 0.5
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("strength", "mass", "hbar"):
            if not getattr(self, name) > 0:
                raise ContractError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def energy_scale(self) -> float:
        return 2.0 * self.mass / self.hbar ** 2

    def potential(self, r):
        return self.strength * np.asarray(r, dtype=float) ** 2

    def taylor_coefficients(self, order: int = 2) -> list[float]:
        return [0.0, self.strength]

    @property
    def well_bottom(self) -> float:
        return 0.0

    def frequency_factor(self) -> float:
        """``sqrt(2m c)/hbar`` so that ``E = hbar**2/(2m) * factor * (4n + 2l + 3)``."""
        return float(np.sqrt(self.energy_scale * self.strength))

    def exact_energy(self, n: int, l: int) -> float:
        return self.frequency_factor() * (4 * n + 2 * l + 3) / self.energy_scale


def truncated_potential_coefficients(depth, order: int, range_=1):
    """Maclaurin coefficients of ``-depth * exp(-range_ r**2)`` for even powers.

    Entry ``j`` multiplies ``r**(2j)`` and equals ``(-1)**(j+1) depth range_**j / j!``.
    Numeric types are preserved, so ``Fraction`` inputs give exact coefficients.
    """
    if isinstance(order, bool) or int(order) != order or order < 2 or order % 2:
        raise ContractError(f"truncation order must be an even integer >= 2, got {order}")
    return [(-1) ** (j + 1) * depth * range_ ** j / factorial(j) for j in range(order // 2 + 1)]


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    l: int

    def __post_init__(self):
        for name in ("n", "l"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 0:
                raise ContractError(f"{name} must be a non-negative integer, got {value}")


@dataclass(frozen=True)
class AimConfig:
    beta: float = 10.0
    truncation_order: int = 10
    k_max: int = 40
    precision_bits: int = 256
    scan_step: float = 1.0
    root_tol: float = 1e-9
    stability_tol: float = 1e-4

    def __post_init__(self):
        if not self.beta > 0:
            raise ContractError(f"beta must be positive, got {self.beta}")
        order = self.truncation_order
        if isinstance(order, bool) or int(order) != order or order < 2 or order % 2:
            raise ContractError(f"truncation_order must be an even integer >= 2, got {order}")
        if int(self.k_max) != self.k_max or self.k_max < 2:
            raise ContractError(f"k_max must be an integer >= 2, got {self.k_max}")
        if int(self.precision_bits) != self.precision_bits or self.precision_bits < 24:
            raise ContractError(f"precision_bits must be an integer >= 24, got {self.precision_bits}")
        for name in ("scan_step", "root_tol", "stability_tol"):
            if not getattr(self, name) > 0:
                raise ContractError(f"{name} must be positive, got {getattr(self, name)}")

    def with_(self, **changes) -> "AimConfig":
        return replace(self, **changes)


class Method(str, enum.Enum):
    AIM = "aim"
    VARIATIONAL = "variational"
    NUMEROV = "numerov"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SpectrumEntry:
    """One solved level.  ``binding_energy`` is ``-E`` (positive when bound)."""

    n: int
    l: int
    method: Method
    binding_energy: float | None
    k_used: int | None = None
    b_star: float | None = None
    status: str = "ok"
    diagnostics: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def energy(self) -> float | None:
        return None if self.binding_energy is None else -self.binding_energy

    @classmethod
    def failed(cls, n: int, l: int, method: Method, error) -> "SpectrumEntry":
        code = getattr(error, "code", "SOLVER-ERROR")
        return cls(n, l, Method(method), None, status=code, diagnostics={"error": str(error)})

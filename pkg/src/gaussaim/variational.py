"""Rayleigh-Ritz estimates with a scaled oscillator trial function.

The trial function for level ``(n, l)`` is

    R(r) = N (r/b)**l  L_n^{l+1/2}(r**2/b**2)  exp(-r**2 / (2 b**2))

with ``N**2 = 2 n! 2**(2n+2l+1) (n+l)! / (b**3 sqrt(pi) (2n+2l+1)!)``, which
normalizes it.  Matrix elements are computed with generalized Gauss-Laguerre
quadrature in ``u = r**2/b**2``; the kinetic and norm integrands are then
polynomials and integrate exactly.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from .errors import ContractError, NoBoundStateError, QuadratureError
from .models import Method, PotentialModel, QuantumNumbers, SpectrumEntry

DEFAULT_NODES = 200
MAX_NODES = 1600
QUAD_TOL = 1e-9


def laguerre(n: int, alpha: float, x):
    """Associated Laguerre polynomial ``L_n^alpha(x)`` by the upward recurrence."""
    if n < 0:
        raise ContractError(f"n must be non-negative, got {n}")
    if not alpha > -1:
        raise ContractError(f"alpha must exceed -1, got {alpha}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def _laguerre_derivative(n: int, alpha: float, x):
    # d/dx L_n^a = -L_{n-1}^{a+1}
    if n == 0:
        return np.zeros_like(np.asarray(x, dtype=float))
    return -laguerre(n - 1, alpha + 1, x)


@dataclass(frozen=True)
class TrialWavefunction:
    n: int
    l: int
    b: float

    def __post_init__(self):
        QuantumNumbers(self.n, self.l)
        if not self.b > 0:
            raise ContractError(f"b must be positive, got {self.b}")

    @property
    def norm_squared(self) -> float:
        n, l = self.n, self.l
        num = 2 * math.factorial(n) * 2 ** (2 * n + 2 * l + 1) * math.factorial(n + l)
        return num / math.factorial(2 * n + 2 * l + 1) / (self.b ** 3 * math.sqrt(math.pi))

    def __call__(self, r):
        return trial_radial(self, r)


def trial_radial(tw: TrialWavefunction, r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ContractError("r must be non-negative")
    u = (r / tw.b) ** 2
    val = math.sqrt(tw.norm_squared) * (r / tw.b) ** tw.l * laguerre(tw.n, tw.l + 0.5, u) * np.exp(-u / 2)
    return val if np.ndim(val) else float(val)


@functools.lru_cache(maxsize=64)
def _rule(nodes: int, l: int) -> tuple[np.ndarray, np.ndarray]:
    # weight u**(l - 1/2) exp(-u) keeps the centrifugal integrand polynomial.
    # Golub-Welsch on the Jacobi matrix; scipy's roots_genlaguerre overflows
    # in its Newton polish beyond a few hundred nodes.
    alpha = l - 0.5
    k = np.arange(1, nodes)
    u, vec = eigh_tridiagonal(2 * np.arange(nodes) + alpha + 1, np.sqrt(k * (k + alpha)))
    return u, np.exp(gammaln(alpha + 1)) * vec[0] ** 2


def _moments(tw: TrialWavefunction, pot, nodes: int) -> tuple[float, float, float]:
    """``(norm, kinetic, potential)`` integrals by ``nodes``-point quadrature."""
    n, l, b = tw.n, tw.l, tw.b
    u, w = _rule(nodes, l)
    lag = laguerre(n, l + 0.5, u)
    dlag = _laguerre_derivative(n, l + 0.5, u)
    n2 = tw.norm_squared
    q = 0.5 * l * lag + u * dlag - 0.5 * u * lag
    norm = n2 * b ** 3 / 2 * np.dot(w, u * lag * lag)
    grad = 2 * b * n2 * np.dot(w, q * q)
    cent = l * (l + 1) * n2 * b / 2 * np.dot(w, lag * lag)
    kinetic = (grad + cent) / pot.energy_scale
    potential = n2 * b ** 3 / 2 * np.dot(w, u * lag * lag * pot.potential(b * np.sqrt(u)))
    return float(norm), float(kinetic), float(potential)


def energy_at(tw: TrialWavefunction, pot, nodes: int = DEFAULT_NODES) -> float:
    """``<H>/<R|R>`` at a fixed quadrature order, without a convergence check."""
    norm, kinetic, potential = _moments(tw, pot, nodes)
    return (kinetic + potential) / norm


def expectation_energy(tw: TrialWavefunction, pot=PotentialModel(), nodes: int = DEFAULT_NODES,
                       tol: float = QUAD_TOL) -> float:
    """``<H>`` for the trial function, raising the order until doubling changes it by < ``tol``."""
    e1 = energy_at(tw, pot, nodes)
    while True:
        e2 = energy_at(tw, pot, 2 * nodes)
        if not (np.isfinite(e1) and np.isfinite(e2)):
            raise QuadratureError(f"<H> is not finite for {tw}", estimates=(e1, e2))
        if abs(e2 - e1) < tol:
            return e2
        if 2 * nodes >= MAX_NODES:
            raise QuadratureError(
                f"<H> not converged for {tw} at {2 * nodes} nodes", estimates=(e1, e2))
        nodes, e1 = 2 * nodes, e2


def kinetic_energy(tw: TrialWavefunction, pot=PotentialModel(), nodes: int = DEFAULT_NODES) -> float:
    norm, kinetic, _ = _moments(tw, pot, nodes)
    return kinetic / norm


def potential_energy(tw: TrialWavefunction, pot=PotentialModel(), nodes: int = DEFAULT_NODES) -> float:
    norm, _, potential = _moments(tw, pot, nodes)
    return potential / norm


def stationary_points(nq: QuantumNumbers, pot, bracket=(0.01, 10.0), points: int = 200,
                      nodes: int = DEFAULT_NODES) -> list[tuple[float, float]]:
    """Local minima ``(b, E(b))`` of the energy on a log-spaced scan, polished by golden section."""
    bs = np.logspace(np.log10(bracket[0]), np.log10(bracket[1]), points)
    energy = np.array([energy_at(TrialWavefunction(nq.n, nq.l, b), pot, nodes) for b in bs])
    slope = np.gradient(energy, bs)
    found = []
    for i in range(1, points - 1):
        if slope[i - 1] < 0 <= slope[i] or (slope[i] < 0 <= slope[i + 1] and i + 1 == points - 1):
            lo, mid, hi = bs[i - 1], bs[i], bs[i + 1]
            if not (energy[i] <= energy[i - 1] and energy[i] <= energy[i + 1]):
                mid = lo if energy[i - 1] < energy[i + 1] else hi
                if mid in (bs[0], bs[-1]):
                    continue
                j = int(np.searchsorted(bs, mid))
                lo, hi = bs[j - 1], bs[j + 1]
            res = minimize_scalar(lambda b: energy_at(TrialWavefunction(nq.n, nq.l, b), pot, nodes),
                                  bracket=(lo, mid, hi), method="golden", tol=1e-10)
            found.append((float(res.x), float(res.fun)))
    return found


def optimize_b(nq: QuantumNumbers, pot=PotentialModel(), bracket=(0.01, 10.0), points: int = 200,
               nodes: int = DEFAULT_NODES, bound_only: bool = True) -> tuple[float, SpectrumEntry]:
    """Best scale ``b`` and the resulting level; raises NoBoundStateError.

    Among local minima of ``E(b)`` the lowest negative one is kept.  Only the
    lowest level of each ``l`` is a rigorous upper bound.  ``bound_only=False``
    accepts positive minima, for confining potentials.
    """
    candidates = [(b, e) for b, e in stationary_points(nq, pot, bracket, points, nodes)
                  if e < 0 or not bound_only]
    if not candidates:
        raise NoBoundStateError(f"no stationary point with E(b) < 0 in {bracket} for {nq}")
    b_star, _ = min(candidates, key=lambda c: c[1])
    tw = TrialWavefunction(nq.n, nq.l, b_star)
    energy = expectation_energy(tw, pot, nodes)
    entry = SpectrumEntry(nq.n, nq.l, Method.VARIATIONAL, -energy, b_star=b_star,
                          diagnostics={"b_star": b_star, "quadrature_order": nodes,
                                       "stationary_points": len(candidates)})
    return b_star, entry

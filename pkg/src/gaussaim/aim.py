"""Asymptotic iteration method for the truncated Gaussian well.

The radial function is factored as ``R(r) = r**(l+1) exp(-beta r**2) f(r)``,
which turns the radial equation into ``f'' = lambda0 f' + s0 f`` with

    lambda0(r) = 4 beta r - 2 (l + 1) / r
    s0(r)      = V_trunc(r) + 2 beta (2 l + 3) - 4 beta**2 r**2 - epsilon

where ``V_trunc`` is the Maclaurin polynomial of the reduced potential.  The
recurrence

    lambda_k = lambda_{k-1}' + s_{k-1} + lambda0 lambda_{k-1}
    s_k      = s_{k-1}'      + s0 lambda_{k-1}

is run on Laurent polynomials and the zeros in ``epsilon`` of
``delta_k = lambda_k s_{k-1} - lambda_{k-1} s_k`` at a fixed radius ``x0``
approximate the eigenvalues.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2
import numpy as np
from scipy.optimize import brentq

from . import kernels
from ._pykernels import _format, _parse
from .errors import ContractError, FewerRootsError, NoConvergenceError, PoleError
from .models import (AimConfig, Method, PotentialModel, QuantumNumbers, SpectrumEntry,
                     truncated_potential_coefficients)
from .polynomial import EXACT, LaurentPoly, Representation

log = logging.getLogger(__name__)

__all__ = [
    "AimSeed", "build_seed", "oscillator_seed", "seed_from_potential", "evaluation_point",
    "aim_iterate", "delta", "delta_sequence", "find_eigenvalue", "aim_levels",
    "convergence_table", "truncated_potential_coefficients", "LevelFinder",
]

# distance kept from the well bottom and from threshold when scanning
EDGE_MARGIN = 1e-6


@dataclass(frozen=True)
class AimSeed:
    """``lambda0`` and the energy-independent part of ``s0``; ``s0 = s0_const - epsilon``."""

    lambda0: LaurentPoly
    s0_const: LaurentPoly
    l: int
    beta: object

    @property
    def rep(self) -> Representation:
        return self.lambda0.rep

    def s0(self, epsilon) -> LaurentPoly:
        return self.s0_const - self.rep.coerce(epsilon)


def seed_from_potential(even_coefficients: Sequence, l: int, beta, rep: Representation = EXACT) -> AimSeed:
    """Seed for a reduced potential ``sum_j c_j r**(2j)`` (already multiplied by 2m/hbar**2).

    Coefficients are combined exactly and rounded once into ``rep``.
    """
    if isinstance(l, bool) or int(l) != l or l < 0:
        raise ContractError(f"l must be a non-negative integer, got {l}")
    b = _to_fraction(beta)
    if b < 0:
        raise ContractError(f"beta must be non-negative, got {beta}")
    lambda0 = LaurentPoly({1: 4 * b, -1: -2 * (l + 1)}, rep)
    terms = {2 * j: _to_fraction(c) for j, c in enumerate(even_coefficients)}
    terms[0] = terms.get(0, 0) + 2 * b * (2 * l + 3)
    terms[2] = terms.get(2, 0) - 4 * b * b
    return AimSeed(lambda0, LaurentPoly(terms, rep), int(l), b)


def build_seed(pot: PotentialModel, l: int, config: AimConfig, rep: Representation | None = None) -> AimSeed:
    """AIM seed for the Gaussian well truncated at ``config.truncation_order``.

    Model parameters enter through the exact binary value of their floats, so
    an ``EXACT`` seed and a float seed describe the same equation.
    """
    rep = rep if rep is not None else Representation.floating(config.precision_bits)
    depth = _to_fraction(pot.depth) * _to_fraction(pot.energy_scale)
    coeffs = truncated_potential_coefficients(depth, config.truncation_order, _to_fraction(pot.range_))
    return seed_from_potential(coeffs, l, config.beta, rep)


def oscillator_seed(l: int, strength=1, rep: Representation = EXACT, beta=None) -> AimSeed:
    """Seed for the reduced potential ``strength * r**2``.

    The default ``beta = sqrt(strength)/2`` makes the Gaussian factor the exact
    oscillator envelope, so the recurrence terminates at finite ``k``.
    """
    if beta is None:
        root = math.isqrt(strength) if isinstance(strength, int) else None
        if root is not None and root * root == strength:
            beta = Fraction(root, 2)
        else:
            beta = gmpy2.sqrt(gmpy2.mpfr(strength, rep.precision or 256)) / 2
    return seed_from_potential([0, strength], l, beta, rep)


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    num, den = value.as_integer_ratio()
    return Fraction(int(num), int(den))


def evaluation_point(l: int, beta, precision: int | None = None):
    """Radius ``sqrt((l+1)/(2 beta))`` where ``r**(l+1) exp(-beta r**2)`` peaks.

    Returns a float, or an ``mpfr`` of ``precision`` bits when one is given.
    """
    if not beta > 0:
        raise ContractError(f"beta must be positive, got {beta}")
    if precision is None:
        return math.sqrt((l + 1) / (2.0 * float(beta)))
    rep = Representation.floating(precision)
    return rep.context.sqrt(rep.coerce(Fraction(l + 1) / (2 * _to_fraction(beta))))


def aim_iterate(seed: AimSeed, epsilon, k: int) -> list[tuple[LaurentPoly, LaurentPoly]]:
    """``[(lambda_0, s_0), ..., (lambda_k, s_k)]`` with ``epsilon`` substituted."""
    if k < 0:
        raise ContractError(f"k must be non-negative, got {k}")
    lam0 = seed.lambda0
    s0 = seed.s0(epsilon)
    out = [(lam0, s0)]
    lam, s = lam0, s0
    for _ in range(k):
        lam, s = lam.derivative() + s + lam0 * lam, s.derivative() + s0 * lam
        out.append((lam, s))
    return out


def delta(seed: AimSeed, epsilon, k: int, x0):
    """``delta_k(x0) = lambda_k s_{k-1} - lambda_{k-1} s_k`` at energy ``epsilon``.

    Exact seeds are evaluated with rational arithmetic through the polynomial
    algebra; float seeds go through the active kernel.
    """
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")
    if x0 == 0:
        raise PoleError("delta evaluated at x0 = 0")
    if seed.rep.exact:
        seq = aim_iterate(seed, epsilon, k)
        (lp, sp), (lk, sk) = seq[k - 1], seq[k]
        xv = seed.rep.coerce(x0)
        return lk(xv) * sp(xv) - lp(xv) * sk(xv)
    return delta_sequence(seed, epsilon, k, x0)[k - 1]


def delta_sequence(seed: AimSeed, epsilon, k_max: int, x0) -> list:
    """``[delta_1, ..., delta_{k_max}]`` in one pass of the recurrence (float seeds)."""
    rep = seed.rep
    if rep.exact:
        seq = aim_iterate(seed, epsilon, k_max)
        xv = rep.coerce(x0)
        vals = [(lam(xv), s(xv)) for lam, s in seq]
        return [vals[k][0] * vals[k - 1][1] - vals[k - 1][0] * vals[k][1] for k in range(1, k_max + 1)]
    if x0 == 0:
        raise PoleError("delta evaluated at x0 = 0")
    prec = rep.precision
    ctx = rep.context
    s0 = seed.s0(epsilon)
    lam_txt, s_txt = kernels.aim_values(
        {e: _format(c) for e, c in seed.lambda0.terms.items()},
        {e: _format(c) for e, c in s0.terms.items()} or {0: "0"},
        int(k_max), _format(rep.coerce(x0)), prec)
    lam = [_parse(t, prec) for t in lam_txt]
    s = [_parse(t, prec) for t in s_txt]
    return [ctx.sub(ctx.mul(lam[k], s[k - 1]), ctx.mul(lam[k - 1], s[k])) for k in range(1, k_max + 1)]


def _sign(value) -> int:
    """Sign of an mpfr without converting it to a double."""
    return (value > 0) - (value < 0)


class LevelFinder:
    """Scan ``delta_k`` over an energy window once and refine roots on demand.

    One scan evaluates every ``delta_1 .. delta_{k_max}`` at each grid energy,
    so sign-change brackets are known for all iteration counts at once.
    Energies here are reduced (``epsilon = 2 m E / hbar**2``).
    """

    def __init__(self, seed: AimSeed, x0, config: AimConfig, window: tuple[float, float],
                 k_max: int | None = None):
        if seed.rep.exact:
            raise ContractError("LevelFinder needs a float seed")
        lo, hi = window
        if not lo < hi:
            raise ContractError(f"empty energy window {window}")
        self.seed = seed
        self.x0 = seed.rep.coerce(x0)
        self.config = config
        self.window = (float(lo), float(hi))
        self.k_max = int(k_max if k_max is not None else config.k_max)
        self._roots: dict[tuple[int, int], float] = {}
        self._brackets: dict[int, list[tuple[float, float]]] | None = None
        self.evaluations = 0

    def deltas(self, epsilon: float, k: int) -> list:
        self.evaluations += 1
        return delta_sequence(self.seed, epsilon, k, self.x0)

    def _grid(self) -> list[float]:
        lo, hi = self.window
        step = self.config.scan_step
        count = max(1, math.ceil((hi - lo) / step))
        return [lo + i * step for i in range(count)] + [hi]

    def brackets(self, k: int) -> list[tuple[float, float]]:
        """Sign-change intervals of ``delta_k`` on the scan grid, ascending in energy."""
        if not 1 <= k <= self.k_max:
            raise ContractError(f"k must lie in 1..{self.k_max}, got {k}")
        if self._brackets is None:
            grid = self._grid()
            signs = [[_sign(d) for d in self.deltas(e, self.k_max)] for e in grid]
            found: dict[int, list[tuple[float, float]]] = {j: [] for j in range(1, self.k_max + 1)}
            for i in range(len(grid) - 1):
                for j in range(self.k_max):
                    if signs[i][j] * signs[i + 1][j] < 0:
                        found[j + 1].append((grid[i], grid[i + 1]))
            self._brackets = found
        return self._brackets[k]

    def root(self, k: int, index: int) -> float:
        key = (k, index)
        if key not in self._roots:
            a, b = self.brackets(k)[index]
            self._roots[key] = self._refine(k, a, b)
        return self._roots[key]

    def roots(self, k: int) -> list[float]:
        return [self.root(k, i) for i in range(len(self.brackets(k)))]

    def _refine(self, k: int, a: float, b: float) -> float:
        """Brent's method on ``delta_k`` scaled by its value at ``a``."""
        fa = self.deltas(a, k)[k - 1]
        if fa == 0:
            return a
        scale = abs(fa)

        def f(eps):
            return float(self.deltas(eps, k)[k - 1] / scale)

        return brentq(f, a, b, xtol=self.config.root_tol, rtol=4 * np.finfo(float).eps)

    def _persists(self, k: int, r: float) -> bool:
        tol = self.config.stability_tol
        for idx, (a, b) in enumerate(self.brackets(k + 1)):
            if b < r - tol or a > r + tol:
                continue
            if abs(self.root(k + 1, idx) - r) <= tol:
                return True
        return False

    def accepted_level(self, n: int) -> tuple[float, int]:
        """``(epsilon, k_used)`` of the ``n``-th root that persists from ``k`` to ``k + 1``."""
        for k in range(1, self.k_max):
            accepted = []
            for idx in range(len(self.brackets(k))):
                r = self.root(k, idx)
                if self._persists(k, r):
                    accepted.append(r)
                    if len(accepted) == n + 1:
                        return r, k
        found = len(self.brackets(self.k_max))
        if found < n + 1:
            raise FewerRootsError(
                f"only {found} roots of delta_{self.k_max} in {self.window}; need {n + 1}")
        raise NoConvergenceError(f"root {n} did not stabilise within k_max={self.k_max}")

    def raw_level(self, n: int, k: int) -> float | None:
        """``n``-th root of ``delta_k`` without the persistence filter, or None."""
        if n >= len(self.brackets(k)):
            return None
        return self.root(k, n)


def gaussian_window(pot: PotentialModel) -> tuple[float, float]:
    depth = pot.depth * pot.energy_scale
    return (-depth + EDGE_MARGIN, -EDGE_MARGIN)


def _finder(pot: PotentialModel, l: int, config: AimConfig, k_max: int | None = None) -> LevelFinder:
    seed = build_seed(pot, l, config)
    x0 = evaluation_point(l, config.beta, config.precision_bits)
    return LevelFinder(seed, x0, config, gaussian_window(pot), k_max)


def _entry(finder: LevelFinder, n: int, l: int, pot) -> SpectrumEntry:
    eps, k_used = finder.accepted_level(n)
    return SpectrumEntry(
        n, l, Method.AIM, -eps / pot.energy_scale, k_used=k_used,
        diagnostics={"epsilon": eps, "x0": float(finder.x0), "beta": float(finder.config.beta),
                     "precision_bits": finder.config.precision_bits,
                     "truncation_order": finder.config.truncation_order,
                     "brackets": len(finder.brackets(k_used))})


def find_eigenvalue(nq: QuantumNumbers, pot: PotentialModel, config: AimConfig = AimConfig()) -> SpectrumEntry:
    """Binding energy of level ``(n, l)``; raises FewerRootsError or NoConvergenceError."""
    return _entry(_finder(pot, nq.l, config), nq.n, nq.l, pot)


def aim_levels(l: int, n_values: Sequence[int], pot: PotentialModel,
               config: AimConfig = AimConfig()) -> list[SpectrumEntry]:
    """Levels ``(n, l)`` for every ``n`` in ``n_values`` sharing one energy scan.

    Failures are returned as entries with a non-``ok`` status instead of raising.
    """
    finder = _finder(pot, l, config)
    out = []
    for n in n_values:
        try:
            out.append(_entry(finder, n, l, pot))
        except (FewerRootsError, NoConvergenceError) as exc:
            out.append(SpectrumEntry.failed(n, l, Method.AIM, exc))
    return out


def convergence_table(nq: QuantumNumbers, pot: PotentialModel, betas: Sequence[float],
                      ks: Sequence[int], config: AimConfig = AimConfig()) -> list[list[float | None]]:
    """Raw binding-energy estimates ``table[i][j]`` for ``ks[i]`` and ``betas[j]``.

    Each cell is the ``n``-th root of ``delta_k`` in the scan window with no
    persistence filter, so unstable large-``k`` values come through unchanged.
    ``None`` marks a cell with no such root.
    """
    if not betas or not ks:
        raise ContractError("betas and ks must be non-empty")
    k_top = max(ks)
    table = [[None] * len(betas) for _ in ks]
    for j, beta in enumerate(betas):
        finder = _finder(pot, nq.l, config.with_(beta=beta), k_max=max(k_top, 2))
        for i, k in enumerate(ks):
            eps = finder.raw_level(nq.n, k)
            table[i][j] = None if eps is None else -eps / pot.energy_scale
    return table

"""Numerov shooting for the radial equation with the untruncated potential.

Works in reduced units, ``u'' = [l(l+1)/r**2 + s (V(r) - E)] u`` with
``s = 2m/hbar**2``.  The regular solution ``u ~ r**(l+1)`` is integrated outward
and a decaying solution inward; their logarithmic derivatives are compared at a
matching radius near the outer classical turning point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ContractError, UnboundError
from .models import Method, PotentialModel, QuantumNumbers, SpectrumEntry


@dataclass(frozen=True)
class ShootingGrid:
    r_max: float = 10.0
    h: float = 1e-3
    # None: use the outermost classical turning point for each energy
    r_match: float | None = None

    def __post_init__(self):
        if not 0 < self.h < self.r_max:
            raise ContractError(f"need 0 < h < r_max, got h={self.h}, r_max={self.r_max}")
        count = self.r_max / self.h
        if abs(count - round(count)) > 1e-9 * count:
            raise ContractError(f"r_max/h must be an integer, got {count}")
        if self.r_match is not None and not 0 < self.r_match < self.r_max:
            raise ContractError(f"matching radius {self.r_match} outside (0, r_max)")

    @property
    def steps(self) -> int:
        return int(round(self.r_max / self.h))

    def radii(self) -> np.ndarray:
        return np.arange(self.steps + 1) * self.h

    def halved(self) -> "ShootingGrid":
        return ShootingGrid(self.r_max, self.h / 2, self.r_match)


class _Problem:
    """Cached radial grid and effective potential for one (pot, l, grid)."""

    def __init__(self, pot, l: int, grid: ShootingGrid):
        self.grid = grid
        self.l = l
        self.r = grid.radii()
        with np.errstate(divide="ignore", invalid="ignore"):
            cent = l * (l + 1) / self.r ** 2
        cent[0] = 0.0
        self.w = cent + pot.energy_scale * pot.potential(self.r)
        self.w0 = pot.energy_scale * float(pot.potential(0.0))
        if l == 0:
            self.w[0] = self.w0
        # first index where h**2 * l(l+1)/r**2 / 12 < 0.1 keeps Numerov stable
        self.i0 = max(1, int(np.ceil(np.sqrt(l * (l + 1) / 1.2))))

    def g(self, eps: float) -> np.ndarray:
        return self.w - eps

    def match_index(self, g: np.ndarray) -> int:
        n = len(g) - 1
        if self.grid.r_match is not None:
            m = int(round(self.grid.r_match / self.grid.h))
        else:
            allowed = np.nonzero(g[1:] < 0)[0]
            m = int(allowed[-1]) + 1 if len(allowed) else n // 2
        return min(max(m, 2), n - 3)

    def start(self, eps: float) -> tuple[float, float]:
        """Regular solution ``r**(l+1) (1 + a r**2)`` at indices ``i0 - 1`` and ``i0``."""
        a = (self.w0 - eps) / (4 * self.l + 6)
        r = self.r[self.i0 - 1:self.i0 + 1]
        ua, ub = r ** (self.l + 1) * (1 + a * r * r)
        return float(ua), float(ub)

    def sweep(self, eps: float) -> tuple[float, int, int]:
        """``(log-derivative mismatch, outward nodes below match, match index)``."""
        h = self.grid.h
        g = self.g(eps)
        m = max(self.match_index(g), self.i0 + 1)
        om, o0, op, nodes = kernels.numerov_outward(g, h, self.i0, *self.start(eps), m)
        # decaying start exp(-kappa r); only the ratio of the two seeds matters
        kappa = np.sqrt(max(g[-1], 1e-12))
        im, i0, ip, _ = kernels.numerov_inward(g, h, 1.0, np.exp(kappa * h), m)
        mismatch = (op - om) / (2 * h * o0) - (ip - im) / (2 * h * i0)
        return mismatch, nodes, m

    def count_below(self, eps: float) -> int:
        """Nodes of the regular solution on the whole grid: levels below ``eps`` in the box."""
        g = self.g(eps)
        n = len(g) - 2
        return kernels.numerov_outward(g, self.grid.h, self.i0, *self.start(eps), n)[3]


def numerov_sweep(energy: float, l: int, pot, grid: ShootingGrid = ShootingGrid()) -> tuple[float, int]:
    """Log-derivative mismatch at the matching radius and outward node count.

    ``energy`` is in physical units; the mismatch vanishes at eigenvalues.
    """
    if isinstance(l, bool) or int(l) != l or l < 0:
        raise ContractError(f"l must be a non-negative integer, got {l}")
    mismatch, nodes, _ = _Problem(pot, int(l), grid).sweep(energy * pot.energy_scale)
    return mismatch, nodes


def shoot_level(pot, n: int, l: int, window: tuple[float, float],
                grid: ShootingGrid = ShootingGrid(), tol: float = 1e-9) -> float:
    """Reduced energy of the ``n``-th level with angular momentum ``l`` inside ``window``.

    Node counting isolates the level, then the mismatch is bisected.  If the
    mismatch shows no sign change inside the node bracket, node counting is
    carried on to ``tol`` instead.
    """
    prob = _Problem(pot, l, grid)
    lo, hi = window
    if prob.count_below(hi) <= n:
        raise UnboundError(f"no level with {n} nodes below {hi} for l={l}")
    if prob.count_below(lo) > n:
        raise UnboundError(f"level {n} for l={l} lies below the window {window}")
    # count(lo) <= n < count(hi)
    while hi - lo > 1e-4 * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if prob.count_below(mid) > n:
            hi = mid
        else:
            lo = mid
    a, b = lo, hi
    fa = prob.sweep(a)[0]
    fb = prob.sweep(b)[0]
    if np.sign(fa) == np.sign(fb):
        # no clean crossing (matching point in a forbidden region puts a pole
        # next to the root): the node count of the boxed problem still pins it
        while b - a > tol:
            mid = 0.5 * (a + b)
            if prob.count_below(mid) > n:
                b = mid
            else:
                a = mid
        return 0.5 * (a + b)
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = prob.sweep(mid)[0]
        if np.sign(fm) == np.sign(fa):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def shoot_eigenvalue(nq: QuantumNumbers, pot: PotentialModel = PotentialModel(),
                     grid: ShootingGrid = ShootingGrid()) -> SpectrumEntry:
    """Binding energy of ``(n, l)`` in the Gaussian well; raises UnboundError."""
    depth = pot.depth * pot.energy_scale
    eps = shoot_level(pot, nq.n, nq.l, (-depth + 1e-9, -1e-9), grid)
    return SpectrumEntry(nq.n, nq.l, Method.NUMEROV, -eps / pot.energy_scale,
                         diagnostics={"epsilon": eps, "h": grid.h, "r_max": grid.r_max})

"""Radial grids, field containers, and weighted norms.

Everything in this package lives on the exterior of the unit ball,
restricted to radial functions.  A function f(r) on r >= 1 is sampled
on a uniform mesh in the shifted variable rho = r - 1, truncated at
rho = L.  Both endpoints carry homogeneous Dirichlet values: the inner
one is the physical boundary condition at r = 1, the outer one is the
domain-truncation decision.  Because the wave speed is one, truncation
is exact (not approximate) whenever the data support, the time horizon
and a unit margin fit inside L; solvers enforce that inequality.

All integral norms use the radial measure r^2 dr without the angular
4*pi factor, so the L^2 norm here matches the spectral (Parseval) side
of the transform module exactly.  Containers are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class TruncationError(ValueError):
    """Data support plus horizon does not fit inside the truncated domain."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class RadialGrid:
    """Uniform mesh of [1, 1+L] with n subintervals (n a power of two).

    Interior nodes r_j = 1 + j*drho, j = 1..n-1, carry field values;
    the dual frequencies are lambda_k = k*pi/L, k = 1..n-1.
    """

    L: float
    n: int

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and self.n >= 8 and (self.n & (self.n - 1)) == 0):
            raise ValueError(f"n must be a power of two >= 8, got {self.n}")
        if not (math.isfinite(self.L) and self.L > 0):
            raise ValueError(f"L must be positive and finite, got {self.L}")

    @property
    def drho(self) -> float:
        return self.L / self.n

    @property
    def rho(self) -> np.ndarray:
        """Interior offsets rho_j = j*drho, j = 1..n-1."""
        return self.drho * np.arange(1, self.n)

    @property
    def r(self) -> np.ndarray:
        """Interior radii r_j = 1 + rho_j."""
        return 1.0 + self.rho

    @property
    def lambdas(self) -> np.ndarray:
        """Grid frequencies lambda_k = k*pi/L, k = 1..n-1 (all positive)."""
        return (math.pi / self.L) * np.arange(1, self.n)

    @property
    def lambda_max(self) -> float:
        """Largest representable frequency scale pi*n/L (= pi/drho)."""
        return math.pi * self.n / self.L


def make_grid(L: float, n: int) -> RadialGrid:
    """Build a RadialGrid; rejects nonpositive L and non-power-of-two n."""
    return RadialGrid(float(L), int(n))


@dataclass(frozen=True)
class RadialField:
    """Real samples f_j at the interior nodes of a grid.

    The two boundary values are implicitly zero and never stored, so the
    Dirichlet condition holds by representation.
    """

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n - 1,):
            raise ValueError(
                f"values must have length n-1 = {self.grid.n - 1}, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", _frozen(vals))


def zeros(grid: RadialGrid) -> RadialField:
    return RadialField(grid, np.zeros(grid.n - 1))


def from_function(grid: RadialGrid, fn) -> RadialField:
    """Sample a callable f(r) (vectorized over the radius array)."""
    return RadialField(grid, np.asarray(fn(grid.r), dtype=float))


@dataclass(frozen=True)
class ComplexRadialField:
    """Real/imaginary part pair on one grid (the half-wave image is complex)."""

    re: RadialField
    im: RadialField

    def __post_init__(self) -> None:
        if self.re.grid != self.im.grid:
            raise ValueError("re and im must share one grid")

    @property
    def grid(self) -> RadialGrid:
        return self.re.grid

    @property
    def modulus(self) -> RadialField:
        return RadialField(self.grid, np.hypot(self.re.values, self.im.values))


@dataclass(frozen=True)
class SpectralField:
    """Transform coefficients F_k at frequencies lambda_k = k*pi/L, k = 1..n-1."""

    grid: RadialGrid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.grid.n - 1,):
            raise ValueError(
                f"coeffs must have length n-1 = {self.grid.n - 1}, got shape {c.shape}"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", _frozen(c))


@dataclass(frozen=True)
class WaveState:
    """Snapshot (u, du/dt) at time t."""

    t: float
    u: RadialField
    ut: RadialField

    def __post_init__(self) -> None:
        if self.u.grid != self.ut.grid:
            raise ValueError("u and ut must share one grid")

    @property
    def grid(self) -> RadialGrid:
        return self.u.grid


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered WaveState snapshots on one grid.

    dt_sample records the nominal snapshot spacing (the final snapshot
    may sit closer when the horizon is not a multiple of the stride);
    when omitted it is derived from the first gap.
    """

    states: tuple
    dt_sample: float | None = None

    def __post_init__(self) -> None:
        states = tuple(self.states)
        if not states:
            raise ValueError("trajectory must contain at least one state")
        g = states[0].grid
        times = [st.t for st in states]
        if any(st.grid != g for st in states):
            raise ValueError("all states must share one grid")
        if any(t1 <= t0 for t0, t1 in zip(times, times[1:])):
            raise ValueError("snapshot times must be strictly increasing")
        object.__setattr__(self, "states", states)
        if self.dt_sample is None:
            derived = times[1] - times[0] if len(times) > 1 else 0.0
            object.__setattr__(self, "dt_sample", derived)

    @property
    def grid(self) -> RadialGrid:
        return self.states[0].grid

    @property
    def times(self) -> np.ndarray:
        return np.array([st.t for st in self.states])

    @property
    def final(self) -> WaveState:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)


def lq_norm(f: RadialField, q: float) -> float:
    """L^q norm with measure r^2 dr (trapezoid quadrature, zero endpoints).

    q = inf returns the grid maximum of |f| (no interpolation between
    nodes); finite q >= 1 returns (sum_j |f_j|^q r_j^2 drho)^(1/q).
    """
    if not q >= 1:
        raise ValueError(f"q must be >= 1 or inf, got {q}")
    a = np.abs(f.values)
    if math.isinf(q):
        return float(a.max(initial=0.0))
    w = f.grid.r ** 2 * f.grid.drho
    # Endpoint trapezoid weights are omitted: both boundary values are zero.
    if q == 2.0:
        return float(math.sqrt(np.dot(a * a, w)))
    return float(np.dot(a ** q, w) ** (1.0 / q))


def support_radius(*fields: RadialField, rtol: float = 1e-8) -> float:
    """Largest rho beyond which every given field is below rtol * its max.

    Returns 0.0 for identically zero data.  Used by the truncation-safety
    check rho_supp + T + 1 <= L.
    """
    if not fields:
        raise ValueError("need at least one field")
    rho = fields[0].grid.rho
    supp = 0.0
    for f in fields:
        a = np.abs(f.values)
        peak = a.max(initial=0.0)
        if peak == 0.0:
            continue
        idx = np.nonzero(a > rtol * peak)[0]
        if idx.size:
            supp = max(supp, float(rho[idx[-1]]))
    return supp


def check_truncation_safety(T: float, *fields: RadialField, rtol: float = 1e-8) -> float:
    """Enforce rho_supp + T + 1 <= L; returns rho_supp or raises TruncationError."""
    supp = support_radius(*fields, rtol=rtol)
    L = fields[0].grid.L
    if supp + T + 1.0 > L:
        raise TruncationError(
            f"data support rho={supp:.3g} plus horizon T={T:.3g} plus unit margin "
            f"exceeds L={L:.3g}; waves would reach the artificial boundary"
        )
    return supp

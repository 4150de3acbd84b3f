"""Reference initial data: bumps, kinks, and frequency-localized sources.

All profiles are functions of the boundary distance rho = r - 1 and come
back as fields on a given grid.  Everything is compactly supported (or
cut off by an explicit plateau window) so the truncation-safety check
rho_supp + T + 1 <= L stays honest for the horizons used in experiments.
"""

from __future__ import annotations

import math

import numpy as np

from .calculus import CUTOFF, is_dyadic
from .core import RadialField, RadialGrid, SpectralField
from .transform import inverse


def plateau(grid: RadialGrid, flat_until: float, zero_after: float) -> np.ndarray:
    """Smooth window: 1 for rho <= flat_until, 0 for rho >= zero_after."""
    if not 0.0 < flat_until < zero_after:
        raise ValueError("need 0 < flat_until < zero_after")
    x = 1.0 + (grid.rho - flat_until) / (zero_after - flat_until)
    return CUTOFF(x)


def gaussian_bump(
    grid: RadialGrid, center: float = 5.0, width: float = 1.0, amplitude: float = 1.0
) -> RadialField:
    """amplitude * exp(-((rho - center)/width)^2), sampled on the grid.

    Keep center a few widths away from rho = 0 so the implicit Dirichlet
    value is already negligible in the sampled profile.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    u = amplitude * np.exp(-(((grid.rho - center) / width) ** 2))
    return RadialField(grid, u)


def smooth_bump(grid: RadialGrid, a: float, b: float, amplitude: float = 1.0) -> RadialField:
    """C^inf bump in rho, positive on (a, b), identically zero outside, peak = amplitude."""
    if not 0.0 <= a < b:
        raise ValueError("need 0 <= a < b")
    rho = grid.rho
    u = np.zeros_like(rho)
    inside = (rho > a) & (rho < b)
    x = (rho[inside] - a) / (b - a)
    u[inside] = amplitude * np.exp(4.0 - 1.0 / (x * (1.0 - x)))
    return RadialField(grid, u)


def kink_profile(
    grid: RadialGrid,
    center: float = 2.0,
    alpha: float = 0.375,
    a: float = 0.5,
    b: float = 3.5,
    amplitude: float = 1.0,
) -> RadialField:
    """Bump times |rho - center|^alpha: limited regularity at one interior point.

    The factor |rho - center|^alpha caps the profile's smoothness so its
    spectral coefficients decay like lam^(-alpha - 1), pinning the Sobolev
    regularity at s = alpha + 1/2 exactly.
    """
    if not a < center < b:
        raise ValueError("kink center must sit inside the bump support")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    bump = smooth_bump(grid, a, b, amplitude).values
    return RadialField(grid, bump * np.abs(grid.rho - center) ** alpha)


def block_source(
    grid: RadialGrid,
    N: float,
    rho0: float = 1.0,
    amplitude: float | None = None,
    window: tuple[float, float] | None = None,
) -> RadialField:
    """Frequency-block point source: the block projection of a mass at rho0.

    Spectrally F(lam) = amplitude * sqrt(2/pi) * r0 * sin(lam rho0) * psi_N(lam),
    which is the dyadic block at N of a unit point mass at r0 = 1 + rho0.
    The default amplitude N keeps the physical peak height comparable
    across blocks while the evolution constant scales like N^2.  A smooth
    plateau window (default flat to 0.3 L, zero from 0.45 L) clips the
    rapidly decaying far tail so the support is compact by construction.
    """
    if not is_dyadic(N):
        raise ValueError(f"N must be dyadic, got {N}")
    if not 0.0 < rho0:
        raise ValueError("rho0 must be positive")
    if amplitude is None:
        amplitude = float(N)
    lam = grid.lambdas
    r0 = 1.0 + rho0
    coeffs = amplitude * math.sqrt(2.0 / math.pi) * r0 * np.sin(lam * rho0)
    coeffs *= CUTOFF.psi(lam, N)
    f = inverse(SpectralField(grid, coeffs))
    if window is None:
        window = (0.3 * grid.L, 0.45 * grid.L)
    return RadialField(grid, f.values * plateau(grid, *window))

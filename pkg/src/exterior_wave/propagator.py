"""Linear evolution: half-wave group, wave propagator, Duhamel, kernels, probes.

Everything linear here is exact on the grid: the generator is diagonal in
the distorted basis, so U(t) = e^{it sqrt(-Lap)} is a pure phase rotation
of the spectral coefficients and conserves the discrete L^2 norm to
rounding.  The only approximate objects are the time quadrature in
`duhamel` and the oscillatory frequency quadratures behind the two kernel
evaluators.

Kernel quadrature: the integrands oscillate like exp(i lam (r+s+t)), so we
tile the support with Gauss-Legendre panels of width pi/(2 max(r,s,|t|,1))
(a few radians of phase per panel, well inside 16-point accuracy) and
double the panel count until two successive values agree to the requested
relative tolerance.

The probes (`dispersive_probe`, `strichartz_norm`, `endpoint_ratio`)
measure decay and space-time bounds of the half-wave flow; they assume the
horizon is truncation-safe so the artificial boundary at rho = L stays
causally invisible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import CUTOFF, is_dyadic, sobolev_norm
from .core import (
    ComplexRadialField,
    RadialField,
    SpectralField,
    Trajectory,
    WaveState,
    check_truncation_safety,
    lq_norm,
    zeros,
)
from .transform import forward, inverse


@dataclass(frozen=True)
class AdmissibleExponents:
    """A validated pair of space-time exponent triples for the wave flow.

    (q_i, r_i) are time/space Lebesgue exponents, rho_i the Besov
    regularities, mu the data regularity.  Each pair must satisfy either
    the general admissibility 0 <= 1/q + 1/r <= 1/2 with r finite, or the
    radial endpoint window q = 2, r > 4 (finite).  Both scaling relations

        rho1 + 3(1/2 - 1/r1) - 1/q1 = mu
        rho2 + 3(1/2 - 1/r2) - 1/q2 = 1 - mu

    are enforced to 1e-12.
    """

    q1: float
    r1: float
    q2: float
    r2: float
    rho1: float
    rho2: float
    mu: float

    def __post_init__(self) -> None:
        for q, r, tag in ((self.q1, self.r1, "1"), (self.q2, self.r2, "2")):
            if math.isinf(r):
                raise ValueError(f"r{tag} must be finite")
            if not (q >= 1 and r >= 1):
                raise ValueError(f"exponent pair {tag} must have q, r >= 1")
            inv_q = 0.0 if math.isinf(q) else 1.0 / q
            general = 0.0 <= inv_q + 1.0 / r <= 0.5 + 1e-12
            radial_endpoint = q == 2.0 and r > 4.0
            if not (general or radial_endpoint):
                raise ValueError(
                    f"pair {tag}: (q, r) = ({q}, {r}) is not admissible: "
                    "needs 1/q + 1/r <= 1/2, or q = 2 with r > 4"
                )
        inv = lambda x: 0.0 if math.isinf(x) else 1.0 / x
        gap1 = self.rho1 + 3.0 * (0.5 - inv(self.r1)) - inv(self.q1) - self.mu
        gap2 = self.rho2 + 3.0 * (0.5 - inv(self.r2)) - inv(self.q2) - (1.0 - self.mu)
        if abs(gap1) > 1e-12 or abs(gap2) > 1e-12:
            raise ValueError(
                f"scaling relations violated: gaps ({gap1:.3e}, {gap2:.3e})"
            )


@dataclass(frozen=True)
class DecayFit:
    """Power-law fit |measurement(t)| ~ constant * t^exponent on log-log axes.

    residual is the max relative deviation of the fit from the samples.
    """

    exponent: float
    constant: float
    residual: float

    def __post_init__(self) -> None:
        if not self.residual >= 0.0:
            raise ValueError("residual must be >= 0")


def half_wave(f: RadialField, t: float) -> ComplexRadialField:
    """e^{it sqrt(-Lap)} f: phase rotation e^{i t lambda} of each coefficient."""
    lam = f.grid.lambdas
    c = forward(f).coeffs
    re = inverse(SpectralField(f.grid, np.cos(t * lam) * c))
    im = inverse(SpectralField(f.grid, np.sin(t * lam) * c))
    return ComplexRadialField(re, im)


def wave_propagate(u0: RadialField, u1: RadialField, t: float) -> WaveState:
    """Exact free evolution of (u, u_t) from data (u0, u1) to time t.

    Mode-wise: u_k(t) = cos(t lam) u0_k + sin(t lam)/lam u1_k and
    du_k(t) = -lam sin(t lam) u0_k + cos(t lam) u1_k.
    """
    if u1.grid is not u0.grid and u1.grid != u0.grid:
        raise ValueError("u0 and u1 must share a grid")
    lam = u0.grid.lambdas
    c0 = forward(u0).coeffs
    c1 = forward(u1).coeffs
    cos_t = np.cos(t * lam)
    sin_t = np.sin(t * lam)
    u = inverse(SpectralField(u0.grid, cos_t * c0 + sin_t / lam * c1))
    ut = inverse(SpectralField(u0.grid, -lam * sin_t * c0 + cos_t * c1))
    return WaveState(t, u, ut)


def _simpson_nodes(t: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Simpson nodes/weights on [0, t] for a step dt that divides t.

    Even interval counts use the composite rule; odd counts >= 3 finish
    with a 3/8 tail; a single interval is handled with its midpoint.
    """
    m_real = t / dt
    m = int(round(m_real))
    if abs(m_real - m) > 1e-9 * max(1.0, m_real):
        raise ValueError(f"dt = {dt} does not divide t = {t}")
    if m == 1:
        return np.array([0.0, 0.5 * dt, dt]), dt / 6.0 * np.array([1.0, 4.0, 1.0])
    nodes = dt * np.arange(m + 1)
    w = np.zeros(m + 1)
    if m % 2 == 0:
        head = m
    else:
        head = m - 3
        w[head : m + 1] += 3.0 * dt / 8.0 * np.array([1.0, 3.0, 3.0, 1.0])
    if head > 0:
        cw = np.full(head + 1, 2.0)
        cw[1::2] = 4.0
        cw[0] = cw[head] = 1.0
        w[: head + 1] += dt / 3.0 * cw
    return nodes, w


def duhamel(F, t: float, dt: float) -> RadialField:
    """Quadrature of int_0^t sin((t-s) sqrt(-Lap))/sqrt(-Lap) F(s) ds.

    F maps a time to a RadialField on a fixed grid; dt must divide t.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    f0 = F(0.0)
    grid = f0.grid
    if t == 0.0:
        return zeros(grid)
    nodes, weights = _simpson_nodes(t, dt)
    lam = grid.lambdas
    acc = weights[0] * np.sin((t - nodes[0]) * lam) * forward(f0).coeffs
    for s_i, w_i in zip(nodes[1:], weights[1:]):
        fs = F(float(s_i))
        if fs.grid != grid:
            raise ValueError("source fields must share one grid")
        acc += w_i * np.sin((t - s_i) * lam) * forward(fs).coeffs
    return inverse(SpectralField(grid, acc / lam))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _oscillatory_quad(fn, a: float, b: float, freq: float, rtol: float) -> complex:
    """Panel Gauss-Legendre with panel doubling until successive agreement."""
    width = math.pi / (2.0 * max(freq, 1.0))
    m = max(1, math.ceil((b - a) / width))
    prev = None
    for _ in range(13):
        edges = np.linspace(a, b, m + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (b - a) / m
        lam = (mid[:, None] + half * _GL_NODES[None, :]).ravel()
        w = np.broadcast_to(half * _GL_WEIGHTS, (m, 16)).ravel()
        val = complex(np.dot(w, fn(lam)))
        if prev is not None and abs(val - prev) <= rtol * abs(val):
            return val
        prev = val
        m *= 2
    raise RuntimeError(
        f"oscillatory quadrature did not reach rtol = {rtol} on [{a}, {b}]"
    )


def kernel_KN(N: float, t: float, r: float, s: float, rtol: float = 1e-8) -> complex:
    """Evolution kernel of the fattened dyadic block at N, evaluated pointwise.

    K_N(t, r; s) = (2/pi) int e_lam(r) e_lam(s) e^{i lam t} psi~_N(lam) dlam
    with e_lam(r) = sin(lam (r-1))/r, integrated over supp psi~_N = [N/4, 4N].
    """
    if not (r >= 1.0 and s >= 1.0):
        raise ValueError("radii must be >= 1")
    if not is_dyadic(N):
        raise ValueError(f"N must be dyadic, got {N}")

    def fn(lam: np.ndarray) -> np.ndarray:
        osc = np.exp(1j * t * lam)
        return (
            (2.0 / math.pi)
            * (np.sin(lam * (r - 1.0)) / r)
            * (np.sin(lam * (s - 1.0)) / s)
            * osc
            * CUTOFF.psi_tilde(lam, N)
        )

    return _oscillatory_quad(fn, N / 4.0, 4.0 * N, max(r, s, abs(t), 1.0), rtol)


def wholespace_kernel(t: float, r: float, s: float, rtol: float = 1e-8) -> complex:
    """Unit-frequency half-wave kernel of the radial free flow on R^3.

    (2/pi) int (sin(lam s)/s)(sin(lam r)/r) e^{i t lam} psi~_1(lam) dlam over
    [1/4, 4]; r and s are (scaled) radii measured from the origin.
    """
    if not (r > 0.0 and s > 0.0):
        raise ValueError("radii must be > 0")

    def fn(lam: np.ndarray) -> np.ndarray:
        return (
            (2.0 / math.pi)
            * (np.sin(lam * s) / s)
            * (np.sin(lam * r) / r)
            * np.exp(1j * t * lam)
            * CUTOFF.psi_tilde(lam, 1.0)
        )

    return _oscillatory_quad(fn, 0.25, 4.0, max(r, s, abs(t), 1.0), rtol)


def dispersive_probe(N: float, f: RadialField, t_samples) -> DecayFit:
    """Fit the sup-norm decay of the half-wave flow of a single-block datum.

    Least squares of log ||U(t) f||_inf against log t over t_samples,
    which must hold at least 4 times in [1, T] with T truncation-safe.
    """
    ts = np.array(sorted(float(t) for t in t_samples))
    if ts.size < 4:
        raise ValueError("need at least 4 time samples for a stable fit")
    if ts[0] < 1.0:
        raise ValueError("decay fit is meaningful only for t >= 1")
    if not is_dyadic(N):
        raise ValueError(f"N must be dyadic, got {N}")
    check_truncation_safety(float(ts[-1]), f)
    amps = np.array([lq_norm(half_wave(f, t).modulus, math.inf) for t in ts])
    if np.any(amps == 0.0):
        raise ValueError("degenerate fit: flow has zero sup-norm at a sample")
    x = np.log(ts)
    y = np.log(amps)
    slope, intercept = np.polyfit(x, y, 1)
    fit = np.exp(intercept + slope * x)
    residual = float(np.abs(fit / amps - 1.0).max())
    return DecayFit(exponent=float(slope), constant=float(math.exp(intercept)), residual=residual)


def strichartz_norm(traj: Trajectory, q: float, r: float) -> float:
    """Mixed norm || ||u(t)||_{L^r} ||_{L^q_t} over the sampled trajectory.

    Trapezoid in time for finite q; sup over samples for q = inf.
    """
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    if not (q >= 1 and r >= 1):
        raise ValueError("q and r must be >= 1 or inf")
    vals = np.array([lq_norm(state.u, r) for state in traj])
    if math.isinf(q):
        return float(vals.max())
    return float(np.trapezoid(vals ** q, traj.times) ** (1.0 / q))


def modulus_trajectory(f: RadialField, T: float, dt_sample: float) -> Trajectory:
    """Sampled |U(t)f| over [0, T]: the space-time profile of the linear flow."""
    check_truncation_safety(T, f)
    steps = max(1, int(round(T / dt_sample)))
    times = np.linspace(0.0, T, steps + 1)
    zero = zeros(f.grid)
    return Trajectory(
        tuple(WaveState(float(t), half_wave(f, float(t)).modulus, zero) for t in times),
        dt_sample=T / steps,
    )


def endpoint_ratio(f: RadialField, q: float, T: float, dt_sample: float = 0.25) -> float:
    """|| U(.)f ||_{L^2_t L^q_x [0,T]} divided by the H^{1-3/q} norm of f.

    The space exponent must satisfy q > 4; boundedness of this ratio as T
    grows is the endpoint estimate signature.
    """
    if not q > 4:
        raise ValueError("space exponent must satisfy q > 4")
    denom = sobolev_norm(f, 1.0 - 3.0 / q)
    if denom == 0.0:
        raise ValueError("ratio undefined for zero data")
    return strichartz_norm(modulus_trajectory(f, T, dt_sample), 2.0, q) / denom

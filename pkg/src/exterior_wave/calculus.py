"""Littlewood-Paley calculus: smooth dyadic cutoffs, projections, Besov/Sobolev norms.

The mother cutoff is the standard smooth step built from chi(x) = exp(-1/x):

    phi(lam) = chi(2 - lam) / (chi(2 - lam) + chi(lam - 1)),

identically 1 on [0, 1], identically 0 on [2, inf), C^inf and
nonincreasing in between.  Dyadic rescalings give the projection symbols

    phi_N(lam)     = phi(lam/N)          (P_{<=N})
    psi_N          = phi_N - phi_{N/2}   (P_N, supported in [N/2, 2N])
    psi~_N         = psi_{N/2} + psi_N + psi_{2N}   (fattened block, = 1 on supp psi_N)

and P_{>N} = 1 - phi_N, so P_{<=N} + P_{>N} is exactly the identity.

A block at N is *resolvable* on a grid when its support [N/2, 2N] sits
inside the window [2*lambda_1, lambda_max/2]: at least one octave away
from both the smallest representable frequency and the grid cutoff.
Projections outside the window are rejected rather than silently
truncated; Besov sums run over the resolvable dyadic range only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import RadialField, RadialGrid, lq_norm
from .transform import apply_symbol, forward

_VALID_KINDS = ("leq", "at", "tilde", "gt")


class SmoothCutoff:
    """Evaluation rule for phi and its dyadic rescalings (all vectorized)."""

    @staticmethod
    def _chi(x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x)
        pos = x > 0
        with np.errstate(over="ignore", under="ignore", divide="ignore"):
            out[pos] = np.exp(-1.0 / x[pos])
        return out

    def __call__(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        scalar = lam.ndim == 0
        lam = np.atleast_1d(lam)
        out = np.empty_like(lam)
        out[lam <= 1.0] = 1.0
        out[lam >= 2.0] = 0.0
        mid = (lam > 1.0) & (lam < 2.0)
        if np.any(mid):
            a = self._chi(2.0 - lam[mid])
            b = self._chi(lam[mid] - 1.0)
            out[mid] = a / (a + b)
        return float(out[0]) if scalar else out

    def phi(self, lam, N: float) -> np.ndarray:
        return self(np.asarray(lam, dtype=float) / N)

    def psi(self, lam, N: float) -> np.ndarray:
        return self.phi(lam, N) - self.phi(lam, N / 2.0)

    def psi_tilde(self, lam, N: float) -> np.ndarray:
        return self.psi(lam, N / 2.0) + self.psi(lam, N) + self.psi(lam, 2.0 * N)


CUTOFF = SmoothCutoff()


def is_dyadic(N: float) -> bool:
    """True when N = 2^k for integer k (fractional k < 0 allowed)."""
    if not (math.isfinite(N) and N > 0):
        return False
    mantissa, _ = math.frexp(N)
    return mantissa == 0.5


def resolvable_window(grid: RadialGrid) -> tuple[float, float]:
    """(lower, upper) frequency window [2*lambda_1, lambda_max/2]."""
    return 2.0 * math.pi / grid.L, grid.lambda_max / 2.0


def resolvable_blocks(grid: RadialGrid) -> list[float]:
    """Dyadic N whose block support [N/2, 2N] fits the resolvable window."""
    lo, hi = resolvable_window(grid)
    kmin = math.ceil(math.log2(2.0 * lo) - 1e-9)
    kmax = math.floor(math.log2(hi / 2.0) + 1e-9)
    return [2.0 ** k for k in range(kmin, kmax + 1)]


def is_resolvable(grid: RadialGrid, N: float, kind: str = "at") -> bool:
    if not is_dyadic(N):
        return False
    lo, hi = resolvable_window(grid)
    if kind in ("at", "tilde"):
        return N / 2.0 >= lo * (1 - 1e-12) and 2.0 * N <= hi * (1 + 1e-12)
    # leq/gt only need the transition frequency itself inside the window
    return lo * (1 - 1e-12) <= N <= hi * (1 + 1e-12)


@dataclass(frozen=True)
class DyadicBlock:
    """A dyadic frequency N = 2^k with a projection kind.

    kind: "leq" -> phi_N, "at" -> psi_N, "tilde" -> psi~_N, "gt" -> 1 - phi_N.
    """

    N: float
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in _VALID_KINDS:
            raise ValueError(f"kind must be one of {_VALID_KINDS}, got {self.kind!r}")
        if not is_dyadic(self.N):
            raise ValueError(f"N must be a dyadic 2^k, got {self.N}")

    def symbol(self, lam) -> np.ndarray:
        if self.kind == "leq":
            return CUTOFF.phi(lam, self.N)
        if self.kind == "at":
            return CUTOFF.psi(lam, self.N)
        if self.kind == "tilde":
            return CUTOFF.psi_tilde(lam, self.N)
        return 1.0 - CUTOFF.phi(lam, self.N)


def lp_project(f: RadialField, block: DyadicBlock) -> RadialField:
    """Apply the block's spectral symbol; rejects unresolvable blocks."""
    if not is_resolvable(f.grid, block.N, block.kind):
        lo, hi = resolvable_window(f.grid)
        raise ValueError(
            f"block {block.kind}@{block.N} not resolvable on grid "
            f"(window [{lo:.4g}, {hi:.4g}])"
        )
    return apply_symbol(f, lambda lam: block.symbol(lam))


def project_leq(f: RadialField, N: float) -> RadialField:
    return lp_project(f, DyadicBlock(N, "leq"))


def project_at(f: RadialField, N: float) -> RadialField:
    return lp_project(f, DyadicBlock(N, "at"))


def sobolev_norm(f: RadialField, s: float) -> float:
    """Homogeneous Sobolev norm ((pi/L) sum_k lambda_k^(2s) F_k^2)^(1/2).

    |s| <= 2 guards against amplifying unresolved high frequencies.
    """
    if not abs(s) <= 2.0:
        raise ValueError(f"|s| must be <= 2, got {s}")
    lam = f.grid.lambdas
    c = forward(f).coeffs
    if s == 0.0:
        weighted = np.dot(c, c)
    else:
        weighted = np.dot(lam ** (2.0 * s), c * c)
    return float(math.sqrt(math.pi / f.grid.L * weighted))


def besov_norm(f: RadialField, s: float, q: float, r_idx: float) -> float:
    """Homogeneous Besov norm over the grid-resolvable dyadic blocks.

    (sum_N N^(s*r_idx) ||P_N f||_q^r_idx)^(1/r_idx), sup over N when
    r_idx = inf.  The dyadic range is the resolvable window; tails
    outside it are unrepresentable and dropped.
    """
    if not (q >= 1 and r_idx >= 1):
        raise ValueError("q and r_idx must be >= 1 or inf")
    if not abs(s) <= 2.0:
        raise ValueError(f"|s| must be <= 2, got {s}")
    terms = []
    for N in resolvable_blocks(f.grid):
        terms.append(N ** s * lq_norm(project_at(f, N), q))
    arr = np.array(terms)
    if math.isinf(r_idx):
        return float(arr.max(initial=0.0))
    return float((arr ** r_idx).sum() ** (1.0 / r_idx))


def bernstein_ratio(f: RadialField, N: float, p: float, q: float) -> float:
    """||P_N f||_q / (N^(3(1/p-1/q)) ||f||_p): the Bernstein constant probe."""
    if not (1 <= p <= q):
        raise ValueError("need 1 <= p <= q")
    denom = lq_norm(f, p)
    if denom == 0.0:
        raise ValueError("Bernstein ratio undefined for the zero field")
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    inv_q = 0.0 if math.isinf(q) else 1.0 / q
    scale = N ** (3.0 * (inv_p - inv_q))
    return lq_norm(project_at(f, N), q) / (scale * denom)


def square_function_ratio(f: RadialField, s: float, p: float) -> float:
    """|| (sum_N N^2s |P_N f|^2)^(1/2) ||_p  /  || (-Lap)^(s/2) f ||_p.

    Bounded-ratio diagnostic for the square-function equivalence; the
    denominator goes through the spectral symbol lambda^s.
    """
    if not (1 < p < math.inf):
        raise ValueError("need 1 < p < inf")
    denom_field = apply_symbol(f, lambda lam: lam ** s) if s != 0.0 else f
    denom = lq_norm(denom_field, p)
    if denom == 0.0:
        raise ValueError("square-function ratio undefined for the zero field")
    acc = np.zeros(f.grid.n - 1)
    for N in resolvable_blocks(f.grid):
        piece = project_at(f, N).values
        acc += N ** (2.0 * s) * piece * piece
    sq = RadialField(f.grid, np.sqrt(acc))
    return lq_norm(sq, p) / denom

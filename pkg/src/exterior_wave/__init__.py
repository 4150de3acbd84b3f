"""Radial waves on the exterior of the unit ball with a Dirichlet wall.

Layers, bottom up: grids and fields (`core`), the exact distorted
sine-transform pair (`transform`), dyadic frequency calculus
(`calculus`), linear propagators with kernels and decay probes
(`propagator`), reference data (`profiles`), the cubic defocusing
solver (`nlw`), the frequency-splitting experiment (`ftm`), and the
CSV/figure-emitting runner (`cli`).
"""

from .core import (
    ComplexRadialField,
    RadialField,
    RadialGrid,
    SpectralField,
    Trajectory,
    TruncationError,
    WaveState,
    check_truncation_safety,
    from_function,
    lq_norm,
    make_grid,
    support_radius,
    zeros,
)
from .transform import apply_symbol, forward, inverse, parseval_residual, spectral_l2
from .calculus import (
    CUTOFF,
    DyadicBlock,
    SmoothCutoff,
    bernstein_ratio,
    besov_norm,
    is_dyadic,
    is_resolvable,
    lp_project,
    project_at,
    project_leq,
    resolvable_blocks,
    resolvable_window,
    sobolev_norm,
    square_function_ratio,
)
from .propagator import (
    AdmissibleExponents,
    DecayFit,
    dispersive_probe,
    duhamel,
    endpoint_ratio,
    half_wave,
    kernel_KN,
    modulus_trajectory,
    strichartz_norm,
    wave_propagate,
    wholespace_kernel,
)
from .profiles import block_source, gaussian_bump, kink_profile, plateau, smooth_bump
from .nlw import SolverConfig, energy, solve, step
from .ftm import (
    FtmConfig,
    FtmReport,
    WNorms,
    auto_horizon,
    energy_growth_report,
    hs_growth_exponent,
    hs_growth_report,
    run_ftm,
    smallness,
    solve_v,
    solve_w,
    split_data,
    w_norms_from_trajectory,
)

__version__ = "0.1.0"

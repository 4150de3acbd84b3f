"""Grid and container invariants plus the weighted-norm oracles."""

import math

import numpy as np
import pytest

from exterior_wave import (
    ComplexRadialField,
    RadialField,
    RadialGrid,
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


def test_grid_nodes(grid):
    assert grid.drho == pytest.approx(16.0 / 512)
    assert grid.rho[0] == pytest.approx(grid.drho)
    assert grid.rho[-1] == pytest.approx(16.0 - grid.drho)
    assert grid.r.shape == (511,)
    assert grid.lambdas[0] == pytest.approx(math.pi / 16.0)
    assert grid.lambda_max == pytest.approx(math.pi * 512 / 16.0)


@pytest.mark.parametrize("L,n", [(0.0, 64), (-1.0, 64), (16.0, 60), (16.0, 4), (math.inf, 64)])
def test_grid_rejects_bad_parameters(L, n):
    with pytest.raises(ValueError):
        make_grid(L, n)


def test_field_shape_and_finiteness(grid):
    with pytest.raises(ValueError):
        RadialField(grid, np.zeros(grid.n))
    bad = np.zeros(grid.n - 1)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        RadialField(grid, bad)


def test_field_values_are_immutable(grid):
    f = zeros(grid)
    with pytest.raises(ValueError):
        f.values[0] = 1.0


def test_lq_norm_closed_form():
    """Oracle: int_1^inf ((r-1)e^{-(r-1)}/r)^2 r^2 dr = int_0^inf x^2 e^{-2x} dx = 1/4."""
    g = make_grid(64.0, 4096)
    f = from_function(g, lambda r: (r - 1.0) * np.exp(-(r - 1.0)) / r)
    assert lq_norm(f, 2.0) == pytest.approx(0.5, abs=1e-8)


def test_lq_norm_inf_is_grid_max(grid):
    f = from_function(grid, lambda r: np.exp(-((r - 3.0) ** 2)))
    assert lq_norm(f, math.inf) == np.abs(f.values).max()


def test_lq_norm_rejects_small_q(grid):
    with pytest.raises(ValueError):
        lq_norm(zeros(grid), 0.5)


def test_support_radius(grid):
    vals = np.zeros(grid.n - 1)
    vals[100] = 1.0
    f = RadialField(grid, vals)
    assert support_radius(f) == pytest.approx(grid.rho[100])
    assert support_radius(zeros(grid)) == 0.0


def test_truncation_safety(grid):
    vals = np.zeros(grid.n - 1)
    vals[100] = 1.0
    f = RadialField(grid, vals)
    supp = check_truncation_safety(2.0, f)
    assert supp == pytest.approx(grid.rho[100])
    with pytest.raises(TruncationError):
        check_truncation_safety(14.0, f)


def test_complex_field_modulus(grid):
    a = from_function(grid, lambda r: np.cos(r))
    b = from_function(grid, lambda r: np.sin(r))
    m = ComplexRadialField(a, b).modulus
    assert np.allclose(m.values, 1.0)


def test_trajectory_ordering_and_dt_sample(grid):
    f = zeros(grid)
    mk = lambda t: WaveState(t, f, f)
    traj = Trajectory((mk(0.0), mk(0.5), mk(1.0)))
    assert traj.dt_sample == pytest.approx(0.5)
    assert len(traj) == 3
    assert traj.final.t == 1.0
    with pytest.raises(ValueError):
        Trajectory((mk(0.0), mk(0.0)))
    with pytest.raises(ValueError):
        Trajectory(())

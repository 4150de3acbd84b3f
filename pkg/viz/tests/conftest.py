"""Fixture tables mirroring the run CSV schemas column for column."""

import pytest

from run_tables import DISPERSIVE_HEADER, SOLVE_HEADER, SWEEP_HEADER, write_csv


@pytest.fixture
def dispersive_csv(tmp_path):
    """Two blocks, four times, per-block fit repeated on each row."""
    rows = []
    for N, slope, const in ((1.0, -0.996, 0.61), (2.0, -1.051, 3.02)):
        for t in (1.0, 2.0, 4.0, 8.0):
            rows.append((N, t, const * t**slope, slope, const, 0.05))
    return write_csv(tmp_path / "dispersive.csv", DISPERSIVE_HEADER, rows)


@pytest.fixture
def solve_csv(tmp_path):
    rows = [
        (0.1 * k, 4.819, 0.0 if k == 0 else 2.9e-7, 1.33, 0.71, 0.98) for k in range(11)
    ]
    return write_csv(tmp_path / "solve.csv", SOLVE_HEADER, rows)


@pytest.fixture
def sweep_csv(tmp_path):
    """Three-J sweep with the measured slopes repeated on every row."""
    fits = (-0.327, 0.386, 0.030)
    rows = [
        (0.875, J, T, 2.0**-10, E, 0.9, 0.5, w26, 8.9, 3e-14, float("nan"), 9.4e-4, 8.1e-3,
         1.1, 0.4, 0.02, 1.3, hs, 0.5625, *fits)
        for J, T, E, w26, hs in (
            (4, 4.0, 8.038, 0.2083, 8.560),
            (5, 5.657, 10.517, 0.1687, 8.667),
            (6, 8.0, 13.730, 0.1323, 8.742),
        )
    ]
    return write_csv(tmp_path / "sweep.csv", SWEEP_HEADER, rows)

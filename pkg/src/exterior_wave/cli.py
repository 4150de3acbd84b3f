"""Experiment runner: JSON config in, CSV tables + manifest + figures out.

Subcommands map one-to-one onto the measurable claims: `selftest`
(transform exactness), `dispersive` (sup-norm decay of frequency
blocks), `strichartz` / `endpoint` (space-time norms of the linear
flow), `solve` (energy-conserving cubic evolution), `ftm` (one
frequency-split run), `sweep` (the dyadic-cutoff scaling study).

Configs are strict: unknown keys are errors (exit 2), as is malformed
JSON; truncation-safety violations exit 3; anything failing mid-run
exits 1 with a stage-labeled message.  Nothing is written until the
whole computation has succeeded, so a failed run leaves no partial CSV.
With threads=1 reruns are byte-identical; with threads>1 sweeps fan out
but rows are sorted by key columns before writing.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import figures as figs
from .core import RadialField, RadialGrid, TruncationError, lq_norm, make_grid, zeros
from .ftm import FtmConfig, run_ftm
from .nlw import SolverConfig, energy, solve
from .profiles import block_source, gaussian_bump, kink_profile, smooth_bump
from .propagator import (
    dispersive_probe,
    endpoint_ratio,
    half_wave,
    modulus_trajectory,
    strichartz_norm,
    wave_propagate,
)
from .transform import forward, inverse, parseval_residual
from .report import write_csv, write_manifest

_REQ = object()


class ConfigError(ValueError):
    """Configuration is malformed, incomplete, or carries unknown keys."""


@dataclass(frozen=True)
class RunConfig:
    """One fully resolved run: subcommand, parameters, and I/O choices."""

    subcommand: str
    params: dict
    output_dir: str
    threads: int
    figures: bool


PROFILE_SCHEMAS = {
    "gaussian": {
        "center": ("float", 5.0),
        "width": ("float", 1.0),
        "amplitude": ("float", 1.0),
    },
    "smooth_bump": {
        "a": ("float", 0.5),
        "b": ("float", 3.5),
        "amplitude": ("float", 1.0),
    },
    "kink": {
        "center": ("float", 2.0),
        "alpha": ("float", 0.375),
        "a": ("float", 0.5),
        "b": ("float", 3.5),
        "amplitude": ("float", 1.0),
    },
    "block": {
        "N": ("float", _REQ),
        "rho0": ("float", 1.0),
        "amplitude": ("float_or_null", None),
    },
}

_GAUSSIAN = {"profile": "gaussian"}
_KINK = {"profile": "kink"}

SCHEMAS = {
    "selftest": {"L": ("float", 64.0), "n": ("int", 2048)},
    "dispersive": {
        "L": ("float", 128.0),
        "n": ("int", 16384),
        "blocks": ("float_list", [1.0, 2.0, 4.0]),
        # source a few units off the wall: keeps the reflected front from
        # blurring the early-time sup and steepening the fitted slope
        "rho0": ("float", 3.0),
        "T": ("float", 64.0),
    },
    "strichartz": {
        "L": ("float", 128.0),
        "n": ("int", 4096),
        "q": ("float", 2.0),
        "r": ("float", 6.0),
        "T": ("float", 64.0),
        "dt_sample": ("float", 0.5),
        "halvings": ("int", 1),
        "data": ("data", _GAUSSIAN),
    },
    "endpoint": {
        "L": ("float", 128.0),
        "n": ("int", 4096),
        "q": ("float", 6.0),
        "horizons": ("float_list", [8.0, 16.0, 32.0, 64.0]),
        "dt_sample": ("float", 0.25),
        "data": ("data", _GAUSSIAN),
    },
    "solve": {
        "L": ("float", 32.0),
        "n": ("int", 2048),
        "dt": ("float", 1e-3),
        "T": ("float", 10.0),
        "sample_every": ("int", 100),
        "nonlinearity_on": ("bool", True),
        "data": ("data", _GAUSSIAN),
    },
    "ftm": {
        "L": ("float", 32.0),
        "n": ("int", 8192),
        "s": ("float", 0.875),
        "J": ("int", 5),
        "dt": ("float", 2.0 ** -10),
        "T": ("float_or_null", None),
        "eps": ("float", 0.5),
        "sample_every": ("int", 32),
        "refined_reference": ("bool", False),
        "data": ("data", _KINK),
    },
    "sweep": {
        "L": ("float", 32.0),
        "n": ("int", 8192),
        "s": ("float", 0.875),
        "Js": ("int_list", [4, 5, 6]),
        "dt": ("float", 2.0 ** -10),
        "eps": ("float", 0.5),
        "sample_every": ("int", 32),
        "data": ("data", _KINK),
    },
}


def _coerce(key: str, value, kind: str):
    def is_num(x):
        return isinstance(x, (int, float)) and not isinstance(x, bool)

    if kind == "float":
        if not is_num(value):
            raise ConfigError(f"key {key!r} must be a number, got {value!r}")
        return float(value)
    if kind == "float_or_null":
        return None if value is None else _coerce(key, value, "float")
    if kind == "int":
        if not (isinstance(value, int) and not isinstance(value, bool)):
            raise ConfigError(f"key {key!r} must be an integer, got {value!r}")
        return int(value)
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"key {key!r} must be a boolean, got {value!r}")
        return value
    if kind == "float_list":
        if not (isinstance(value, list) and value and all(is_num(x) for x in value)):
            raise ConfigError(f"key {key!r} must be a non-empty list of numbers")
        return [float(x) for x in value]
    if kind == "int_list":
        ok = isinstance(value, list) and value and all(
            isinstance(x, int) and not isinstance(x, bool) for x in value
        )
        if not ok:
            raise ConfigError(f"key {key!r} must be a non-empty list of integers")
        return [int(x) for x in value]
    if kind == "data":
        return _resolve_profile(value)
    raise AssertionError(f"unhandled schema kind {kind}")


def _resolve_profile(value) -> dict:
    if not isinstance(value, dict):
        raise ConfigError("'data' must be an object with a 'profile' key")
    value = dict(value)
    name = value.pop("profile", None)
    if name not in PROFILE_SCHEMAS:
        raise ConfigError(
            f"unknown profile {name!r}; choose from {sorted(PROFILE_SCHEMAS)}"
        )
    schema = PROFILE_SCHEMAS[name]
    unknown = sorted(set(value) - set(schema))
    if unknown:
        raise ConfigError(f"unknown keys in data: {unknown}")
    out = {"profile": name}
    for key, (kind, default) in schema.items():
        if key in value:
            out[key] = _coerce(f"data.{key}", value[key], kind)
        elif default is _REQ:
            raise ConfigError(f"missing required key data.{key}")
        else:
            out[key] = default
    return out


def resolve_config(subcommand: str, raw: dict) -> dict:
    schema = SCHEMAS[subcommand]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown config keys for {subcommand}: {unknown}")
    out = {}
    for key, (kind, default) in schema.items():
        if key in raw:
            out[key] = _coerce(key, raw[key], kind)
        elif default is _REQ:
            raise ConfigError(f"missing required key {key!r}")
        else:
            out[key] = default
    return out


def build_field(grid: RadialGrid, data_cfg: dict):
    kind = data_cfg["profile"]
    p = {k: v for k, v in data_cfg.items() if k != "profile"}
    if kind == "gaussian":
        return gaussian_bump(grid, **p)
    if kind == "smooth_bump":
        return smooth_bump(grid, **p)
    if kind == "kink":
        return kink_profile(grid, **p)
    if kind == "block":
        return block_source(grid, **p)
    raise AssertionError(f"unhandled profile {kind}")


def _map_ordered(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _run_selftest(cfg: dict, threads: int):
    grid = make_grid(cfg["L"], cfg["n"])
    cases = {
        "gaussian": gaussian_bump(grid),
        "smooth_bump": smooth_bump(grid, 1.0, 3.0),
        "kink": kink_profile(grid),
        "block_N1": block_source(grid, 1.0),
    }
    rows = []
    for name, f in cases.items():
        back = inverse(forward(f))
        denom = lq_norm(f, 2.0)
        rows.append(("roundtrip", name, lq_norm(
            RadialField(grid, back.values - f.values), 2.0) / denom))
        rows.append(("parseval", name, parseval_residual(f)))
        hw = half_wave(f, 5.0)
        norm_t = math.hypot(lq_norm(hw.re, 2.0), lq_norm(hw.im, 2.0))
        rows.append(("unitarity_t5", name, abs(norm_t - denom) / denom))
        fwd = wave_propagate(f, zeros(grid), 3.0)
        back2 = wave_propagate(fwd.u, fwd.ut, -3.0)
        err = max(
            np.abs(back2.u.values - f.values).max(),
            np.abs(back2.ut.values).max(),
        ) / np.abs(f.values).max()
        rows.append(("reversal_t3", name, err))
    header = ("check", "profile", "residual")
    figure_jobs = [
        (
            figs.residual_figure,
            "selftest.png",
            ([f"{c}/{p}" for c, p, _ in rows], [v for _, _, v in rows]),
            {},
        )
    ]
    return {"selftest.csv": (header, rows)}, figure_jobs


def _dyadic_times(T: float):
    ts = []
    t = 1.0
    while t <= T * (1 + 1e-12):
        ts.append(t)
        t *= 2.0
    return ts


def _run_dispersive(cfg: dict, threads: int):
    grid = make_grid(cfg["L"], cfg["n"])
    ts = _dyadic_times(cfg["T"])
    if len(ts) < 4:
        raise ConfigError("T must allow at least 4 dyadic sample times (T >= 8)")

    def probe(N: float):
        f = block_source(grid, N, rho0=cfg["rho0"])
        sups = [lq_norm(half_wave(f, t).modulus, math.inf) for t in ts]
        fit = dispersive_probe(N, f, ts)
        return N, sups, fit

    results = _map_ordered(probe, sorted(cfg["blocks"]), threads)
    rows = []
    series = {}
    for N, sups, fit in results:
        series[N] = (np.array(ts), np.array(sups), fit.exponent, fit.constant)
        for t, sup in zip(ts, sups):
            rows.append((N, t, sup, fit.exponent, fit.constant, fit.residual))
    rows.sort(key=lambda row: (row[0], row[1]))
    header = ("N", "t", "sup_norm", "fitted_slope", "fitted_constant", "fit_residual")
    figure_jobs = [(figs.decay_figure, "dispersive.png", (series,), {})]
    return {"dispersive.csv": (header, rows)}, figure_jobs


def _run_strichartz(cfg: dict, threads: int):
    grid = make_grid(cfg["L"], cfg["n"])
    f = build_field(grid, cfg["data"])
    rows = []
    for i in range(cfg["halvings"] + 1):
        dt_i = cfg["dt_sample"] / 2 ** i
        traj = modulus_trajectory(f, cfg["T"], dt_i)
        rows.append((cfg["q"], cfg["r"], dt_i, strichartz_norm(traj, cfg["q"], cfg["r"])))
    header = ("q", "r", "dt_sample", "norm")
    return {"strichartz.csv": (header, rows)}, []


def _run_endpoint(cfg: dict, threads: int):
    grid = make_grid(cfg["L"], cfg["n"])
    f = build_field(grid, cfg["data"])
    q = cfg["q"]
    horizons = sorted(cfg["horizons"])
    ratios = _map_ordered(
        lambda T: endpoint_ratio(f, q, T, dt_sample=cfg["dt_sample"]), horizons, threads
    )
    rows = [(q, T, ratio) for T, ratio in zip(horizons, ratios)]
    header = ("q", "T", "ratio")
    figure_jobs = [
        (
            figs.ratio_figure,
            "endpoint.png",
            (np.array(horizons), np.array(ratios), f"endpoint ratio, q = {q:g}"),
            {},
        )
    ]
    return {"endpoint.csv": (header, rows)}, figure_jobs


def _run_solve(cfg: dict, threads: int):
    grid = make_grid(cfg["L"], cfg["n"])
    u0 = build_field(grid, cfg["data"])
    solver = SolverConfig(
        dt=cfg["dt"],
        T=cfg["T"],
        sample_every=cfg["sample_every"],
        nonlinearity_on=cfg["nonlinearity_on"],
    )
    traj = solve(u0, zeros(grid), solver)
    E = np.array([energy(st) for st in traj])
    E0 = E[0] if E[0] != 0.0 else 1.0
    rows = [
        (
            st.t,
            E[i],
            abs(E[i] - E[0]) / abs(E0),
            lq_norm(st.u, 2.0),
            lq_norm(st.ut, 2.0),
            lq_norm(st.u, 4.0),
        )
        for i, st in enumerate(traj)
    ]
    header = ("t", "energy", "rel_drift", "l2_u", "l2_ut", "l4_u")
    figure_jobs = [(figs.energy_figure, "solve.png", (traj.times, E), {"title": "cubic wave energy"})]
    return {"solve.csv": (header, rows)}, figure_jobs


def _ftm_config(cfg: dict) -> FtmConfig:
    return FtmConfig(
        L=cfg["L"],
        n=cfg["n"],
        s=cfg["s"],
        J=cfg["J"],
        dt=cfg["dt"],
        eps=cfg["eps"],
        T=cfg.get("T"),
        sample_every=cfg["sample_every"],
        refined_reference=cfg.get("refined_reference", False),
    )


def _ftm_summary_row(cfgF: FtmConfig, report) -> tuple:
    split_err = report.splitting_error_vs_refined
    return (
        cfgF.s,
        cfgF.J,
        cfgF.horizon,
        cfgF.dt,
        report.E_T,
        report.w_norms.l4_tx,
        report.w_norms.linf_l3,
        report.w_norms.l2_l6,
        report.w_norms.linf_hs,
        report.recombine_error,
        math.nan if split_err is None else split_err,
        report.flux_residual_max,
        report.flux_residual_bound,
        report.growth_rhs_terms[0],
        report.growth_rhs_terms[1],
        report.growth_rhs_terms[2],
        report.growth_fitted_C,
        report.hs_sup,
        report.hs_exponent,
    )


_FTM_SUMMARY_HEADER = (
    "s",
    "J",
    "T",
    "dt",
    "E_T",
    "w_l4_tx",
    "w_linf_l3",
    "w_l2_l6",
    "w_linf_hs",
    "recombine_error",
    "splitting_error_vs_refined",
    "flux_residual_max",
    "flux_residual_bound",
    "growth_term_init",
    "growth_term_mid",
    "growth_term_quad",
    "growth_fitted_C",
    "hs_sup",
    "hs_exponent",
)


def _run_ftm_cmd(cfg: dict, threads: int):
    cfgF = _ftm_config(cfg)
    grid = cfgF.grid()
    u0 = build_field(grid, cfg["data"])
    report = run_ftm(cfgF, (u0, zeros(grid)))
    series_rows = list(zip(report.sample_times, report.E_v_series))
    tables = {
        "ftm_series.csv": (("t", "E_v"), series_rows),
        "ftm_summary.csv": (_FTM_SUMMARY_HEADER, [_ftm_summary_row(cfgF, report)]),
    }
    figure_jobs = [
        (
            figs.energy_figure,
            "ftm.png",
            (report.sample_times, report.E_v_series),
            {"title": f"low-frequency energy, J = {cfgF.J}"},
        )
    ]
    return tables, figure_jobs


def _fit_slope(x, y) -> tuple[float, float]:
    slope, intercept = np.polyfit(np.asarray(x, float), np.asarray(y, float), 1)
    return float(slope), float(intercept)


def _run_sweep(cfg: dict, threads: int):
    def one(J: int):
        cfgF = FtmConfig(
            L=cfg["L"],
            n=cfg["n"],
            s=cfg["s"],
            J=J,
            dt=cfg["dt"],
            eps=cfg["eps"],
            sample_every=cfg["sample_every"],
        )
        grid = cfgF.grid()
        u0 = build_field(grid, cfg["data"])
        return cfgF, run_ftm(cfgF, (u0, zeros(grid)))

    results = _map_ordered(one, sorted(cfg["Js"]), threads)
    rows = [_ftm_summary_row(cfgF, rep) for cfgF, rep in results]
    rows.sort(key=lambda row: row[1])
    Js = np.array([row[1] for row in rows], dtype=float)
    Ts = np.array([row[2] for row in rows])
    log2 = lambda v: np.log2(np.maximum(np.asarray(v, float), 1e-300))
    E_T = np.array([row[4] for row in rows])
    w26 = np.array([row[7] for row in rows])
    hs = np.array([row[17] for row in rows])
    fits = [
        ("w_l2_l6_vs_J",) + _fit_slope(Js, log2(w26)),
        ("E_T_vs_J",) + _fit_slope(Js, log2(E_T)),
        ("hs_sup_vs_log2T",) + _fit_slope(log2(Ts), log2(hs)),
    ]
    # sweep-level fits repeat on every row, like the per-N decay fits, so
    # downstream plotters get curves and slopes from a single file
    fit_cols = (fits[0][1], fits[1][1], fits[2][1])
    sweep_header = _FTM_SUMMARY_HEADER + (
        "fit_w_l2_l6_vs_J",
        "fit_E_T_vs_J",
        "fit_hs_sup_vs_log2T",
    )
    tables = {
        "sweep.csv": (sweep_header, [row + fit_cols for row in rows]),
        "sweep_fits.csv": (("quantity", "slope", "intercept"), fits),
    }
    series = {
        "w_l2_l6": (w26, fits[0][1]),
        "E_T": (E_T, fits[1][1]),
        "hs_sup": (hs, fits[2][1]),
    }
    figure_jobs = [(figs.scaling_figure, "sweep.png", (Js, series), {})]
    return tables, figure_jobs


_RUNNERS = {
    "selftest": _run_selftest,
    "dispersive": _run_dispersive,
    "strichartz": _run_strichartz,
    "endpoint": _run_endpoint,
    "solve": _run_solve,
    "ftm": _run_ftm_cmd,
    "sweep": _run_sweep,
}


def run(rc: RunConfig) -> int:
    try:
        tables, figure_jobs = _RUNNERS[rc.subcommand](rc.params, rc.threads)
    except TruncationError as e:
        print(f"truncation safety: {e}", file=sys.stderr)
        return 3
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"runtime failure in {rc.subcommand}: {e}", file=sys.stderr)
        return 1
    outdir = Path(rc.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    hashes = {}
    fig_names = []
    for name in sorted(tables):
        header, rows = tables[name]
        hashes[name] = write_csv(outdir / name, header, rows)
    if rc.figures:
        for fn, name, fargs, fkwargs in figure_jobs:
            fn(outdir / name, *fargs, **fkwargs)
            fig_names.append(name)
    resolved = dict(rc.params)
    resolved["output_dir"] = rc.output_dir
    resolved["threads"] = rc.threads
    resolved["figures"] = rc.figures
    write_manifest(outdir / "manifest.json", rc.subcommand, resolved, hashes, fig_names)
    return 0


def _parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="exterior-wave",
        description="Radial waves outside the unit ball: transforms, flows, experiments.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--output-dir", default=".", help="directory for CSVs and figures")
        p.add_argument("--threads", type=int, default=1, help="fan-out width for sweeps")
        p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = _parse_args(argv)
    if args.threads < 1:
        print("config error: threads must be >= 1", file=sys.stderr)
        return 2
    try:
        raw = json.loads(Path(args.config).read_text())
        if not isinstance(raw, dict):
            raise ConfigError("top-level JSON must be an object")
        params = resolve_config(args.subcommand, raw)
    except OSError as e:
        print(f"config error: cannot read {args.config}: {e}", file=sys.stderr)
        return 2
    except (json.JSONDecodeError, ConfigError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    rc = RunConfig(
        subcommand=args.subcommand,
        params=params,
        output_dir=args.output_dir,
        threads=args.threads,
        figures=not args.no_figures,
    )
    return run(rc)


if __name__ == "__main__":
    sys.exit(main())

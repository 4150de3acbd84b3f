"""Spec parsing, column checks, and the per-kind render paths."""

import json

import pytest

from exterior_wave_viz import PlotSpec, SpecError, load_spec, render
from exterior_wave_viz.cli import main
from exterior_wave_viz.render import MissingColumnsError

from run_tables import SOLVE_HEADER, write_csv


def spec_for(csv_path, kind, out, ref=None):
    return PlotSpec(input=csv_path, kind=kind, output=out, reference_exponent=ref)


# ------------------------------------------------------------------ specs


def test_load_spec_roundtrip(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(
        json.dumps(
            {"input": "a.csv", "kind": "decay", "output": "a.png", "reference_exponent": -1.0}
        )
    )
    spec = load_spec(p)
    assert spec.kind == "decay"
    assert spec.reference_exponent == -1.0


@pytest.mark.parametrize(
    "payload",
    [
        {"input": "a.csv", "kind": "decay"},
        {"input": "a.csv", "kind": "contour", "output": "a.png"},
        {"input": "a.csv", "kind": "decay", "output": "a.png", "colour": "red"},
        {"input": "a.csv", "kind": "decay", "output": "a.png", "reference_exponent": True},
        {"input": "", "kind": "decay", "output": "a.png"},
        ["not", "an", "object"],
    ],
)
def test_bad_specs_rejected(tmp_path, payload):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(payload))
    with pytest.raises(SpecError):
        load_spec(p)


def test_malformed_json_rejected(tmp_path):
    p = tmp_path / "s.json"
    p.write_text("{not json")
    with pytest.raises(SpecError):
        load_spec(p)


# ----------------------------------------------------------------- columns


def test_missing_columns_leave_no_output(tmp_path, solve_csv):
    out = tmp_path / "decay.png"
    with pytest.raises(MissingColumnsError, match="sup_norm"):
        render(spec_for(solve_csv, "decay", out))
    assert not out.exists()


def test_ragged_rows_rejected(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("t,energy,rel_drift\n0.0,1.0\n")
    with pytest.raises(ValueError, match="cells"):
        render(spec_for(p, "energy", tmp_path / "e.png"))


def test_header_only_csv_rejected(tmp_path):
    p = write_csv(tmp_path / "empty.csv", SOLVE_HEADER, [])
    with pytest.raises(ValueError, match="no data rows"):
        render(spec_for(p, "energy", tmp_path / "e.png"))


# ------------------------------------------------------------------ render


def test_render_is_deterministic(tmp_path, dispersive_csv):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render(spec_for(dispersive_csv, "decay", a, ref=-1.0))
    render(spec_for(dispersive_csv, "decay", b, ref=-1.0))
    assert a.read_bytes() == b.read_bytes()


def test_decay_annotates_each_block(tmp_path, dispersive_csv):
    res = render(spec_for(dispersive_csv, "decay", tmp_path / "d.png"))
    assert res.annotations["fitted_slope_N1"] == pytest.approx(-0.996)
    assert res.annotations["fitted_slope_N2"] == pytest.approx(-1.051)
    assert res.path.stat().st_size > 0


def test_energy_constant_trace_annotates_zero_drift(tmp_path):
    rows = [(0.1 * k, 2.5, 0.0, 1.0, 0.5, 0.8) for k in range(5)]
    p = write_csv(tmp_path / "flat.csv", SOLVE_HEADER, rows)
    res = render(spec_for(p, "energy", tmp_path / "e.png"))
    assert res.annotations["max_rel_drift"] == 0.0


def test_scaling_reads_fits_from_columns(tmp_path, sweep_csv):
    res = render(spec_for(sweep_csv, "scaling", tmp_path / "s.png", ref=0.5625))
    assert res.annotations["fit_E_T_vs_J"] == pytest.approx(0.386)
    assert res.annotations["fit_hs_sup_vs_log2T"] == pytest.approx(0.030)
    assert res.annotations["reference_exponent"] == 0.5625


# --------------------------------------------------------------------- cli


def test_cli_renders_and_reports_path(tmp_path, dispersive_csv, capsys):
    out = tmp_path / "d.png"
    spec = tmp_path / "s.json"
    spec.write_text(
        json.dumps({"input": str(dispersive_csv), "kind": "decay", "output": str(out)})
    )
    assert main(["--spec", str(spec)]) == 0
    assert out.exists()
    assert str(out) in capsys.readouterr().out


def test_cli_bad_spec_exits_2(tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"kind": "decay"}))
    assert main(["--spec", str(spec)]) == 2


def test_cli_missing_columns_exits_1_no_file(tmp_path, solve_csv):
    out = tmp_path / "d.png"
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"input": str(solve_csv), "kind": "decay", "output": str(out)}))
    assert main(["--spec", str(spec)]) == 1
    assert not out.exists()


def test_cli_missing_csv_exits_1(tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(
        json.dumps(
            {"input": str(tmp_path / "gone.csv"), "kind": "energy", "output": str(tmp_path / "e.png")}
        )
    )
    assert main(["--spec", str(spec)]) == 1

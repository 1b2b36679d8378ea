import json

import numpy as np
import pytest
from scipy.integrate import quad

from pampa_swe.bench import (PRESETS, ConfigError, ExperimentConfig, convergence_study, error_norms,
                             evaluate_expression, prolong, rates, restrict, run_experiment)
from pampa_swe.bench.cli import main
from pampa_swe.bench.norms import norms_1d
from pampa_swe.mesh import make_grid, project_initial_data

QUADRATIC = {"name": "quadratic", "grid": {"cells": 8},
             "initial": {"h": "1 + x + 0.5*x**2", "hu": "0.1*x**2", "B": "0.2*x"},
             "boundary": {"left": "extrapolation", "right": "extrapolation"},
             "controls": {"t_final": 0.0}}


def test_norms_identical_and_single_cell():
    a = np.ones((2, 11))
    b = np.ones((2, 10))
    out = error_norms(a, b, a, b, 0.1)
    assert all(v == 0 for kind in out.values() for f in kind.values() for v in f.values())
    off = b.copy()
    off[0, 3] += 1.0
    nrm = error_norms(a, off, a, b, 0.1)["average"]["h"]
    assert nrm["L1"] == pytest.approx(0.1) and nrm["Linf"] == 1.0
    assert nrm["L2"] == pytest.approx(np.sqrt(0.1))
    # end nodes carry half weight
    e = np.zeros(11)
    e[0] = 1.0
    assert norms_1d(e, 0.1, "point")["L1"] == pytest.approx(0.05)
    with pytest.raises(ValueError):
        error_norms(a, b, a[:, :-1], b, 0.1)


def test_norms_against_quadrature():
    err = lambda x: np.sin(3 * x) * np.exp(x) - 0.4
    n = 200
    x = np.linspace(0, 1, n + 1)
    nrm = norms_1d(err(x), 1.0 / n, "point")
    l1 = quad(lambda s: abs(err(s)), 0, 1, limit=200)[0]
    l2 = np.sqrt(quad(lambda s: err(s) ** 2, 0, 1, limit=200)[0])
    assert nrm["L1"] == pytest.approx(l1, rel=1e-2)
    assert nrm["L2"] == pytest.approx(l2, rel=1e-2)


def test_restrict_quadratic_projection_is_exact():
    h = lambda x: 1 + x + 0.5 * x ** 2
    hu = lambda x: 0.3 * x ** 2
    coarse = project_initial_data(make_grid(0, 1, 8), h, hu)
    fine = project_initial_data(make_grid(0, 1, 16), h, hu)
    rp, ra = restrict(fine.points, fine.averages)
    np.testing.assert_array_equal(rp, coarse.points)
    np.testing.assert_allclose(ra, coarse.averages, atol=1e-15)
    with pytest.raises(ValueError):
        restrict(np.zeros((1, 4)), np.zeros((1, 3)))


def test_rates():
    assert rates([1.0, 0.125, 0.015625]) == [None, 3.0, 3.0]
    assert rates([1.0, 0.0]) == [None, None]


def test_prolong_matches_fine_projection():
    cfg = ExperimentConfig.from_dict(QUADRATIC)
    coarse = cfg.initial_state(8)
    fine = prolong(coarse, cfg)
    ref = cfg.initial_state(16)
    np.testing.assert_allclose(fine.points, ref.points, atol=1e-15)
    np.testing.assert_allclose(fine.averages, ref.averages, atol=1e-15)


def test_quadratic_data_frozen_time_zero_error():
    report = convergence_study(ExperimentConfig.from_dict(QUADRATIC), [8, 16, 32])
    assert report.method == "runge" and report.cells == [8, 16]
    for kind in ("point", "average"):
        for name in ("h", "hu"):
            assert max(report.series(kind, name, "Linf")) < 1e-14


def test_convergence_study_rejects_bad_meshes():
    cfg = ExperimentConfig.from_dict(QUADRATIC)
    with pytest.raises(ValueError):
        convergence_study(cfg, [8, 16])
    with pytest.raises(ValueError):
        convergence_study(cfg, [8, 16, 24])


def test_expressions():
    x = np.linspace(0, 1, 5)
    np.testing.assert_allclose(evaluate_expression(2, x, 9.8), 2.0)
    np.testing.assert_allclose(evaluate_expression("g*x + B", x, 2.0, B=x), 3 * x)
    np.testing.assert_allclose(evaluate_expression("where(x > 0.5, 1, 0)", x, 1.0), [0, 0, 0, 1, 1])
    for bad in ("__import__('os')", "open('f')", "y + 1"):
        with pytest.raises(ConfigError):
            evaluate_expression(bad, x, 1.0)


def test_config_file_and_validation(tmp_path):
    path = tmp_path / "case.toml"
    path.write_text('example = "ex2"\n[grid]\ncells = 20\n[controls]\nt_final = 0.5\n'
                    '[boundary]\nleft = "dirichlet"\nleft_values = {h = 1.0}\n')
    cfg = ExperimentConfig.from_file(path)
    assert cfg.name == "case" and cfg.cells == 20 and cfg.g == 9.812
    assert cfg.controls().t_final == 0.5 and cfg.boundary().left_values == {0: 1.0}
    for bad in ({"bogus": {}}, {"model": {"kind": "euler"}}, {"grid": {"cells": 1}},
                {"boundary": {"left_values": {"u": 1.0}}}, {"controls": {"cfl": 0.9}},
                {"example": "ex99"}):
        with pytest.raises(ConfigError if "controls" not in bad else ValueError):
            ExperimentConfig.from_dict(bad)


def test_presets_match_setups():
    for name in PRESETS:
        ExperimentConfig.from_dict({"example": name})
    ex6 = ExperimentConfig.from_dict({"example": "ex6"})
    assert ex6.g == 1.0 and ex6.cells == 300
    ex11 = ExperimentConfig.from_dict({"example": "ex11"})
    assert ex11.g == 1.0 and ex11.data["model"]["f0"] == 1.0 and ex11.cells == 4000
    assert ex11.controls().t_final == pytest.approx(2 * np.pi)
    assert ExperimentConfig.from_dict({"example": "ex11-fine"}).cells == 20000
    assert ExperimentConfig.from_dict({"example": "ex3-II"}).data["grid"]["x_max"] == 25.0


@pytest.mark.parametrize("name", sorted(n for n in PRESETS if n != "ex11-fine"))
def test_preset_initial_states(name):
    st = ExperimentConfig.from_dict({"example": name}).initial_state()
    assert np.all(np.isfinite(st.points)) and np.all(st.points[0] >= 0) and np.all(st.averages[0] >= 0)


def _listing(path):
    return sorted(p.name for p in path.iterdir())


def test_cli_example_artifacts_and_determinism(tmp_path, capsys):
    args = ["example", "ex2", "--tfinal", "0.2"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    out = capsys.readouterr().out
    assert "ex2: 50 cells" in out
    files = _listing(tmp_path / "a")
    assert files == ["ex2_n50_diagnostics.csv", "ex2_n50_manifest.json", "ex2_n50_t0.2.csv"]
    csv_a = (tmp_path / "a" / "ex2_n50_t0.2.csv").read_bytes()
    assert csv_a == (tmp_path / "b" / "ex2_n50_t0.2.csv").read_bytes()
    header = csv_a.decode().splitlines()[0]
    assert header == "x,dof,h,hu,B,h+B,G1,G2"
    manifest = json.loads((tmp_path / "a" / "ex2_n50_manifest.json").read_text())
    assert manifest["errors"]["point"]["h"]["Linf"] < 1e-12


def test_empty_snapshots_emit_summary_only(tmp_path):
    cfg = ExperimentConfig.from_dict(dict(QUADRATIC, controls={"t_final": 0.01},
                                          output={"snapshots": []}))
    run_experiment(cfg, tmp_path)
    assert _listing(tmp_path) == ["quadratic_n8_manifest.json"]


def test_cli_svg(tmp_path):
    pytest.importorskip("matplotlib")
    assert main(["example", "ex2", "--cells", "10", "--tfinal", "0.05", "--svg",
                 "--out", str(tmp_path)]) == 0
    assert (tmp_path / "ex2_n10.svg").read_text().lstrip().startswith("<?xml")


def test_cli_list_converge_and_errors(tmp_path, capsys):
    assert main(["list-examples"]) == 0
    out = capsys.readouterr().out
    assert "ex3-II" in out and "ex11-fine" in out
    assert main(["converge", "ex1", "--meshes", "16,32,64", "--tfinal", "0.002"]) == 0
    out = capsys.readouterr().out
    assert "runge errors" in out and "# point values" in out
    path = tmp_path / "bad.toml"
    path.write_text('[model]\nkind = "euler"\n')
    assert main(["run", str(path)]) == 2
    assert main(["run", str(tmp_path / "missing.toml")]) == 2

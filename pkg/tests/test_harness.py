import filecmp

import numpy as np
import pytest

from sharpfv import harness
from sharpfv.cli import main
from sharpfv.errors import ConfigError
from sharpfv.harness import (ExperimentConfig, expected_rate, parse_config, run_experiment,
                             time_dependence_probe)


def test_parse_config_and_defaults():
    cfg = parse_config("""
        # a comment
        experiment = convergence
        scheme = 3,1
        grids = 100, 200
        nu = 0.4
    """)
    assert cfg.scheme == "3,1" and cfg.grids == (100, 200) and cfg.nu == 0.4
    assert cfg.preset == "step" and cfg.t_end == 0.5
    tf = parse_config("experiment = twofluid1d\npreset = interface-advection\ngamma2 = 1.6")
    assert tf.bc == "periodic" and tf.gamma2 == 1.6


@pytest.mark.parametrize("text,key", [
    ("experiment = nope", "experiment"),
    ("experiment = advect1d\nscheme = bogus", "scheme"),
    ("experiment = advect1d\npreset = sod", "preset"),
    ("experiment = advect1d\npreset = nope", "preset"),
    ("experiment = advect1d\nnu = 1.5", "nu"),
    ("experiment = advect1d\nnu = fast", "nu"),
    ("experiment = advect1d\ncolour = red", "colour"),
    ("experiment = convergence\ngrids = 400, 200", "grids"),
    ("experiment = twofluid1d\nbc = reflective", "bc"),
    ("experiment = advect1d\nscheme = 2,5", "scheme"),
    ("scheme = upwind", "experiment"),
])
def test_config_errors_name_the_key(text, key):
    with pytest.raises(ConfigError) as e:
        parse_config(text)
    assert e.value.key == key


def test_subcommand_must_agree_with_file():
    with pytest.raises(ConfigError):
        parse_config("experiment = glimm1d", "advect1d")


def test_expected_rate():
    assert expected_rate(1, False) == pytest.approx((0.4, 0.6))
    assert expected_rate(3, False) == pytest.approx((0.65, 0.85))
    assert expected_rate(2, True) == pytest.approx((1.8, 2.2))


@pytest.mark.parametrize("scheme", ["upwind", "o3", "minmod", "ultrabee", "limited_downwind"])
def test_unit_cfl_is_exact(scheme):
    r = run_experiment(ExperimentConfig("advect1d", scheme=scheme, nu=1.0, grids=(50,)))
    assert r.ok and r.errors["Linf"][0] < 1e-12


def test_convergence_upwind_rate():
    r = run_experiment(ExperimentConfig("convergence", grids=(200, 400, 800)))
    assert r.ok
    assert all(abs(e - 0.5) < 0.05 for e in r.eoc)
    assert 0.3 < r.metrics["time_exponent"] <= 0.55


def test_convergence_flags_wrong_rate(monkeypatch):
    monkeypatch.setattr(harness, "expected_rate", lambda order, smooth: (5.0, 6.0))
    r = run_experiment(ExperimentConfig("convergence", grids=(100, 200)))
    assert not r.ok and r.violations["eoc_last_pair"] == 1
    assert r.failures and r.failures[0].startswith("eoc_last_pair")


def test_time_dependence_probe():
    b, errs = time_dependence_probe("upwind", n_cells=100)
    assert b <= 0.5 + 0.2
    assert len(errs) == 4
    b, errs = time_dependence_probe("upwind", n_cells=100, nu=1.0)
    assert b is None
    b, errs = time_dependence_probe("limited_downwind", n_cells=100)
    assert b is None or abs(b) < 0.2


@pytest.mark.parametrize("experiment,extra", [
    ("limiters1d", {"scheme": "superbee"}),
    ("glimm1d", {}),
    ("glimm1d", {"sampling": "pseudo_random"}),
    ("levelset1d", {}),
    ("vofire2d", {"grids": (16,), "t_end": 0.25}),
    ("vofire2d", {"grids": (12,), "t_end": 0.2, "preset": "gaussian"}),
    ("split2d", {"grids": (32,), "t_end": 0.5}),
    ("split2d", {"grids": (32,), "preset": "gaussian"}),
    ("twofluid1d", {"grids": (100,)}),
    ("twofluid1d", {"grids": (64,), "preset": "interface-advection", "t_end": 0.3}),
    ("twofluid1d", {"grids": (64,), "preset": "interface-advection", "t_end": 0.3,
                    "gamma2": 1.6, "cv2": 2.0}),
])
def test_experiments_run_clean(experiment, extra):
    r = run_experiment(ExperimentConfig(experiment, **extra))
    assert r.ok, r.failures


def test_split2d_bump_oscillates():
    r = run_experiment(ExperimentConfig("split2d", grids=(64,), preset="bump", t_end=0.25))
    assert r.ok, r.failures
    assert r.metrics["tv_first_increase_step"] is not None
    assert r.metrics["tv_max"] > r.metrics["tv_initial"] + 1e-12


def test_outputs_are_reproducible(tmp_path):
    for name in ("a", "b"):
        cfg = ExperimentConfig("glimm1d", sampling="pseudo_random", seed=7,
                               out_dir=str(tmp_path / name))
        run_experiment(cfg)
    cmp = filecmp.dircmp(tmp_path / "a", tmp_path / "b")
    assert sorted(cmp.common_files) == ["errors.csv", "glimm1d_n512.csv", "report.txt"]
    assert not cmp.diff_files
    text = (tmp_path / "a" / "report.txt").read_text()
    assert "violations.value_inclusion = 0" in text


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["advect1d", "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "report.txt").exists()
    cfg = tmp_path / "c.txt"
    cfg.write_text("scheme = nope\n")
    assert main(["advect1d", "--config", str(cfg)]) == 2
    assert "scheme" in capsys.readouterr().err
    assert main(["advect1d", "--config", str(tmp_path / "missing.txt")]) == 2
    assert main(["nope"]) == 2
    assert main(["glimm1d", "--seed", "3", "--set", "sampling=pseudo_random"]) == 0


def test_cli_invariant_failure_exit(monkeypatch):
    monkeypatch.setattr(harness, "expected_rate", lambda order, smooth: (5.0, 6.0))
    assert main(["convergence", "--set", "grids=100,200"]) == 1

"""
End-to-end runs of the command line entry point on small grids.
"""
import argparse
import logging
import math

import pandas as pd
import pytest

from lib.opts import extant_file, opts
from lib.run_config import RunConfig
from main import main

SMALL_EXPERIMENT = """\
m = 1
sigma = 0.9
h = 0.1
[experiment]
alpha = 0.01
nt = 201
field_nx = 501
field_nt = 21
"""

SMALL_SIMULATION = "m = 2\nsigma = 0.5\nh = 1.0\nalpha = 0.01\nsim_nx = 1024\nsteps = 10\n"

CONFIGS = {
    "synth": None,
    "dispersion": None,
    "caustics": None,
    "errormodel": SMALL_EXPERIMENT,
    "simulate": SMALL_SIMULATION,
    "discrepancy": SMALL_EXPERIMENT,
}


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


def _write_config(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _run(command, out, *extra):
    return main([command, "--out", str(out), "--log_level", "WARNING", *extra])


def _header(path):
    with open(path) as f:
        return f.readline().strip()


class TestCommands:

    def test_synth(self, tmp_path):
        assert _run("synth", tmp_path) == 0
        assert _header(tmp_path / "coefficients.csv") == "k,gamma"
        df = pd.read_csv(tmp_path / "coefficients.csv")
        assert list(df.k) == [-1, 0, 1]
        assert df.gamma[2] == pytest.approx(2 / math.pi, rel=1e-14)
        assert df.gamma[0] == pytest.approx(-2 / math.pi, rel=1e-14)

    def test_synth_m(self, tmp_path):
        assert _run("synth", tmp_path, "--m", "2") == 0
        df = pd.read_csv(tmp_path / "coefficients.csv")
        assert df.gamma[3] == pytest.approx(0.75925, abs=1e-5)
        assert df.gamma[4] == pytest.approx(-0.14447, abs=1e-5)

    def test_dispersion(self, tmp_path):
        assert _run("dispersion", tmp_path, "--backend", "threepoint") == 0
        assert _header(tmp_path / "dispersion_profile.csv") == "phi,xi_tau,eta_tau,vg_over_c"
        df = pd.read_csv(tmp_path / "dispersion_profile.csv")
        assert len(df) == 1001
        assert df.phi.iloc[0] == pytest.approx(-math.pi) and df.phi.iloc[-1] == pytest.approx(math.pi)

    def test_caustics(self, tmp_path):
        assert _run("caustics", tmp_path) == 0
        assert _header(tmp_path / "caustic_report.csv") == "phi_c,k_c,U_c,kind,backend,sigma"
        assert _header(tmp_path / "f1f2_curves.csv") == "theta,f1,f2"
        assert _header(tmp_path / "joint_roots.csv") == "theta_star,phi_star,f1,f2"
        report = pd.read_csv(tmp_path / "caustic_report.csv")
        assert set(report.backend) == {"general"}
        assert len(pd.read_csv(tmp_path / "joint_roots.csv")) == 0
        assert len(pd.read_csv(tmp_path / "f1f2_curves.csv")) == 4096

    def test_errormodel(self, tmp_path):
        cfg = _write_config(tmp_path, SMALL_EXPERIMENT)
        out = tmp_path / "out"
        assert _run("errormodel", out, "--config", cfg) == 0
        assert _header(out / "error_history.csv") == "t,linf"
        assert _header(out / "residual_energy.csv").startswith("t,")
        assert _header(out / "caustic_rays.csv") == "t,x,phi_c"
        history = pd.read_csv(out / "error_history.csv")
        assert len(history) == 201
        assert history.linf[100] == pytest.approx(2.0, rel=1e-3)
        field = pd.read_csv(out / "residual_energy.csv")
        assert field.shape == (21, 502)
        assert (out / "errormodel_metadata.yaml").exists()

    def test_simulate(self, tmp_path):
        cfg = _write_config(tmp_path, SMALL_SIMULATION)
        out = tmp_path / "out"
        assert _run("simulate", out, "--config", cfg) == 0
        assert _header(out / "simulation_error.csv") == "t,linf_simulation,linf_model"
        assert len(pd.read_csv(out / "simulation_error.csv")) == 11
        assert (out / "simulation_metadata.yaml").exists()

    def test_discrepancy(self, tmp_path):
        cfg = _write_config(tmp_path, SMALL_EXPERIMENT)
        out = tmp_path / "out"
        assert _run("discrepancy", out, "--config", cfg) == 0
        path = out / "discrepancy.csv"
        assert _header(path) == "claim_id,reference_location,reference_value,computed_value,agree,tolerance"
        df = pd.read_csv(path).set_index("claim_id")
        assert list(df.index) == sorted(df.index)
        assert not df.loc["f1_at_one_3pt", "agree"]
        assert df.loc["gamma1_3pt", "agree"]
        assert df.loc["caustic_root_0", "agree"]
        assert not df.loc["caustic_root_pi_over_2", "agree"]


class TestDeterminism:

    @pytest.mark.parametrize("command", list(CONFIGS))
    def test_identical_bytes(self, tmp_path, command):
        extra = [] if CONFIGS[command] is None else ["--config", _write_config(tmp_path, CONFIGS[command])]
        out = tmp_path / "out"
        assert _run(command, out, *extra) == 0
        first = {p.name: p.read_bytes() for p in out.iterdir()}
        assert _run(command, out, *extra) == 0
        second = {p.name: p.read_bytes() for p in out.iterdir()}
        assert first.keys() == second.keys()
        for name in first:
            assert first[name] == second[name], name
        if command in ("errormodel", "simulate"):
            assert f"{command}_metadata.yaml" in first


class TestExitCodes:

    def test_bad_config(self, tmp_path):
        cfg = _write_config(tmp_path, "m = 1\nsigma = -1\nh = 0.01\n")
        assert _run("synth", tmp_path / "out", "--config", cfg) == 2
        assert not (tmp_path / "out").exists()

    def test_bad_override(self, tmp_path):
        assert _run("synth", tmp_path, "--sigma", "-0.5") == 2

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        assert _run("synth", blocker / "sub") == 3

    def test_equal_speeds(self, tmp_path):
        cfg = _write_config(tmp_path, "m = 1\nsigma = 0.9\nh = 0.1\nv1 = -2.5\nv2 = -2.5\n")
        assert _run("errormodel", tmp_path / "out", "--config", cfg) == 4

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            _run("synth", tmp_path, "--config", str(tmp_path / "absent.cfg"))
        assert info.value.code == 2

    def test_unknown_command(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            main(["plot", "--out", str(tmp_path)])
        assert info.value.code == 2


class TestOptions:

    def test_overrides_merged(self, tmp_path):
        opt = opts().init(["caustics", "--m", "2", "--sigma", "0.5", "--out", str(tmp_path)])
        assert isinstance(opt.run_config, RunConfig)
        assert (opt.run_config.m, opt.run_config.sigma) == (2, 0.5)
        assert (opt.m, opt.sigma, opt.h) == (2, 0.5, 0.01)
        assert opt.command == "caustics"
        assert opt.out_dir == str(tmp_path)
        assert opt.config is None and opt.log_level == "INFO"

    def test_config_file(self, tmp_path):
        cfg = _write_config(tmp_path, SMALL_SIMULATION)
        opt = opts().init(["simulate", "--config", cfg, "--log_level", "debug"])
        assert (opt.m, opt.h, opt.sim_nx, opt.steps) == (2, 1.0, 1024, 10)
        assert opt.log_level == "DEBUG"

    def test_extant_file(self, tmp_path):
        path = _write_config(tmp_path, "m = 1\n")
        assert extant_file(path) == path
        with pytest.raises(argparse.ArgumentTypeError):
            extant_file(str(tmp_path / "absent.cfg"))

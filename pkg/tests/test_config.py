"""Run configuration: files, environment, potential resolution."""

from __future__ import annotations

import pytest

from fpgreen.config import RunConfig, apply_env, load_config_file, resolve_potential
from fpgreen.errors import EvaluationDomainError, ParseError, PotentialError
from fpgreen.potential import Mode


class TestValidation:
    def test_defaults_pass(self):
        RunConfig().validate()

    @pytest.mark.parametrize(
        "changes",
        [
            {"builtin": "ex1", "f": "-1"},
            {"order": -1},
            {"samples": 0},
            {"kmin": 0.0},
            {"kmin": 5.0, "kmax": 2.0},
            {"tmin": 0.0},
            {"threads": 0},
            {"format": "xml"},
        ],
    )
    def test_bad_values_rejected(self, changes):
        with pytest.raises(EvaluationDomainError):
            RunConfig().updated(**changes).validate()

    def test_k_grid_is_geometric(self):
        grid = RunConfig(kmin=2.0, kmax=32.0, samples=5).k_magnitudes()
        assert grid == pytest.approx([2.0, 4.0, 8.0, 16.0, 32.0])

    def test_t_grid_is_linear(self):
        grid = RunConfig(tmin=0.1, tmax=0.3, tpoints=3).t_grid()
        assert grid == pytest.approx([0.1, 0.2, 0.3])


class TestConfigFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text(
            "# comment\n"
            "builtin = ex6\n"
            "order = 5\n"
            "kmin = 3.5\n"
            "ray = sector:pi/4\n"
            "\n"
            "threads = 2\n"
        )
        cfg = load_config_file(str(path), RunConfig())
        assert cfg.builtin == "ex6"
        assert cfg.order == 5
        assert cfg.kmin == 3.5
        assert cfg.ray == "sector:pi/4"
        assert cfg.threads == 2

    def test_unknown_key_names_line(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("order = 3\nwhat = 7\n")
        with pytest.raises(ParseError, match=r":2:"):
            load_config_file(str(path), RunConfig())

    def test_bad_number_names_line(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("order = three\n")
        with pytest.raises(ParseError, match=r":1:"):
            load_config_file(str(path), RunConfig())

    def test_missing_equals_rejected(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("order 3\n")
        with pytest.raises(ParseError):
            load_config_file(str(path), RunConfig())


class TestEnvironment:
    def test_threads_override(self):
        cfg = apply_env(RunConfig(), environ={"FPGREEN_THREADS": "4"})
        assert cfg.threads == 4

    def test_bad_value_rejected(self):
        with pytest.raises(ParseError):
            apply_env(RunConfig(), environ={"FPGREEN_THREADS": "many"})

    def test_absent_is_noop(self):
        cfg = RunConfig(threads=2)
        assert apply_env(cfg, environ={}) is cfg


class TestPotentialResolution:
    def test_builtin(self):
        spec = resolve_potential(RunConfig(builtin="ex2"))
        assert spec.name == "ex2"

    def test_inline_drift(self):
        spec = resolve_potential(RunConfig(f="-z"))
        assert spec.mode is Mode.F_GIVEN
        assert spec.drift(2.0) == pytest.approx(-2.0)

    def test_inline_fp_potential(self):
        spec = resolve_potential(RunConfig(v="z^2"))
        assert spec.mode is Mode.V_GIVEN

    def test_schrodinger_requires_offset(self):
        with pytest.raises(PotentialError):
            resolve_potential(RunConfig(vs="z^2"))
        spec = resolve_potential(RunConfig(vs="z^2", e0=1.0))
        assert spec.mode is Mode.VS_GIVEN
        assert spec.e0 == 1.0

    def test_no_source_rejected(self):
        with pytest.raises(PotentialError):
            resolve_potential(RunConfig())

"""Tests for config resilience: malformed TOML, out-of-range numbers, bad tolerances."""

from __future__ import annotations

from bcfb.config.defaults import DEFAULT_CONFIG
from bcfb.config.manager import ConfigManager


# ---------------------------------------------------------------------------
# Tests: Invalid TOML falls back to defaults
# ---------------------------------------------------------------------------


class TestInvalidToml:
    def test_malformed_toml_uses_defaults(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text("this is not valid toml [[[")
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["general"]["log_level"] == DEFAULT_CONFIG["general"]["log_level"]
        assert cfg["numerics"]["tau_num"] == DEFAULT_CONFIG["numerics"]["tau_num"]

    def test_empty_file_uses_defaults(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text("")
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert "general" in cfg
        assert "simulation" in cfg

    def test_partial_config_merges_with_defaults(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text("[numerics]\nmargin = 0.001\n")
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["numerics"]["margin"] == 0.001
        assert cfg["numerics"]["tau_geo"] == DEFAULT_CONFIG["numerics"]["tau_geo"]
        assert "search" in cfg


# ---------------------------------------------------------------------------
# Tests: Numeric values are clamped to their floors
# ---------------------------------------------------------------------------


class TestNumericClamping:
    def test_negative_margin_clamped(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text("[numerics]\nmargin = -0.5\n")
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["numerics"]["margin"] == 0.0

    def test_gamma_below_one_clamped(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text("[simulation]\ngamma = 0.2\n")
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["simulation"]["gamma"] >= 1.0

    def test_zero_resource_cap_clamped(self, tmp_path, monkeypatch):
        monkeypatch.delenv("BCFB_RESOURCE_CAP", raising=False)
        config_file = tmp_path / "config.toml"
        config_file.write_text("[simulation]\nresource_cap = 0\nworkers = -4\n")
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["simulation"]["resource_cap"] == 1
        assert cfg["simulation"]["workers"] == 0

    def test_alpha_steps_clamped(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text("[search]\nalpha_steps = 1\nmax_candidates = -1\n")
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["search"]["alpha_steps"] == 2
        assert cfg["search"]["max_candidates"] == 1


# ---------------------------------------------------------------------------
# Tests: Tolerances and log level
# ---------------------------------------------------------------------------


class TestValidation:
    def test_non_positive_tolerance_falls_back(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text("[numerics]\ntau_geo = 0.0\ntau_num = -1e-9\n")
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["numerics"]["tau_geo"] == 1e-9
        assert cfg["numerics"]["tau_num"] == 1e-9

    def test_loose_tolerance_kept(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text("[numerics]\ntau_geo = 0.01\n")
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["numerics"]["tau_geo"] == 0.01

    def test_numerics_not_a_table(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text('numerics = "tight"\n')
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["numerics"] == DEFAULT_CONFIG["numerics"]

    def test_unknown_log_level_uses_info(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text('[general]\nlog_level = "chatty"\n')
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["general"]["log_level"] == "INFO"

    def test_lowercase_log_level_normalized(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text('[general]\nlog_level = "debug"\n')
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["general"]["log_level"] == "DEBUG"


# ---------------------------------------------------------------------------
# Tests: Missing config sections use defaults
# ---------------------------------------------------------------------------


class TestMissingSections:
    def test_missing_config_file_creates_default(self, tmp_path):
        config_file = tmp_path / "nonexistent" / "config.toml"
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["general"]["log_level"] == DEFAULT_CONFIG["general"]["log_level"]
        assert config_file.exists()

    def test_missing_output_section_uses_defaults(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text('[general]\nlog_level = "INFO"\n')
        cfg = ConfigManager(config_path=str(config_file)).load()
        assert cfg["output"]["float_digits"] == 9

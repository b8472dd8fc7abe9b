from __future__ import annotations

import copy
import logging
import os
import tomllib
from pathlib import Path

from bcfb.config.defaults import DEFAULT_CONFIG, RESOURCE_CAP_ENV, get_resource_cap

log = logging.getLogger(__name__)

# Numeric settings with a hard floor.
_CLAMP_NON_NEGATIVE: dict[str, float] = {
    "margin": 0.0,
    "cap_factor": 1.0,
    "gamma": 1.0,
    "max_n_single": 1,
    "max_n_block": 1,
    "workers": 0,
    "resource_cap": 1,
    "memory_cap": 1,
    "alpha_steps": 2,
    "refine_rounds": 0,
    "refine_points": 3,
    "max_candidates": 1,
    "float_digits": 1,
}

# Tolerances must stay strictly positive; non-positive values fall back to these.
_POSITIVE_TOLERANCES: dict[str, float] = {
    "tau_norm": 1e-9,
    "tau_num": 1e-9,
    "tau_geo": 1e-9,
}

_LOG_LEVELS = frozenset({"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"})


class ConfigManager:
    """TOML settings for numerics, simulation caps and logging."""

    def __init__(self, config_path: str | None = None) -> None:
        if config_path is not None:
            self._config_path = Path(config_path).expanduser()
        else:
            xdg = os.environ.get("XDG_CONFIG_HOME", "~/.config")
            self._config_path = Path(xdg).expanduser() / "bcfb" / "config.toml"
        self._config: dict = {}

    @property
    def path(self) -> Path:
        return self._config_path

    @property
    def config(self) -> dict:
        if not self._config:
            self._config = self.load()
        return self._config

    def load(self) -> dict:
        defaults = copy.deepcopy(DEFAULT_CONFIG)
        if not self._config_path.exists():
            self._config_path.parent.mkdir(parents=True, exist_ok=True)
            self.save(defaults)
            self._config = self._apply_environment(defaults)
            return self._config

        try:
            with open(self._config_path, "rb") as f:
                user_config = tomllib.load(f)
        except Exception as exc:
            log.warning(
                "Failed to parse settings %s: %s; using defaults",
                self._config_path,
                exc,
            )
            self._config = self._apply_environment(defaults)
            return self._config

        merged = self._deep_merge(defaults, user_config)
        self._clamp_numeric_values(merged)
        self._validate_tolerances(merged)
        self._validate_log_level(merged)
        self._config = self._apply_environment(merged)
        return self._config

    def _clamp_numeric_values(self, config: dict) -> None:
        """Walk config and clamp known numeric fields to their floors."""
        for key, value in config.items():
            if isinstance(value, dict):
                self._clamp_numeric_values(value)
            elif key in _CLAMP_NON_NEGATIVE and isinstance(value, (int, float)):
                floor = _CLAMP_NON_NEGATIVE[key]
                if value < floor:
                    log.warning(
                        "Setting %r has invalid value %s, clamping to %s",
                        key,
                        value,
                        floor,
                    )
                    config[key] = type(value)(floor)

    def _validate_tolerances(self, config: dict) -> None:
        numerics = config.get("numerics", {})
        if not isinstance(numerics, dict):
            log.warning("Section 'numerics' is not a table; using defaults")
            config["numerics"] = copy.deepcopy(DEFAULT_CONFIG["numerics"])
            return
        for key, fallback in _POSITIVE_TOLERANCES.items():
            value = numerics.get(key, fallback)
            if not isinstance(value, (int, float)) or value <= 0:
                log.warning("Tolerance %r must be positive, got %r", key, value)
                numerics[key] = fallback
            elif value > 1e-3:
                log.warning("Tolerance %r=%s is unusually loose", key, value)

    def _validate_log_level(self, config: dict) -> None:
        general = config.get("general", {})
        level = str(general.get("log_level", "INFO")).upper()
        if level not in _LOG_LEVELS:
            log.warning("Unknown log level %r; using INFO", level)
            level = "INFO"
        general["log_level"] = level

    def _apply_environment(self, config: dict) -> dict:
        if os.environ.get(RESOURCE_CAP_ENV):
            config["simulation"]["resource_cap"] = get_resource_cap(config)
        return config

    def _deep_merge(self, base: dict, override: dict) -> dict:
        result = base.copy()
        for key, value in override.items():
            if (
                key in result
                and isinstance(result[key], dict)
                and isinstance(value, dict)
            ):
                result[key] = self._deep_merge(result[key], value)
            else:
                result[key] = value
        return result

    def save(self, config: dict) -> None:
        self._config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self._config_path, "w") as f:
            f.write(self._dict_to_toml(config))

    def get(self, key_path: str, default: object = None) -> object:
        current: object = self.config
        for key in key_path.split("."):
            if isinstance(current, dict) and key in current:
                current = current[key]
            else:
                return default
        return current

    # ------------------------------------------------------------------
    # Minimal TOML writer; settings are flat tables of scalars
    # ------------------------------------------------------------------

    def _dict_to_toml(self, d: dict, prefix: str = "") -> str:
        lines: list[str] = []
        tables: list[tuple[str, dict]] = []
        for key, value in d.items():
            full_key = f"{prefix}.{key}" if prefix else key
            if isinstance(value, dict):
                tables.append((full_key, value))
            else:
                lines.append(f"{key} = {self._toml_value(value)}")

        result = "\n".join(lines)
        for full_key, table in tables:
            result += f"\n[{full_key}]\n" + self._dict_to_toml(table, prefix=full_key)
        return result

    @staticmethod
    def _toml_value(value: object) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, (int, float)):
            return repr(value)
        if isinstance(value, str):
            escaped = value.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        return str(value)

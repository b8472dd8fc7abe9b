from __future__ import annotations

import logging
import os
from typing import Any

import psutil

log = logging.getLogger(__name__)

RESOURCE_CAP_ENV = "BCFB_RESOURCE_CAP"


def parse_resource_cap(raw: str) -> int:
    """Parse a cap written as plain digits or as ``2**k``."""
    text = raw.strip().replace(" ", "")
    if text.startswith("2**"):
        exponent = int(text[3:])
        if exponent < 0 or exponent > 62:
            raise ValueError(f"exponent out of range: {exponent}")
        return 2**exponent
    value = int(text)
    if value < 1:
        raise ValueError(f"resource cap must be positive: {value}")
    return value


# ── active settings ─────────────────────────────────────────────────────


def apply_settings(config: dict) -> None:
    """Install *config* as the settings read by numerics, search and simulation code."""
    global _active
    _active = config
    log.debug("applied settings: %s", sorted(config))


def active_settings() -> dict:
    return _active


def setting(section: str, key: str) -> Any:
    """``[section] key`` from the active settings, falling back to the defaults."""
    table = _active.get(section)
    if isinstance(table, dict) and key in table:
        return table[key]
    return DEFAULT_CONFIG[section][key]


def get_resource_cap(config: dict | None = None) -> int:
    """Resource cap from ``BCFB_RESOURCE_CAP``, else *config*, else the active settings.

    Invalid environment values are logged and ignored.
    """
    raw = os.environ.get(RESOURCE_CAP_ENV, "")
    if raw:
        try:
            return parse_resource_cap(raw)
        except ValueError as exc:
            log.warning("Ignoring invalid %s=%r (%s)", RESOURCE_CAP_ENV, raw, exc)
    source = config if config is not None else _active
    return int(source.get("simulation", {}).get("resource_cap", _DEFAULT_CAP))


def get_memory_cap(config: dict | None = None) -> int:
    """Codebook size limit in stored symbols (``simulation.memory_cap``)."""
    source = config if config is not None else _active
    return int(source.get("simulation", {}).get("memory_cap", _DEFAULT_MEMORY_CAP))


def get_default_eps(config: dict | None = None) -> float:
    source = config if config is not None else _active
    return float(source.get("simulation", {}).get("eps", 0.15))


def get_workers(config: dict | None = None) -> int:
    """Worker count from ``simulation.workers``; 0 means one per logical CPU."""
    source = config if config is not None else _active
    workers = int(source.get("simulation", {}).get("workers", 0))
    if workers > 0:
        return workers
    return psutil.cpu_count(logical=True) or 1


_DEFAULT_CAP = 2**22
_DEFAULT_MEMORY_CAP = 2**27

DEFAULT_CONFIG: dict = {
    "general": {
        "log_file": "~/.local/share/bcfb/bcfb.log",
        "log_level": "INFO",
    },
    "numerics": {
        "tau_norm": 1e-9,
        "tau_num": 1e-9,
        "tau_geo": 1e-9,
        "margin": 1e-6,
        "cap_factor": 2.0,
    },
    "simulation": {
        "eps": 0.15,
        "resource_cap": _DEFAULT_CAP,
        "memory_cap": _DEFAULT_MEMORY_CAP,
        "gamma": 4.0,
        "max_n_single": 80,
        "max_n_block": 20,
        "workers": 0,
    },
    "search": {
        "alpha_steps": 200,
        "refine_rounds": 3,
        "refine_points": 21,
        "max_candidates": 50000,
    },
    "output": {
        "float_digits": 9,
        "directory": "bcfb-out",
    },
}

_active: dict = DEFAULT_CONFIG

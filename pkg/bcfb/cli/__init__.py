from __future__ import annotations

from bcfb.cli.artifacts import ArtifactWriter, config_digest, load_json
from bcfb.cli.commands import (
    COMMANDS,
    EXIT_CHECK_FAILED,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    RunConfig,
    run,
)

__all__ = [
    "COMMANDS",
    "EXIT_CHECK_FAILED",
    "EXIT_CONFIG_ERROR",
    "EXIT_OK",
    "ArtifactWriter",
    "RunConfig",
    "config_digest",
    "load_json",
    "run",
]

"""Reading run configs and writing CSV/JSON/text artifacts."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path

from rich.console import Console
from rich.table import Table

from bcfb.config.defaults import setting
from bcfb.errors import ArgumentError

log = logging.getLogger(__name__)


def load_json(path: str | Path) -> dict:
    """Parse a JSON config file; syntax errors name the line and column."""
    p = Path(path).expanduser()
    try:
        text = p.read_text()
    except OSError as exc:
        raise ArgumentError(f"cannot read config {p}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"{p}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ArgumentError(f"{p}: top-level JSON value must be an object")
    return data


def config_digest(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def fmt(value: object, digits: int | None = None) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if digits is None:
            digits = int(setting("output", "float_digits"))
        return format(value, f".{digits}g")
    return str(value)


class ArtifactWriter:
    """Writes every artifact of one run into ``out_dir``.

    CSV files start with a ``# config_sha256=... seed=...`` comment line
    so a run can be reproduced from the artifact alone.
    """

    def __init__(self, out_dir: str | Path, config: dict, seed: int | None, digits: int | None = None) -> None:
        self.out_dir = Path(out_dir).expanduser()
        self.digest = config_digest(config)
        self.seed = seed
        self.digits = int(setting("output", "float_digits")) if digits is None else digits
        self.written: list[Path] = []

    def _path(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        self.written.append(path)
        return path

    @property
    def header(self) -> str:
        seed = "none" if self.seed is None else str(self.seed)
        return f"# config_sha256={self.digest} seed={seed}"

    def csv(self, name: str, columns: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
        path = self._path(name)
        with open(path, "w", newline="") as f:
            f.write(self.header + "\n")
            writer = csv.writer(f)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([fmt(v, self.digits) for v in row])
        log.debug("wrote %s", path)
        return path

    def text(self, name: str, body: str) -> Path:
        path = self._path(name)
        path.write_text(body if body.endswith("\n") else body + "\n")
        return path

    def json(self, name: str, data: dict) -> Path:
        path = self._path(name)
        path.write_text(json.dumps(data, indent=2) + "\n")
        return path


def render_table(
    console: Console, title: str, columns: Sequence[str], rows: Iterable[Sequence[object]], digits: int = 6
) -> None:
    table = Table(title=title)
    for name in columns:
        table.add_column(name, justify="right")
    for row in rows:
        table.add_row(*(fmt(v, digits) for v in row))
    console.print(table)

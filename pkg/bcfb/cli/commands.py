"""Subcommand bodies: each turns a JSON config into artifacts and an exit status."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from rich.console import Console

from bcfb.channels.catalog import channel_from_json
from bcfb.channels.dueck import noise_law_from_table
from bcfb.cli.artifacts import ArtifactWriter, load_json, render_table
from bcfb.config.defaults import (
    DEFAULT_CONFIG,
    active_settings,
    apply_settings,
    get_default_eps,
    get_resource_cap,
)
from bcfb.errors import ArgumentError
from bcfb.info.pmf import JointPmf
from bcfb.mcsim.harness import ExperimentConfig, run_experiment
from bcfb.mcsim.lemmas import (
    LEMMA_KINDS,
    SUITE_EPS,
    SUITE_N,
    SUITE_TRIALS,
    lemma_experiment,
    lemma_threshold,
    threshold_suite,
)
from bcfb.polytope.region import RateRegion3, sum_rate_max, vertices
from bcfb.regions.blackwell import blackwell_sweep
from bcfb.regions.dueck import compare_dueck
from bcfb.regions.inner import feedback_inner, lgw_inner, marton_region
from bcfb.regions.presplit import PresplitKind, constants_from_joint, fm_check, random_constants
from bcfb.regions.schemes import AuxiliaryScheme, GridSpec, UpdateScheme, induced_joint

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2

COMMANDS: tuple[str, ...] = ("region", "fm-check", "dueck", "blackwell", "simulate", "lemmas")
BOUNDS: tuple[str, ...] = ("marton", "lgw_inner", "lgw_star", "feedback_full", "feedback_star")

BLACKWELL_COLUMNS = ("p", "fb_lower", "nofb_upper", "fb_cutset")
DUECK_COLUMNS = (
    "name", "condition", "markov_chain", "fb_sum", "nofb_sum", "scheme_sum", "gain",
)
SIMULATE_COLUMNS = ("n", "trials", "errors", "error_rate", "fallback_rate")
LEMMA_COLUMNS = ("kind", "rate", "threshold", "n", "trials", "events", "frequency", "method")


@dataclass(slots=True)
class RunConfig:
    """Everything one CLI invocation needs."""

    command: str
    config_path: str | None = None
    out_dir: str = DEFAULT_CONFIG["output"]["directory"]
    seed: int | None = None
    workers: int = 1
    tol: float | None = None
    settings: dict = field(default_factory=lambda: DEFAULT_CONFIG)
    console: Console = field(default_factory=Console)

    def load(self, required: bool = False) -> dict:
        if self.config_path is None:
            if required:
                raise ArgumentError(f"{self.command} needs --config")
            return {}
        return load_json(self.config_path)

    def require_seed(self, data: dict) -> int:
        """``--seed`` wins over the config's ``seed``; stochastic commands need one of them."""
        if self.seed is not None:
            return self.seed
        if "seed" in data:
            try:
                return int(data["seed"])
            except (TypeError, ValueError) as exc:
                raise ArgumentError(f"seed must be an integer, got {data['seed']!r}") from exc
        raise ArgumentError(f"{self.command} is stochastic; pass --seed or set 'seed' in the config")

    def writer(self, data: dict, seed: int | None) -> ArtifactWriter:
        digits = int(self.settings.get("output", {}).get("float_digits", 9))
        return ArtifactWriter(self.out_dir, data, seed, digits)


def format_tol(tol: float) -> str:
    """``1e-09`` written as ``1e-9``."""
    mantissa, exponent = f"{tol:e}".split("e")
    return f"{float(mantissa):g}e{int(exponent)}"


# ── region ──────────────────────────────────────────────────────────────


def evaluate_bound(data: dict) -> RateRegion3:
    """Region named by ``data["bound"]`` for the config's channel and scheme."""
    bound = str(data.get("bound", "feedback_full"))
    if bound not in BOUNDS:
        raise ArgumentError(f"unknown bound {bound!r}; use one of {BOUNDS}")
    try:
        channel = channel_from_json(data["channel"])
        scheme = data["scheme"]
        aux = AuxiliaryScheme.from_json(scheme["aux"])
        upd = UpdateScheme.from_json(scheme["update"]) if "update" in scheme else None
    except KeyError as exc:
        raise ArgumentError(f"region config is missing {exc}") from exc
    if bound == "marton":
        return marton_region(aux, channel)
    if upd is None:
        raise ArgumentError(f"bound {bound!r} needs scheme.update")
    if bound.startswith("lgw"):
        return lgw_inner(upd, induced_joint(aux, None, channel), bound.removeprefix("lgw_"))
    return feedback_inner(aux, upd, channel, bound.removeprefix("feedback_"))


def cmd_region(run: RunConfig) -> int:
    data = run.load(required=True)
    region = evaluate_bound(data).reduced()
    cloud = vertices(region)
    out = run.writer(data, run.seed)
    out.json("region.json", region.to_json())
    out.csv("vertices.csv", ("R0", "R1", "R2"), cloud.points.tolist())
    best = sum_rate_max(region)
    render_table(
        run.console,
        f"{region.label} ({region.orientation.value})",
        ("rows", "vertices", "max R1+R2"),
        [(region.system.n_rows, len(cloud), best.value if best.feasible else float("nan"))],
    )
    return EXIT_OK


# ── fm-check ────────────────────────────────────────────────────────────


def cmd_fm_check(run: RunConfig) -> int:
    """Project each pre-split system and compare with its closed form.

    With a ``channel``/``scheme`` config the constants come from the induced
    joint law; otherwise ``samples`` random constant sets per kind are used.
    """
    data = run.load()
    tol = run.tol if run.tol is not None else float(data.get("tol", 1e-9))
    kinds = [PresplitKind(k) for k in data.get("kinds", [k.value for k in PresplitKind])]
    cases: list[tuple[PresplitKind, str, object]] = []
    seed: int | None = None
    if "scheme" in data:
        channel = channel_from_json(data["channel"])
        aux = AuxiliaryScheme.from_json(data["scheme"]["aux"])
        upd = UpdateScheme.from_json(data["scheme"]["update"]) if "update" in data["scheme"] else None
        for kind in kinds:
            joint = induced_joint(aux, None if kind is PresplitKind.MARTON else upd, channel)
            cases.append((kind, "scheme", constants_from_joint(kind, joint)))
    else:
        seed = run.require_seed(data)
        rng = np.random.default_rng(seed)
        samples = int(data.get("samples", 10))
        for kind in kinds:
            cases.extend((kind, f"random-{s}", random_constants(kind, rng)) for s in range(samples))

    lines = []
    failed = 0
    rows = []
    for kind, source, constants in cases:
        check = fm_check(kind, constants, tol)  # type: ignore[arg-type]
        status = "PASS" if check.passed else "FAIL"
        failed += int(not check.passed)
        lines.append(
            f"{status} region_equal tol={format_tol(tol)} kind={kind.value} source={source} "
            f"rows={check.projected_rows}/{check.closed_rows}"
        )
        rows.append((kind.value, source, status, check.projected_rows, check.closed_rows))
    out = run.writer(data, seed)
    out.text("fm_check.txt", "\n".join(lines))
    render_table(run.console, "Fourier-Motzkin check", ("kind", "source", "result", "projected", "closed"), rows)
    if failed:
        log.error("%d of %d projections differ from the closed form", failed, len(cases))
        return EXIT_CHECK_FAILED
    return EXIT_OK


# ── dueck ───────────────────────────────────────────────────────────────


def _reference_noise_laws() -> dict[str, JointPmf]:
    shared = np.zeros((2, 2, 2))
    shared[0, 0, 0] = shared[0, 1, 1] = 0.5
    independent = np.zeros((2, 2, 2))
    independent[0] = 0.25
    return {"shared": noise_law_from_table(shared), "independent": noise_law_from_table(independent)}


def _noise_law(entry: dict) -> JointPmf:
    if "table" in entry:
        return noise_law_from_table(np.asarray(entry["table"], dtype=float).reshape(2, 2, 2))
    if "noise_law" in entry:
        return JointPmf.from_json(entry["noise_law"])
    raise ArgumentError("each noise law entry needs 'table' or 'noise_law'")


def cmd_dueck(run: RunConfig) -> int:
    data = run.load()
    if "laws" in data:
        laws = {str(e.get("name", f"law-{i}")): _noise_law(e) for i, e in enumerate(data["laws"])}
    else:
        laws = _reference_noise_laws()
    rows = []
    for name, law in laws.items():
        c = compare_dueck(law)
        rows.append((name, c.condition, c.markov_chain, c.fb_sum, c.nofb_sum, c.scheme_sum, c.gain))
    run.writer(data, None).csv("dueck.csv", DUECK_COLUMNS, rows)
    render_table(run.console, "Dueck channel: feedback vs no feedback", DUECK_COLUMNS, rows)
    return EXIT_OK


# ── blackwell ───────────────────────────────────────────────────────────


def _p_values(data: dict) -> list[float]:
    if "ps" in data:
        return [float(p) for p in data["ps"]]
    spec = data.get("p", {"low": 0.0, "high": 0.45, "steps": 19})
    return [float(p) for p in GridSpec.from_json({"p": spec}).axis("p")]


def cmd_blackwell(run: RunConfig) -> int:
    data = run.load()
    grid = GridSpec.from_json(data["grid"]) if "grid" in data else None
    tol = run.tol if run.tol is not None else 1e-9
    bounds = blackwell_sweep(_p_values(data), grid, run.workers)
    rows = [(b.p, b.fb_lower, b.nofb_upper, b.fb_cutset) for b in bounds]
    run.writer(data, None).csv("blackwell.csv", BLACKWELL_COLUMNS, rows)
    render_table(run.console, "Blackwell channel sum rates", BLACKWELL_COLUMNS, rows)
    bad = [b.p for b in bounds if b.fb_lower > b.fb_cutset + tol]
    if bad:
        log.error("feedback lower bound exceeds the cut-set bound at p=%s", bad)
        return EXIT_CHECK_FAILED
    return EXIT_OK


# ── simulate ────────────────────────────────────────────────────────────


def cmd_simulate(run: RunConfig) -> int:
    data = run.load(required=True)
    seed = run.require_seed(data)
    cfg = ExperimentConfig.from_json({**data, "seed": seed})
    rows = [
        (r.n, r.trials, r.errors, r.error_rate, r.fallback_rate)
        for r in run_experiment(cfg, run.workers)
    ]
    run.writer(data, seed).csv("simulate.csv", SIMULATE_COLUMNS, rows)
    render_table(run.console, f"{cfg.kind} simulation", SIMULATE_COLUMNS, rows)
    return EXIT_OK


# ── lemmas ──────────────────────────────────────────────────────────────


def _lemma_entry(entry: dict) -> dict:
    try:
        law = entry["law"]
        return {
            "kind": str(entry["kind"]),
            "law": law if isinstance(law, JointPmf) else JointPmf.from_json(law),
            "rates": [float(r) for r in entry["rates"]],
        }
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ArgumentError):
            raise
        raise ArgumentError(f"malformed lemma entry: {exc!r}") from exc


def cmd_lemmas(run: RunConfig) -> int:
    data = run.load()
    seed = run.require_seed(data)
    if "suite" in data:
        suite = [_lemma_entry(e) for e in data["suite"]]
        default_eps = get_default_eps(run.settings)
    else:
        suite, default_eps = threshold_suite(), SUITE_EPS
    n_list = [int(n) for n in data.get("n_list", SUITE_N)]
    trials = int(data.get("trials", SUITE_TRIALS))
    eps = float(data.get("eps", default_eps))
    cap = get_resource_cap(run.settings)
    streams = np.random.SeedSequence(seed).spawn(len(suite))
    rows = []
    for entry, stream in zip(suite, streams):
        kind = entry["kind"]
        if kind not in LEMMA_KINDS:
            raise ArgumentError(f"unknown lemma kind {kind!r}; use one of {LEMMA_KINDS}")
        threshold = lemma_threshold(kind, entry["law"])
        points = lemma_experiment(
            kind, entry["law"], entry["rates"], n_list, trials, np.random.default_rng(stream), eps, cap
        )
        rate = float(sum(entry["rates"]))
        rows.extend(
            (kind, rate, threshold, p.n, p.trials, p.events, p.frequency, p.method) for p in points
        )
    run.writer(data, seed).csv("lemmas.csv", LEMMA_COLUMNS, rows)
    render_table(run.console, "Covering and packing lemmas", LEMMA_COLUMNS, rows)
    return EXIT_OK


HANDLERS: dict[str, Callable[[RunConfig], int]] = {
    "region": cmd_region,
    "fm-check": cmd_fm_check,
    "dueck": cmd_dueck,
    "blackwell": cmd_blackwell,
    "simulate": cmd_simulate,
    "lemmas": cmd_lemmas,
}


def run(config: RunConfig) -> int:
    handler = HANDLERS.get(config.command)
    if handler is None:
        raise ArgumentError(f"unknown command {config.command!r}; use one of {COMMANDS}")
    log.debug("running %s with %d worker(s), output in %s", config.command, config.workers, Path(config.out_dir))
    previous = active_settings()
    apply_settings(config.settings)
    try:
        return handler(config)
    finally:
        apply_settings(previous)

from __future__ import annotations

import argparse
import logging
import sys


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcfb",
        description="Rate-region workbench for broadcast channels with generalized feedback",
    )
    parser.add_argument("--settings", help="Path to the TOML settings file")
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging")
    parser.add_argument("--log-file", help="Write the log to this file")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    helps = {
        "region": "evaluate an inner bound for a scheme file",
        "fm-check": "compare projected pre-split systems with their closed forms",
        "dueck": "feedback vs no-feedback capacity of Dueck channels",
        "blackwell": "sum-rate bounds of the Blackwell channel over p",
        "simulate": "Monte Carlo error rates of the random coding schemes",
        "lemmas": "covering and packing lemma experiments",
    }
    for name, text in helps.items():
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--config", help="JSON config for the command")
        cmd.add_argument("--out", help="Output directory for artifacts")
        cmd.add_argument("--seed", type=int, help="Seed for stochastic commands")
        cmd.add_argument("--workers", type=int, help="Worker threads (default: one per CPU)")
        cmd.add_argument("--tol", type=float, help="Tolerance for region and bound checks")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    from rich.console import Console
    from rich.markup import escape

    from bcfb.cli.commands import EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR, RunConfig, run
    from bcfb.config.defaults import get_workers
    from bcfb.config.manager import ConfigManager
    from bcfb.errors import BcfbError, DomainError, ResourceError
    from bcfb.utils.logger import setup_logging

    settings = ConfigManager(args.settings).config
    general = settings.get("general", {})
    log_file = args.log_file if args.log_file is not None else str(general.get("log_file", ""))
    setup_logging(log_file, str(general.get("log_level", "INFO")), args.verbose)
    log = logging.getLogger("bcfb")
    err = Console(stderr=True)

    config = RunConfig(
        command=args.command,
        config_path=args.config,
        out_dir=args.out or settings.get("output", {}).get("directory", "bcfb-out"),
        seed=args.seed,
        workers=args.workers if args.workers is not None else get_workers(settings),
        tol=args.tol,
        settings=settings,
    )
    if config.workers < 1:
        err.print(f"[red]error:[/red] --workers must be positive, got {config.workers}")
        return EXIT_CONFIG_ERROR
    try:
        return run(config)
    except ResourceError as exc:
        err.print(f"[red]resource limit:[/red] {escape(str(exc))}")
        return EXIT_CHECK_FAILED
    except DomainError as exc:
        err.print(f"[red]undefined:[/red] {escape(str(exc))}")
        return EXIT_CHECK_FAILED
    except (BcfbError, KeyError, TypeError, ValueError) as exc:
        log.debug("config error", exc_info=True)
        err.print(f"[red]config error:[/red] {escape(str(exc))}")
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``polycell <command> [--config F] [--seed N] [--out DIR] [--preset NAME]``.

Exit codes: 0 success, 2 configuration error, 3 numeric or model error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from polycell.cell.presets import resolve
from polycell.errors import ConfigError, PolycellError
from polycell.pipeline import runner
from polycell.pipeline.config import ObjectiveSource, RunConfig, load_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

log = logging.getLogger("polycell")


def _global_options() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the subcommand from being reset by the
    # subparser's own default
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="TOML run configuration")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for every random stream")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    common.add_argument(
        "--preset", choices=["cubic", "pentagonal", "hexagonal"], default=argparse.SUPPRESS, help="cell preset"
    )
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(prog="polycell", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    sub.add_parser("sweep", parents=[common], help="evaluate the cell model over the (P, T) grid")

    p = sub.add_parser("train", parents=[common], help="train a network on a sweep dataset")
    p.add_argument("dataset", help="dataset CSV written by sweep")

    p = sub.add_parser("fit", parents=[common], help="fit a quadratic surface to a dataset or trained network")
    p.add_argument("input", help="dataset CSV or *.mlp.json")

    p = sub.add_parser("optimize", parents=[common], help="run NSGA-II on the configured objective source")
    p.add_argument("--source", choices=[s.value for s in ObjectiveSource], help="override objective.source")
    p.add_argument("--production", help="production surface or model file")
    p.add_argument("--consumption", help="consumption surface or model file")

    p = sub.add_parser("paper-opt", parents=[common], help="NSGA-II on the published response surfaces")
    p.add_argument("model", choices=["pentagonal", "hexagonal"])

    p = sub.add_parser("polarize", parents=[common], help="polarization curve of the preset")
    p.add_argument("--voltages", help="comma-separated voltages; 'ocv' for open circuit")

    sub.add_parser("pipeline", parents=[common], help="sweep, train, fit and optimize in one directory")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(getattr(args, "config", None))
    if getattr(args, "preset", None):
        cfg = replace(cfg, preset=resolve(args.preset).value)
    if getattr(args, "seed", None) is not None:
        if args.seed < 0 or args.seed >= 2**64:
            raise ConfigError(f"--seed must be in [0, 2^64), got {args.seed}")
        cfg = cfg.with_seed(args.seed)
    return replace(cfg, output_dir=getattr(args, "out", None))


def _parse_voltages(text: str) -> list:
    out = []
    for item in text.split(","):
        item = item.strip()
        if item.lower() == "ocv":
            out.append("ocv")
            continue
        try:
            out.append(float(item))
        except ValueError:
            raise ConfigError(f"invalid voltage {item!r}") from None
    return out


def dispatch(args: argparse.Namespace) -> dict:
    cfg = resolve_config(args)
    out = cfg.output_dir
    if args.command == "sweep":
        return runner.sweep(cfg, out)
    if args.command == "train":
        return runner.train(cfg, args.dataset, out)
    if args.command == "fit":
        return runner.fit(cfg, args.input, out)
    if args.command == "optimize":
        if args.source:
            cfg = replace(cfg, objective=replace(cfg.objective, source=ObjectiveSource(args.source)))
        return runner.optimize(cfg, out, args.production, args.consumption)
    if args.command == "paper-opt":
        return runner.paper_opt(cfg, args.model, out)
    if args.command == "polarize":
        voltages = _parse_voltages(args.voltages) if args.voltages else None
        return runner.polarize(cfg, out, voltages)
    if args.command == "pipeline":
        return runner.pipeline(cfg, out)
    raise ConfigError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        result = dispatch(args)
    except ConfigError as exc:
        print(f"polycell: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"polycell: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except PolycellError as exc:
        print(f"polycell: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(json.dumps(result, indent=1, sort_keys=True, default=str))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

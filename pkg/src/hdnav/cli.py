"""Command-line harness.

Verbs:

- ``hdc-stats``: random-pair similarity statistics at the configured d.
- ``train``: build and verify the object/grid models, then persist them.
- ``run <experiment>``: mission, grid_only, viability, or door_removal
  trial batches against persisted models.
- ``render``: draw one trace record as text or SVG.
- ``verify <model>``: re-run the path verification on a persisted model.

Experiment commands require an explicit ``--seed``.  Errors print one
categorized line to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import experiments, persist, render as render_mod
from .cml import Cml
from .config import ExperimentConfig, apply_overrides, load_config
from .grid import GridCml


class CliError(Exception):
    def __init__(self, category: str, message: str):
        super().__init__(message)
        self.category = category


def _build_config(args) -> ExperimentConfig:
    try:
        config = ExperimentConfig()
        if getattr(args, "config", None):
            config = load_config(args.config, config)
        overrides = {
            "seed": getattr(args, "seed", None),
            "output_dir": getattr(args, "out", None),
            "d": getattr(args, "d", None),
        }
        config = apply_overrides(config, overrides)
        for item in getattr(args, "set", None) or []:
            if "=" not in item:
                raise ValueError(f"--set expects key=value, got {item!r}")
            key, value = item.split("=", 1)
            apply_overrides(config, {key.strip(): value.strip()})
        return config
    except (ValueError, OSError) as exc:
        raise CliError("config", str(exc)) from exc


def _cmd_hdc_stats(args) -> int:
    config = _build_config(args)
    try:
        config.validate()
        config.require_seed()
        report = experiments.run_hdc_stats(config)
    except ValueError as exc:
        raise CliError("config", str(exc)) from exc
    report.write(config.output_dir)
    print("\n".join(report.summary_lines()))
    return 0


def _cmd_train(args) -> int:
    config = _build_config(args)
    try:
        config.validate_for_models()
        config.require_seed()
    except ValueError as exc:
        raise CliError("config", str(exc)) from exc
    try:
        info = experiments.train_and_save(config, which=args.which)
    except RuntimeError as exc:
        raise CliError("verify", str(exc)) from exc
    for kind, details in info.items():
        print(f"{kind}: verified ({details['pairs_checked']} pairs) -> {details['path']}")
    return 0


def _cmd_run(args) -> int:
    config = _build_config(args)
    try:
        config.validate_for_models()
        config.require_seed()
    except ValueError as exc:
        raise CliError("config", str(exc)) from exc
    try:
        object_cml, grid_cml = experiments.load_models(config)
    except (FileNotFoundError, ValueError) as exc:
        raise CliError("models", str(exc)) from exc
    try:
        report = experiments.run_experiment(config, args.experiment, object_cml, grid_cml)
    except ValueError as exc:
        raise CliError("config", str(exc)) from exc
    trials_path, report_path = report.write(config.output_dir)
    print("\n".join(report.summary_lines()))
    print(f"records: {trials_path}")
    print(f"report:  {report_path}")
    return 0


def _cmd_render(args) -> int:
    try:
        records = render_mod.load_trace(args.trace)
    except (OSError, ValueError) as exc:
        raise CliError("trace", str(exc)) from exc
    if not 0 <= args.trial < len(records):
        raise CliError("trace", f"trial {args.trial} out of range (0..{len(records) - 1})")
    try:
        drawing = render_mod.render(records[args.trial], args.style)
    except ValueError as exc:
        raise CliError("trace", str(exc)) from exc
    if args.output:
        Path(args.output).write_text(drawing)
        print(f"wrote {args.output}")
    else:
        print(drawing, end="")
    return 0


def _cmd_verify(args) -> int:
    config = _build_config(args)
    if config.seed is None:
        config.seed = 0  # verification sampling is deterministic by default
    try:
        model = persist.load_model(args.model)
    except (OSError, ValueError) as exc:
        raise CliError("models", str(exc)) from exc
    try:
        if isinstance(model, Cml):
            info = experiments.verify_object_cml(model, config)
        elif isinstance(model, GridCml):
            info = experiments.verify_grid_cml(model, config)
        else:
            raise CliError("models", f"unsupported model type {type(model).__name__}")
    except RuntimeError as exc:
        raise CliError("verify", str(exc)) from exc
    print(f"verified: {info['pairs_checked']} pairs")
    return 0


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="config file of key = value lines")
    parser.add_argument("--seed", type=int, help="root seed (required for experiments)")
    parser.add_argument("--out", help="output directory (default: out)")
    parser.add_argument("--d", type=int, help="hypervector dimension override")
    parser.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override any config field (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdnav",
        description="Hyperdimensional map-learner maze navigation harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_stats = sub.add_parser("hdc-stats", help="random-pair similarity statistics")
    _add_config_flags(p_stats)
    p_stats.set_defaults(func=_cmd_hdc_stats)

    p_train = sub.add_parser("train", help="train, verify, and persist models")
    _add_config_flags(p_train)
    p_train.add_argument("--which", choices=("object", "grid", "both"), default="both")
    p_train.set_defaults(func=_cmd_train)

    p_run = sub.add_parser("run", help="run a seeded experiment batch")
    p_run.add_argument("experiment", choices=experiments.EXPERIMENT_NAMES)
    _add_config_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_render = sub.add_parser("render", help="draw a trial trace")
    p_render.add_argument("--trace", required=True, help="trial JSONL file")
    p_render.add_argument("--style", choices=("text", "svg"), default="text")
    p_render.add_argument("--trial", type=int, default=0)
    p_render.add_argument("--output", help="output file (default: stdout)")
    p_render.set_defaults(func=_cmd_render)

    p_verify = sub.add_parser("verify", help="re-verify a persisted model")
    p_verify.add_argument("model", help="model file path")
    _add_config_flags(p_verify)
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"error[internal]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

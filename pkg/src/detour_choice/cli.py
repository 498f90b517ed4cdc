"""Command-line entry point: ``detour-choice <subcommand>``.

Exit codes: 0 success, 2 missing input file or bad arguments, 1 any
other stage failure. Failures name the stage on standard error; files
written by earlier stages are kept.
"""
from __future__ import annotations

import argparse
import csv
import sys
import warnings
from dataclasses import replace
from importlib import resources
from pathlib import Path

from .config import RunConfig, load_config
from .core import dataset_to_csv, load_dataset, write_dataset
from .mixed import estimate_mixed
from .mpe import MpeTable, mpe_table, parse_levels
from .oracle import SyntheticConfig, generate
from .presets import PUBLISHED, PRESETS, resolve_spec
from .report import render_report, render_result
from .results import read_result, write_result
from .summary import summarize
from .synthesis import attribute_table_csv, build_design_matrix

MPE_ATTRIBUTES = ("cost", "profit", "time")


class StageError(Exception):
    def __init__(self, stage: str, exc: Exception):
        super().__init__(f"{stage}: {exc}")
        self.stage, self.exc = stage, exc


def bundled_dataset() -> Path:
    return Path(str(resources.files("detour_choice") / "data" / "synthetic_249.csv"))


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _emit(text: str, out: str | None) -> None:
    if out:
        _write(Path(out), text)
    else:
        sys.stdout.write(text)


def _dataset(path):
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset not found: {path}")
    return load_dataset(path)


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _mpe_attributes(spec) -> tuple[str, ...]:
    return tuple(a for a in spec.attributes if a in MPE_ATTRIBUTES)


def _fit(X, model: str, mixture: bool, cfg: RunConfig, threads):
    spec = resolve_spec(model, mixture)
    result = estimate_mixed(X, spec, cfg.mixed_options(threads))
    return spec, result


def _result_stem(out_dir: Path, spec_name: str, mixture: bool) -> Path:
    return out_dir / f"{spec_name}_{'mixture' if mixture else 'mnl'}"


# subcommands

def cmd_describe(args, cfg):
    d = _dataset(args.dataset)
    _emit(summarize(d).to_text(), args.out)


def cmd_synthesize(args, cfg):
    d = _dataset(args.dataset)
    _emit(attribute_table_csv(build_design_matrix(d, cfg.net, cfg.scaling)), args.out)


def _read_params(path: str) -> dict[str, float]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"parameter file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or "name" not in rows[0] or "value" not in rows[0]:
        raise ValueError(f"{path}: expected columns 'name' and 'value'")
    return {r["name"]: float(r["value"]) for r in rows}


def cmd_synth(args, cfg):
    spec = resolve_spec(args.spec, args.mixture)
    if args.true_params:
        params = _read_params(args.true_params)
    elif (args.spec, args.mixture) in PUBLISHED:
        params = PUBLISHED[(args.spec, args.mixture)]
    else:
        raise ValueError("--true-params is required for a spec file")
    sc = SyntheticConfig(true_parameters=params, spec=spec, n_obs=args.n, seed=cfg.seed,
                         car_available_count=args.car_available, net=cfg.net, scaling=cfg.scaling)
    d = generate(sc)
    if args.out:
        write_dataset(d, args.out)
    else:
        sys.stdout.write(dataset_to_csv(d))


def cmd_fit(args, cfg):
    d = _dataset(args.dataset)
    X = build_design_matrix(d, cfg.net, cfg.scaling)
    cfg = replace(cfg, n_draws=args.draws or cfg.n_draws, draw_type=args.draw_type or cfg.draw_type)
    spec, result = _fit(X, args.model, args.mixture or cfg.mixture, cfg, args.threads)
    text, _ = render_result(result, cfg.coefficient_decimals)
    if args.out:
        stem = Path(args.out)
        write_result(result, stem)
        _write(stem.with_suffix(".txt") if stem.suffix == ".csv" else
               stem.with_name(stem.name + ".txt"), text)
    sys.stdout.write(text)


def cmd_mpe(args, cfg):
    result = read_result(args.model_result)
    model = args.model or result.model
    if model not in PRESETS and not Path(model).exists():
        raise ValueError(f"result model {model!r} is not a preset; pass --model SPEC_FILE")
    spec = resolve_spec(model, result.mixture)
    d = _dataset(args.dataset)
    X = build_design_matrix(d, cfg.net, cfg.scaling)
    levels = parse_levels(args.levels) if args.levels else cfg.mpe_levels
    table = mpe_table(X, result, spec, _mpe_attributes(spec), levels, threads=args.threads)
    if args.out:
        _write(Path(args.out), table.to_csv())
    sys.stdout.write(table.to_text(cfg.mpe_decimals))


def cmd_report(args, cfg):
    results = [read_result(p) for p in args.results]
    mpes = [MpeTable.read_csv(p) for p in args.mpe or ()]
    text, table = render_report(results, mpes, cfg.coefficient_decimals, cfg.mpe_decimals)
    if args.out:
        stem = Path(args.out)
        _write(stem.with_suffix(".txt"), text)
        _write(stem.with_suffix(".csv"), table)
    else:
        sys.stdout.write(text)


def cmd_run(args, cfg):
    """describe, synthesize, fit, mpe and report in one go."""
    out_dir = Path(args.out_dir or cfg.out_dir)
    dataset = Path(args.dataset) if args.dataset else bundled_dataset()
    mixture = args.mixture or cfg.mixture
    models = tuple(args.model) if args.model else cfg.models

    def stage(name, fn, *a):
        try:
            return fn(*a)
        except FileNotFoundError:
            raise
        except Exception as exc:
            raise StageError(name, exc) from exc

    d = stage("load", _dataset, dataset)
    _write(out_dir / "summary.txt", stage("describe", lambda: summarize(d).to_text()))
    X = stage("synthesize", build_design_matrix, d, cfg.net, cfg.scaling)
    _write(out_dir / "attributes.csv", attribute_table_csv(X))

    results, tables = [], []
    for model in models:
        variants = (False, True) if mixture else (False,)
        for mix in variants:
            spec, result = stage(f"fit {model}", _fit, X, model, mix, cfg, args.threads)
            write_result(result, _result_stem(out_dir, spec.name, mix))
            results.append(result)
            table = stage(f"mpe {model}", mpe_table, X, result, spec, _mpe_attributes(spec),
                          cfg.mpe_levels, False, args.threads)
            _write(Path(str(_result_stem(out_dir, spec.name, mix)) + "_mpe.csv"), table.to_csv())
            tables.append(table)
    text, table = stage("report", render_report, results, tables,
                        cfg.coefficient_decimals, cfg.mpe_decimals)
    _write(out_dir / "report.txt", text)
    _write(out_dir / "report.csv", table)
    sys.stdout.write(f"wrote {out_dir}/report.txt\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="INI run configuration")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker threads (default: $DETOUR_CHOICE_THREADS or 1)")
    common.add_argument("--out-dir", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="detour-choice", parents=[common],
                                description="Crowd-shipping courier mode choice models.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("describe", parents=[common], help="descriptive summary of a dataset")
    s.add_argument("--dataset", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_describe)

    s = sub.add_parser("synthesize", parents=[common], help="attribute table for every mode")
    s.add_argument("--dataset", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_synthesize)

    s = sub.add_parser("synth", parents=[common], help="generate a synthetic dataset")
    s.add_argument("--spec", default="cost-time", help="preset name or spec file")
    s.add_argument("--true-params", help="CSV with columns name,value")
    s.add_argument("--mixture", action="store_true")
    s.add_argument("--n", type=int, default=249)
    s.add_argument("--car-available", type=int, help="exact number of car-available rows")
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("fit", parents=[common], help="estimate a model")
    s.add_argument("--model", default="cost-time", help="cost-time, profit-time or a spec file")
    s.add_argument("--dataset", required=True)
    s.add_argument("--out", help="result path stem")
    s.add_argument("--mixture", action="store_true")
    s.add_argument("--draws", type=int)
    s.add_argument("--draw-type", choices=("halton", "random"))
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("mpe", parents=[common], help="marginal probability effects")
    s.add_argument("--model-result", required=True, help="result path stem written by fit")
    s.add_argument("--dataset", required=True)
    s.add_argument("--model", help="spec file, when the result is not from a preset")
    s.add_argument("--levels", help="comma list of percentages, e.g. --levels=-10,10 "
                   "(default -10,-5,-1,1,5,10)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_mpe)

    s = sub.add_parser("report", parents=[common], help="render fitted results and MPE tables")
    s.add_argument("--results", nargs="+", required=True)
    s.add_argument("--mpe", nargs="*")
    s.add_argument("--out", help="path stem for .txt and .csv")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("run", parents=[common], help="full pipeline")
    s.add_argument("--dataset", help="defaults to the bundled 249-row synthetic sample")
    s.add_argument("--model", action="append", help="repeatable; defaults to both presets")
    s.add_argument("--mixture", action="store_true")
    s.set_defaults(func=cmd_run)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("config", "seed", "threads", "out_dir"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        cfg = _config(args)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            args.func(args, cfg)
    except FileNotFoundError as exc:
        print(f"detour-choice {args.command}: {exc}", file=sys.stderr)
        return 2
    except StageError as exc:
        print(f"detour-choice {args.command}: stage '{exc.stage}' failed: {exc.exc}",
              file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"detour-choice {args.command}: stage '{args.command}' failed: {exc}",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

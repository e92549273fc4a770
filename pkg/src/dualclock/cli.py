"""Command-line front end: ``dualclock {simulate,estimate,identify,demo,sweep}``.

Exit status is 0 on success, 1 on usage or configuration errors and 2 on
numerical failures (rank or domain errors).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .errors import ConfigError, DomainError, RankError, TrialError
from .experiment import (
    DEMO_CONFIG,
    ScenarioConfig,
    dumps_json,
    estimate_report,
    generate,
    run_demo,
    run_sweep,
    summarize,
)
from .estimators import estimate_chin_chen, estimate_corrected
from .identifiability import build_design_matrix, rank_analysis, ridge_scan
from .protocol import dumps_csv, read_csv

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="scenario JSON file")
    common.add_argument("--seed", type=int, help="override the scenario seed")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--format", choices=("json", "csv"), help="output format")

    parser = _Parser(prog="dualclock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("simulate", parents=[common], help="emit a Sync dataset")
    p.add_argument("--with-truth", action="store_true", help="append the t_ref_arrival column")

    p = sub.add_parser("estimate", parents=[common], help="estimate from a dataset CSV")
    p.add_argument("--in", dest="input", type=Path, required=True)

    p = sub.add_parser("identify", parents=[common], help="rank analysis and ridge scan")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--grid-n", type=int, default=101)
    p.add_argument("--d-range", type=float, nargs=2, default=(-0.01, 0.01), metavar=("LO", "HI"))
    p.add_argument("--theta-range", type=float, nargs=2, default=(-0.01, 0.01), metavar=("LO", "HI"))

    sub.add_parser("demo", parents=[common], help="canonical offset-annihilation demonstration")

    p = sub.add_parser("sweep", parents=[common], help="Monte-Carlo sweep")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="FIELD=VALUE",
                   help="override a scenario field (JSON value), repeatable")
    p.add_argument("--workers", type=int, default=1)
    return parser


def _load_config(args, default: ScenarioConfig | None) -> ScenarioConfig | None:
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError("config", str(exc)) from None
        cfg = ScenarioConfig.from_json(text)
    else:
        cfg = default
    if cfg is not None and args.seed is not None:
        cfg = cfg.with_overrides(seed=args.seed)
    return cfg


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out += _flatten(obj[k], f"{prefix}.{k}" if prefix else k)
        return out
    if isinstance(obj, (list, tuple)):
        out = []
        for i, v in enumerate(obj):
            out += _flatten(v, f"{prefix}.{i}")
        return out
    return [(prefix, obj)]


def _dumps_flat_csv(payload: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("key", "value"))
    for k, v in _flatten(json.loads(dumps_json(payload))):
        w.writerow((k, "" if v is None else (format(v, ".17g") if isinstance(v, float) else json.dumps(v))))
    return buf.getvalue()


def _emit(text: str, out: Path | None, name: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.mkdir(parents=True, exist_ok=True)
    with open(out / name, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _read_records(path: Path):
    try:
        return read_csv(path)
    except OSError as exc:
        raise ConfigError("in", str(exc)) from None
    except (ValueError, KeyError) as exc:
        raise ConfigError("in", f"malformed dataset CSV: {exc}") from None


def _cmd_simulate(args) -> None:
    cfg = _load_config(args, DEMO_CONFIG)
    records = generate(cfg)
    if args.format == "json":
        rows = [{"i": r.i, "t_m": r.t_m_i, "t_s1": r.t_s1_i, "t_s2": r.t_s2_i}
                | ({"t_ref_arrival": r.t_arrival} if args.with_truth else {}) for r in records]
        _emit(dumps_json(rows), args.out, "dataset.json")
    else:
        _emit(dumps_csv(records, with_truth=args.with_truth), args.out, "dataset.csv")


def _cmd_estimate(args) -> None:
    cfg = _load_config(args, None)
    report = estimate_report(_read_records(args.input), cfg).to_dict()
    if args.format == "csv":
        _emit(_dumps_flat_csv(report), args.out, "report.csv")
    else:
        _emit(dumps_json(report), args.out, "report.json")


def _cmd_identify(args) -> None:
    records = _read_records(args.input)
    cc = estimate_chin_chen(records)
    co = estimate_corrected(records)
    dm = build_design_matrix(records, (co.epsilon_hat, cc.d_hat, cc.theta_hat), use_both_equations=True, center=True)
    rank_json = rank_analysis(dm).to_json()
    surface = ridge_scan(records, tuple(args.d_range), tuple(args.theta_range), args.grid_n)
    if args.out is not None:
        _emit(rank_json, args.out, "rank.json")
        _emit(surface.to_csv(), args.out, "ridge.csv")
    elif args.format == "csv":
        _emit(surface.to_csv(), None, "")
    else:
        _emit(rank_json, None, "")


def _cmd_demo(args) -> None:
    cfg = _load_config(args, DEMO_CONFIG)
    report = run_demo(cfg)
    sys.stdout.write(summarize(report))
    out = args.out if args.out is not None else Path(".")
    if args.format == "csv":
        _emit(_dumps_flat_csv(report.to_dict()), out, "demo_report.csv")
    else:
        _emit(report.to_json(), out, "demo_report.json")


def _parse_override(text: str) -> dict:
    key, sep, value = text.partition("=")
    if not sep:
        raise ConfigError(key or "set", "expected FIELD=VALUE")
    try:
        parsed = json.loads(value)
    except json.JSONDecodeError:
        parsed = value
    return {key.strip(): parsed}


def _cmd_sweep(args) -> None:
    cfg = _load_config(args, DEMO_CONFIG.with_overrides(sigma1=1e-6, sigma2=1e-6))
    overrides = [_parse_override(s) for s in args.overrides]
    report = run_sweep(cfg, args.trials, overrides, workers=args.workers).to_dict()
    if args.format == "csv":
        _emit(_dumps_flat_csv(report), args.out, "sweep.csv")
    else:
        _emit(dumps_json(report), args.out, "sweep.json")


_COMMANDS = {
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "identify": _cmd_identify,
    "demo": _cmd_demo,
    "sweep": _cmd_sweep,
}


def cli_main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except ConfigError as exc:
        print(f"dualclock: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (RankError, DomainError, TrialError) as exc:
        print(f"dualclock: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main() -> None:
    sys.exit(cli_main())

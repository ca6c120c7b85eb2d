"""Command-line interface.

Subcommands:
  run       simulate one configuration and write metrics/topology CSVs
  sweep     repeat a run while varying one parameter, one metrics file per value
  validate  check a configuration file and exit

Exit codes: 0 ok, 1 usage or configuration error, 2 runtime error.
"""

import argparse
import json
import re
import sys

from .config import apply_override, config_from_dict, load_config
from .engine import run_to_files
from .errors import ConfigError

USAGE_ERROR = 1
RUNTIME_ERROR = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; remap to this tool's usage code
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit((USAGE_ERROR, f"error: {message}"))


def _build_parser() -> _Parser:
    p = _Parser(prog="pullstream", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one configuration")
    run.add_argument("--config", required=True, help="JSON configuration file")
    run.add_argument("--seed", type=int, default=None, help="override run.seed")
    run.add_argument("--out", default=None, help="override run.out_dir")

    sweep = sub.add_parser("sweep", help="repeat runs varying one parameter")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--param", required=True, help="alias (e.g. V) or dotted path (e.g. policy.V)")
    sweep.add_argument("--values", required=True, help="comma-separated values")
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--out", default=None)

    val = sub.add_parser("validate", help="check a configuration file")
    val.add_argument("--config", required=True)
    return p


def _load_raw(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"configuration file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON ({exc})")


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.+-]", "_", text)


def _cmd_run(args) -> int:
    raw = _load_raw(args.config)
    if args.seed is not None:
        apply_override(raw, "run.seed", args.seed)
    if args.out is not None:
        apply_override(raw, "run.out_dir", args.out)
    cfg = config_from_dict(raw)
    paths = run_to_files(cfg)
    for name in sorted(paths):
        print(f"{name}: {paths[name]}")
    return 0


def _cmd_sweep(args) -> int:
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError("--values must list at least one value")
    base = _load_raw(args.config)
    for text in values:
        raw = json.loads(json.dumps(base))
        apply_override(raw, args.param, _parse_value(text))
        if args.seed is not None:
            apply_override(raw, "run.seed", args.seed)
        if args.out is not None:
            apply_override(raw, "run.out_dir", args.out)
        cfg = config_from_dict(raw)
        suffix = f"_{_slug(args.param)}_{_slug(text)}"
        paths = run_to_files(cfg, suffix=suffix)
        print(f"{args.param}={text}: {paths['metrics']}")
    return 0


def _cmd_validate(args) -> int:
    config_from_dict(_load_raw(args.config))
    print(f"{args.config}: ok")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, tuple):
            code, message = exc.code
            print(message, file=sys.stderr)
            return code
        return 0 if exc.code in (0, None) else USAGE_ERROR
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_validate(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


def entry():
    raise SystemExit(main())

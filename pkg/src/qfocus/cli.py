"""Command-line runner: ``qfocus list``, ``qfocus run <scenario>``, ``qfocus verify <model.json>``.

Exit status is 0 when every check passes, 1 when a check fails and 2 on an
input error.
"""

from __future__ import annotations

import argparse
import inspect
import sys
from pathlib import Path

from .groups import NotAGroup, NotAnAction
from .scenarios import SCENARIOS, run_scenario
from .serialize import InputError, load_json, verify_model

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (default 0)")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="override the scenario tolerance")
    common.add_argument("--output", "-o", default=argparse.SUPPRESS, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="include wall-clock runtime (makes output non-reproducible)")

    p = argparse.ArgumentParser(prog="qfocus", parents=[common],
                                description="Finite-instance checks of quantum theory built from focusing and symmetry.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("list", parents=[common], help="list built-in scenarios")
    run = sub.add_parser("run", parents=[common], help="run a built-in scenario")
    run.add_argument("scenario", help="scenario name (see `list`)")
    run.add_argument("--config", help="JSON object of keyword arguments for the scenario")
    ver = sub.add_parser("verify", parents=[common], help="verify a user model file")
    ver.add_argument("model", help="model JSON file")
    return p


def _emit(report, args) -> None:
    fmt = getattr(args, "format", "json")
    text = report.to_csv() if fmt == "csv" else report.to_json(timing=getattr(args, "timing", False)) + "\n"
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _scenario_kwargs(name, args) -> dict:
    kwargs = {}
    cfg = getattr(args, "config", None)
    if cfg:
        cfg = load_json(cfg)
        if not isinstance(cfg, dict):
            raise InputError("scenario config must be a JSON object")
        kwargs.update(cfg)
    accepted = inspect.signature(SCENARIOS[name]).parameters
    if hasattr(args, "tol"):
        if "tol" not in accepted:
            raise InputError(f"scenario {name!r} has no tolerance setting")
        kwargs["tol"] = args.tol
    unknown = set(kwargs) - set(accepted)
    if unknown:
        raise InputError(f"scenario {name!r} does not accept {sorted(unknown)}")
    return kwargs


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    seed = getattr(args, "seed", 0)
    try:
        if args.command == "list":
            for name, fn in SCENARIOS.items():
                doc = (inspect.getdoc(fn) or "").splitlines()
                print(f"{name:14s} {doc[0] if doc else ''}")
            return EXIT_OK
        if args.command == "run":
            if args.scenario not in SCENARIOS:
                raise InputError(f"unknown scenario {args.scenario!r}; try `qfocus list`")
            report = run_scenario(args.scenario, seed=seed, **_scenario_kwargs(args.scenario, args))
        else:
            kw = {"tol": args.tol} if hasattr(args, "tol") else {}
            report = verify_model(args.model, seed=seed, **kw)
    except (InputError, NotAGroup, NotAnAction, TypeError, ValueError, IndexError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(report, args)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

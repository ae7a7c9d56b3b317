"""Command-line entry point: ``brightsqueeze simulate|budget|optimize|verify``."""

from __future__ import annotations

import argparse
import math
import sys

from . import presets
from .emit import FORMATS, emit, write_tables_csv
from .errors import ConfigError, DomainError, InfeasibleError
from .optimizer import SCHEMES, max_power_at_target
from .scenario import config_from_dict, load_config, run_scenario, schema_help
from .spectra import FrequencyGrid
from .timedomain import verify

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_VERIFY = 4
EXIT_IO = 5


def _epilog() -> str:
    lines = ["presets:"]
    for name in presets.PRESET_NAMES:
        lines.append(f"  {name:<8} {presets.preset(name).get('description', '')}")
    lines.append("")
    lines.append("config keys (YAML; units are part of each key):")
    lines.append(schema_help())
    lines.append("")
    lines.append("exit codes: 0 ok, 2 invalid input, 3 infeasible target, 4 verification failed, 5 I/O error")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    p = argparse.ArgumentParser(
        prog="brightsqueeze",
        description="Noise budgets and spectra for intensity-stabilized bright squeezed light.",
        epilog=_epilog(),
        formatter_class=fmt,
    )
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario and write traces", epilog=_epilog(), formatter_class=fmt)
    src = sim.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=presets.PRESET_NAMES)
    src.add_argument("--config", help="YAML scenario file")
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--format", default="csv,json,svg", help="comma separated subset of " + ",".join(FORMATS))

    bud = sub.add_parser("budget", help="print a loss/phase or technical-noise budget", epilog=_epilog(),
                         formatter_class=fmt)
    src = bud.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=("table1", "table2"))
    src.add_argument("--config", help="YAML scenario file with kind budget or loss-phase")

    opt = sub.add_parser("optimize", help="largest output power reaching a squeezing target", epilog=_epilog(),
                         formatter_class=fmt)
    opt.add_argument("--target-squeezing-db", type=float, required=True,
                     help="required squeezing in dB below shot noise (positive number)")
    opt.add_argument("--scheme", choices=SCHEMES, default="passive+active")
    opt.add_argument("--config", help="YAML scenario file (default: the fig2b preset)")
    opt.add_argument("--frequency-hz", type=float, default=None,
                     help="evaluation frequency (default: the config's evaluation_frequency_hz)")

    ver = sub.add_parser("verify", help="check the time-domain loop against the analytic model")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--reps", type=int, default=1)
    return p


def _load(args):
    if getattr(args, "config", None):
        return load_config(args.config)
    return config_from_dict({"preset": args.preset})


def _cmd_simulate(args) -> int:
    formats = [f.strip() for f in args.format.split(",") if f.strip()]
    bad = [f for f in formats if f not in FORMATS]
    if bad or not formats:
        raise ConfigError([("--format", f"unknown format(s) {bad}; choose from {', '.join(FORMATS)}")])
    ts = run_scenario(_load(args))
    for path in emit(ts, args.out, formats):
        print(path)
    for k, v in ts.notes.items():
        if v is not None:
            print(f"{k}: {v:.4g}" if isinstance(v, float) else f"{k}: {v}")
    return EXIT_OK


def _cmd_budget(args) -> int:
    cfg = _load(args)
    if cfg.kind not in ("budget", "loss-phase"):
        raise ConfigError([("kind", "budget needs a config of kind budget or loss-phase")])
    ts = run_scenario(cfg)
    for name, table in ts.tables.items():
        print(f"# {name}")
        write_tables_csv(table, sys.stdout)
    for k, v in ts.notes.items():
        print(f"# {k}: {v:.4g}")
    return EXIT_OK


def _cmd_optimize(args) -> int:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = config_from_dict({"preset": "fig2b"})
    freq = args.frequency_hz or cfg.eval_freq
    FrequencyGrid.single(freq)  # validates
    p = max_power_at_target(args.target_squeezing_db, cfg.chain, args.scheme, freq)
    if math.isinf(p):
        print(f"{args.scheme}: no technical noise, any power reaches {args.target_squeezing_db} dB")
    else:
        print(f"{args.scheme}: max output power {p * 1e3:.6g} mW for {args.target_squeezing_db} dB at {freq:g} Hz")
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = verify(seed=args.seed, reps=args.reps)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_VERIFY


_COMMANDS = {"simulate": _cmd_simulate, "budget": _cmd_budget, "optimize": _cmd_optimize, "verify": _cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print("invalid configuration:", file=sys.stderr)
        for path, msg in exc.problems:
            print(f"  {path}: {msg}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

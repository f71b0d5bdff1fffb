"""Command-line entry point: ``ydgrow <subcommand> ...``.

Experiment subcommands take their settings from ``--config FILE.json`` and
then from flags; a flag that is given always wins.  Exit codes: 0 success,
1 invariant failure, 2 config error, 3 resource error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .engine import StopCondition, run
from .grid import load, dump
from .harness import ConfigError, ExperimentConfig, run_experiment, simulate_trial
from .observables import MemoryBudgetExceeded, NotBracketed
from .render import DEFAULT_SHADE_PERIOD, write_ppm
from .theory import PowerBounds, gamma_bootstrap, m_hat_bootstrap, small_catalog
from .verify import SUITES, verify
from .zeroset import ZeroSetError, parse_zeroset, validate_rule

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3

# flag dest -> ExperimentConfig field
_FIELDS = {
    "zeroset": "zeroset", "rho": "rho", "p": "p", "trials": "trials", "t_max": "t_max",
    "t_max_cap": "t_max_cap", "n": "n", "n_min": "n_min", "n_max": "n_max",
    "boundary": "boundary", "pattern": "pattern", "seed": "master_seed", "threads": "threads",
    "memory_budget": "memory_budget", "strict": "strict", "timing": "timing",
    "csv": "out_csv", "aggregate": "out_aggregate", "json": "out_json",
}


def _experiment_parser(sub, name, help_text):
    sp = sub.add_parser(name, help=help_text)
    sp.add_argument("--config", help="JSON file with ExperimentConfig fields")
    sp.add_argument("--zeroset", help='row widths, bottom first, e.g. "2 1" or "inf 2"')
    sp.add_argument("--rho", type=int)
    sp.add_argument("--p", type=float, nargs="+", help="one value, or a grid for estimate-power")
    sp.add_argument("--trials", type=int)
    sp.add_argument("--t-max", dest="t_max", type=int, help="initial time horizon")
    sp.add_argument("--t-max-cap", dest="t_max_cap", type=int, help="cap for t_max doubling")
    sp.add_argument("--n", type=int, help="box side")
    sp.add_argument("--n-min", dest="n_min", type=int)
    sp.add_argument("--n-max", dest="n_max", type=int)
    sp.add_argument("--boundary", choices=["zero", "periodic"])
    sp.add_argument("--pattern", choices=["random", "packed-strip", "diagonal"])
    sp.add_argument("--seed", type=int, help="master seed")
    sp.add_argument("--threads", type=int)
    sp.add_argument("--memory-budget", dest="memory_budget", type=int, help="bytes per trial")
    sp.add_argument("--strict", action="store_const", const=True,
                    help="reject finite rows wider than rho instead of widening them")
    sp.add_argument("--timing", action="store_const", const=True,
                    help="fill the wall_ms column (makes CSVs run-dependent)")
    sp.add_argument("--csv", help="per-trial CSV output")
    sp.add_argument("--aggregate", help="aggregate CSV output")
    sp.add_argument("--json", help="JSON summary output")
    return sp


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ydgrow", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"ydgrow {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = _experiment_parser(sub, "simulate", "run configurations to fixation or t_max")
    sim.add_argument("--dump", help="write the final state of trial 0 (grid dump format)")
    sim.add_argument("--ppm", help="write a PPM snapshot of trial 0")
    sim.add_argument("--shade-period", type=int, default=DEFAULT_SHADE_PERIOD)
    _experiment_parser(sub, "estimate-t", "median first-occupation time per p")
    _experiment_parser(sub, "estimate-lc", "critical length per p")
    _experiment_parser(sub, "estimate-power", "fit the power of T against 1/p")
    _experiment_parser(sub, "density", "mean final density")

    rd = sub.add_parser("render", help="render a grid dump as a PPM image")
    rd.add_argument("input", help="grid dump file")
    rd.add_argument("output", help="PPM file to write")
    rd.add_argument("--zeroset", help="if given with --rho, run the dynamics before rendering")
    rd.add_argument("--rho", type=int)
    rd.add_argument("--t-max", dest="t_max", type=int)
    rd.add_argument("--shade-period", type=int, default=DEFAULT_SHADE_PERIOD)

    vf = sub.add_parser("verify", help="run the invariant suites")
    vf.add_argument("--suite", action="append", choices=list(SUITES),
                    help="run only this suite (repeatable)")
    vf.add_argument("--scale", type=float, default=1.0, help="multiply default instance counts")
    vf.add_argument("--seed", type=int, default=0)

    th = sub.add_parser("theory", help="print closed-form power tables")
    th.add_argument("--format", choices=["text", "csv"], default="text")
    return ap


def _config_from_args(args) -> ExperimentConfig:
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    for dest, name in _FIELDS.items():
        value = getattr(args, dest, None)
        if value is not None:
            data[name] = value
    data["experiment"] = args.command
    for key in ("zeroset", "rho"):
        if key not in data:
            raise ConfigError(f"missing required setting {key!r}")
    return ExperimentConfig.from_dict(data)


def _print_result(result):
    for a in result.aggregates:
        parts = [f"p={a.p!r}"]
        for key in ("n", "trials", "uncensored", "median_T", "t_max", "successes",
                    "estimate", "density", "n_star"):
            v = getattr(a, key)
            if v is not None:
                parts.append(f"{key}={v}")
        if a.ci_low is not None:
            parts.append(f"ci=[{a.ci_low:.4f}, {a.ci_high:.4f}]")
        print(" ".join(parts))
    if result.fit and result.fit.get("slope") is not None:
        print(f"slope={result.fit['slope']:.4f} stderr={result.fit['stderr']:.4f}")
    elif result.fit and "reason" in result.fit:
        print(f"no fit: {result.fit['reason']}")


def cmd_experiment(args) -> int:
    config = _config_from_args(args)
    result = run_experiment(config)
    _print_result(result)
    if args.command == "simulate" and (args.dump or args.ppm):
        state, _ = simulate_trial(config, config.p[0], 0)
        if args.dump:
            with open(args.dump, "w") as fh:
                dump(state, fh)
        if args.ppm:
            write_ppm(args.ppm, state, args.shade_period)
    return EXIT_OK


def cmd_render(args) -> int:
    with open(args.input) as fh:
        state = load(fh)
    if (args.zeroset is None) != (args.rho is None):
        raise ConfigError("--zeroset and --rho go together")
    if args.zeroset is not None:
        rule = validate_rule(parse_zeroset(args.zeroset), args.rho)
        state.check_torus(rule.rho)
        run(state, rule, StopCondition(until_fixed=True, t_max=args.t_max))
    write_ppm(args.output, state, args.shade_period)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify(args.suite, seed=args.seed, scale=args.scale)
    print(report.text())
    return EXIT_OK if report.ok else EXIT_INVARIANT


def theory_tables():
    """``(bootstrap rows, catalog rows)`` as lists of string lists with headers."""
    boot = [["r", "gamma_c", "m_hat"]]
    for r in range(1, 21):
        boot.append([str(r), str(gamma_bootstrap(r).value), str(m_hat_bootstrap(r))])
    cat = [["zeroset", "fits_3x3", "power", "kind", "source", "note"]]
    for e in small_catalog():
        pw = e.powers
        if isinstance(pw, PowerBounds):
            val, kind, src, note = f"[{pw.lower.value}, {pw.upper.value}]", "bounds", pw.lower.source, ""
        else:
            val, kind, src, note = str(pw.value), pw.kind.value, pw.source, pw.note
        cat.append([str(e.zero_set), "yes" if e.fits_3x3 else "no", val, kind, src, note])
    return boot, cat


def _aligned(rows) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def cmd_theory(args) -> int:
    boot, cat = theory_tables()
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["# bootstrap"])
        w.writerows(boot)
        w.writerow(["# catalog"])
        w.writerows(cat)
        sys.stdout.write(buf.getvalue())
    else:
        print("bootstrap percolation")
        print(_aligned(boot))
        print()
        print("small zero-sets")
        print(_aligned(cat))
    return EXIT_OK


_COMMANDS = {
    "simulate": cmd_experiment,
    "estimate-t": cmd_experiment,
    "estimate-lc": cmd_experiment,
    "estimate-power": cmd_experiment,
    "density": cmd_experiment,
    "render": cmd_render,
    "verify": cmd_verify,
    "theory": cmd_theory,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ZeroSetError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (MemoryBudgetExceeded, MemoryError, NotBracketed) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

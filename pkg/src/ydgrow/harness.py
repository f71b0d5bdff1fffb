"""Experiment configuration, Monte Carlo sweeps and result files.

Per-trial rows go to a CSV with a fixed, versioned column set and per-``p``
summaries to a second CSV with its own header.  The JSON summary echoes the
config next to the aggregates and holds the power fit and wall-clock time.

Trial ``i`` always uses ``splitmix64(master_seed ^ i)``, independently of
``p``, so different ``p`` values share (coupled) random fields and output is
identical for any thread count.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional, Union

from . import seeds
from .engine import StopCondition, StopReason, run
from .grid import Boundary, Configuration
from .observables import (
    DEFAULT_MEMORY_BUDGET,
    CensoredTime,
    censored_median,
    critical_length,
    first_occupation_time,
    wilson_interval,
)
from .parallel import parallel_map
from .rng import bernoulli_field, trial_seed
from .theory import power_fit
from .zeroset import (Rule, ZeroSetError, format_zeroset, parse_zeroset, validate_rule,
                      zeroset_from_json)

__all__ = [
    "EXPERIMENTS",
    "TRIAL_SCHEMA",
    "AGGREGATE_SCHEMA",
    "ConfigError",
    "ExperimentConfig",
    "TrialRow",
    "AggregateRow",
    "ExperimentResult",
    "run_experiment",
    "simulate_trial",
    "write_trials_csv",
    "read_trials_csv",
    "write_aggregate_csv",
    "read_aggregate_csv",
]

EXPERIMENTS = ("estimate-t", "estimate-lc", "estimate-power", "density", "simulate")
PATTERNS = ("random", "packed-strip", "diagonal")
TRIAL_SCHEMA = "ydgrow-trials/1"
AGGREGATE_SCHEMA = "ydgrow-aggregate/1"


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    zeroset: Union[str, list]
    rho: int
    p: List[float] = field(default_factory=lambda: [0.05])
    trials: Optional[int] = None  # 200 per probe for estimate-lc, else 100
    t_max: int = 64
    t_max_cap: int = 1 << 16
    n: Optional[int] = None
    n_min: int = 8
    n_max: int = 4096
    boundary: str = "zero"
    pattern: str = "random"
    master_seed: int = 0
    threads: Optional[int] = None
    memory_budget: int = DEFAULT_MEMORY_BUDGET
    strict: bool = False
    timing: bool = False
    out_csv: Optional[str] = None
    out_aggregate: Optional[str] = None
    out_json: Optional[str] = None

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        data = dict(data)
        if "p" in data and not isinstance(data["p"], (list, tuple)):
            data["p"] = [data["p"]]
        try:
            cfg = cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        return asdict(self)

    def rule(self) -> Rule:
        try:
            if isinstance(self.zeroset, str):
                z = parse_zeroset(self.zeroset)
            else:
                z = zeroset_from_json({"rows": list(self.zeroset)})
            return validate_rule(z, int(self.rho), strict=self.strict)
        except ZeroSetError as exc:
            raise ConfigError(f"invalid rule: {exc}") from None

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}")
        self.rule()
        self.p = [float(p) for p in self.p]
        if not self.p:
            raise ConfigError("at least one p value is required")
        if any(not 0.0 < p <= 1.0 for p in self.p):
            raise ConfigError("p values must lie in (0, 1]")
        if self.experiment == "estimate-power":
            if len(self.p) < 3:
                raise ConfigError("estimate-power needs at least 3 p values")
            if any(b >= a for a, b in zip(self.p, self.p[1:])):
                raise ConfigError("estimate-power needs a strictly decreasing p grid")
        if self.trials is None:
            self.trials = 200 if self.experiment == "estimate-lc" else 100
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not 1 <= self.t_max <= self.t_max_cap:
            raise ConfigError("need 1 <= t_max <= t_max_cap")
        if self.t_max_cap > 2**31 - 2:
            raise ConfigError("t_max_cap must fit the 32-bit birth-time plane")
        try:
            Boundary(self.boundary)
        except ValueError:
            raise ConfigError(f"boundary must be 'zero' or 'periodic', got {self.boundary!r}") from None
        if self.experiment in ("density", "simulate") and (self.n is None or self.n < 1):
            raise ConfigError(f"{self.experiment} needs a positive box size n")
        if self.experiment == "estimate-lc" and not 1 <= self.n_min < self.n_max:
            raise ConfigError("estimate-lc needs 1 <= n_min < n_max")
        if self.pattern not in PATTERNS:
            raise ConfigError(f"pattern must be one of {PATTERNS}")
        if self.boundary == "periodic" and self.n is not None and self.n < 2 * self.rho + 1:
            raise ConfigError(f"periodic box needs n >= 2*rho+1 = {2 * self.rho + 1}")
        if self.memory_budget < 1:
            raise ConfigError("memory_budget must be positive")


# result rows


@dataclass
class TrialRow:
    experiment: str
    zeroset: Union[str, list]
    rho: int
    boundary: str
    p: float
    n: Optional[int]
    trial: int
    seed: int
    T: Optional[int]
    censored: bool
    t_max: Optional[int]
    wall_ms: Optional[float] = None


@dataclass
class AggregateRow:
    experiment: str
    zeroset: Union[str, list]
    rho: int
    boundary: str
    p: float
    n: Optional[int] = None
    trials: int = 0
    uncensored: Optional[int] = None
    median_T: Optional[float] = None
    t_max: Optional[int] = None
    successes: Optional[int] = None
    estimate: Optional[float] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    density: Optional[float] = None
    n_star: Optional[int] = None
    slope: Optional[float] = None
    slope_stderr: Optional[float] = None
    intercept: Optional[float] = None


TRIAL_COLUMNS = [f.name for f in fields(TrialRow)]
AGGREGATE_COLUMNS = [f.name for f in fields(AggregateRow)]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    trials: List[TrialRow]
    aggregates: List[AggregateRow]
    fit: Optional[dict] = None
    wall_seconds: float = 0.0

    def summary(self) -> dict:
        return {
            "schema": {"trials": TRIAL_SCHEMA, "aggregate": AGGREGATE_SCHEMA},
            "config": self.config.to_dict(),
            "aggregates": [asdict(a) for a in self.aggregates],
            "fit": self.fit,
            "wall_seconds": self.wall_seconds,
        }


# CSV I/O


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(value: str, kind: str):
    if value == "":
        return None
    if kind == "bool":
        return value == "1"
    if kind == "int":
        return int(value)
    if kind == "float":
        return float(value)
    return value


_KINDS = {
    "rho": "int", "n": "int", "trial": "int", "seed": "int", "T": "int", "t_max": "int",
    "trials": "int", "uncensored": "int", "successes": "int", "n_star": "int",
    "censored": "bool",
    "p": "float", "wall_ms": "float", "median_T": "float", "estimate": "float",
    "ci_low": "float", "ci_high": "float", "density": "float", "slope": "float",
    "slope_stderr": "float", "intercept": "float",
}


def _write_csv(rows, columns, schema) -> str:
    buf = io.StringIO()
    buf.write(f"# {schema}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        d = asdict(row)
        writer.writerow([_fmt(d[c]) for c in columns])
    return buf.getvalue()


def _read_csv(text: str, cls, columns, schema):
    lines = text.splitlines()
    if not lines or lines[0].strip() != f"# {schema}":
        raise ValueError(f"missing schema header '# {schema}'")
    reader = csv.reader(lines[1:])
    header = next(reader)
    if header != columns:
        raise ValueError(f"unexpected columns {header}")
    out = []
    for rec in reader:
        out.append(cls(**{c: _parse(v, _KINDS.get(c, "str")) for c, v in zip(columns, rec)}))
    return out


def write_trials_csv(rows: List[TrialRow], path=None) -> str:
    text = _write_csv(rows, TRIAL_COLUMNS, TRIAL_SCHEMA)
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def read_trials_csv(text: str) -> List[TrialRow]:
    return _read_csv(text, TrialRow, TRIAL_COLUMNS, TRIAL_SCHEMA)


def write_aggregate_csv(rows: List[AggregateRow], path=None) -> str:
    text = _write_csv(rows, AGGREGATE_COLUMNS, AGGREGATE_SCHEMA)
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def read_aggregate_csv(text: str) -> List[AggregateRow]:
    return _read_csv(text, AggregateRow, AGGREGATE_COLUMNS, AGGREGATE_SCHEMA)


# experiment drivers


class _Ctx:
    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.rule = config.rule()
        self.zs = format_zeroset(self.rule.zero_set)

    def trial_row(self, p, n, trial, T, censored, t_max, wall_ms=None, boundary=None):
        return TrialRow(
            self.config.experiment, self.zs, self.rule.rho, boundary or self.config.boundary,
            p, n, trial, trial_seed(self.config.master_seed, trial), T, censored, t_max,
            wall_ms if self.config.timing else None,
        )

    def aggregate(self, p, **kw):
        return AggregateRow(self.config.experiment, self.zs, self.rule.rho,
                            kw.pop("boundary", self.config.boundary), p, **kw)


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, (time.perf_counter() - t0) * 1000.0


def _times_for_p(ctx: _Ctx, p: float):
    """First-occupation times for every trial at one ``p`` with t_max doubling.

    Only censored trials are rerun; uncensored values cannot change when the
    horizon grows because the initial field is site-addressable.
    """
    cfg = ctx.config
    results: List[Optional[CensoredTime]] = [None] * cfg.trials
    walls = [0.0] * cfg.trials
    pending = list(range(cfg.trials))
    t_max = cfg.t_max
    while True:
        def one(i, t_max=t_max):
            return _timed(first_occupation_time, ctx.rule, p, t_max,
                          trial_seed(cfg.master_seed, i), cfg.memory_budget)

        for i, (res, ms) in zip(pending, parallel_map(one, pending, cfg.threads)):
            results[i] = res
            walls[i] += ms
        if censored_median(results) is not None or t_max >= cfg.t_max_cap:
            break
        t_max = min(2 * t_max, cfg.t_max_cap)
        pending = [i for i, r in enumerate(results) if r.censored]
    return results, walls, t_max


def _run_times(ctx: _Ctx):
    cfg = ctx.config
    trials, aggs, medians = [], [], []
    for p in cfg.p:
        results, walls, t_final = _times_for_p(ctx, p)
        for i, (res, ms) in enumerate(zip(results, walls)):
            # the emulation box is fixed by t_max, so n stays blank
            trials.append(ctx.trial_row(p, None, i, res.value, res.censored, res.t_max, ms, "zero"))
        med = censored_median(results)
        medians.append((p, med))
        aggs.append(ctx.aggregate(
            p, boundary="zero", trials=len(results),
            uncensored=sum(not r.censored for r in results), median_T=med, t_max=t_final,
        ))
    fit = None
    if cfg.experiment == "estimate-power":
        usable = [(p, m) for p, m in medians if m is not None and m > 0]
        if len(usable) >= 3:
            pf = power_fit(usable)
            fit = {"slope": pf.slope, "intercept": pf.intercept, "stderr": pf.stderr,
                   "points": [list(u) for u in usable]}
            for a in aggs:
                a.slope, a.slope_stderr, a.intercept = pf.slope, pf.stderr, pf.intercept
        else:
            fit = {"slope": None, "reason": "fewer than 3 uncensored medians", "points": usable}
    return trials, aggs, fit


def _run_lc(ctx: _Ctx):
    cfg = ctx.config
    trials, aggs, fit = [], [], {"n_star": {}}
    for p in cfg.p:
        log = {}
        est = critical_length(ctx.rule, p, cfg.trials, cfg.n_min, cfg.n_max, cfg.master_seed,
                              threads=cfg.threads, trial_log=log)
        for n, k, m in sorted(est.probe_points):
            for i, (ok, t) in enumerate(log[n]):
                trials.append(ctx.trial_row(p, n, i, t, not ok, None, boundary="zero"))
            lo, hi = wilson_interval(k, m)
            aggs.append(ctx.aggregate(p, boundary="zero", n=n, trials=m, successes=k,
                                      estimate=k / m, ci_low=lo, ci_high=hi, n_star=est.n_star))
        fit["n_star"][repr(p)] = est.n_star
    return trials, aggs, fit


def _initial_config(ctx: _Ctx, p: float, seed: int) -> Configuration:
    cfg = ctx.config
    n = cfg.n
    if cfg.pattern == "random":
        return Configuration.from_array(bernoulli_field(seed, p, 0, 0, n, n), cfg.boundary)
    if cfg.pattern == "packed-strip":
        return seeds.packed_strip(ctx.rule, n, boundary=cfg.boundary)
    if cfg.pattern == "diagonal":
        return seeds.diagonal_nucleus(max(ctx.rule.zero_set.height, 1), n, boundary=cfg.boundary)


def _fixation_trial(ctx: _Ctx, p: float, trial: int):
    cfg = ctx.config
    limit = cfg.t_max if cfg.experiment == "simulate" else None
    c = _initial_config(ctx, p, trial_seed(cfg.master_seed, trial))
    c.check_torus(ctx.rule.rho)
    return c, run(c, ctx.rule, StopCondition(until_fixed=True, t_max=limit))


def simulate_trial(config: ExperimentConfig, p: float, trial: int = 0):
    """Replay one simulate/density trial; returns ``(final configuration, Outcome)``."""
    config.validate()
    if config.experiment not in ("simulate", "density"):
        raise ConfigError("simulate_trial needs a simulate or density config")
    return _fixation_trial(_Ctx(config), p, trial)


def _run_fixation(ctx: _Ctx):
    cfg = ctx.config
    trials, aggs = [], []
    limit = cfg.t_max if cfg.experiment == "simulate" else None
    for p in cfg.p:
        def one(i, p=p):
            (_, out), ms = _timed(_fixation_trial, ctx, p, i)
            return out, ms

        outs = parallel_map(one, range(cfg.trials), cfg.threads)
        dens = []
        for i, (out, ms) in enumerate(outs):
            fixed = out.stop_reason is StopReason.FIXED
            # time of the last change; the observation step is not counted
            t = out.stop_time - 1 if fixed else out.stop_time
            trials.append(ctx.trial_row(p, cfg.n, i, t, not fixed, limit, ms))
            dens.append(out.final_density)
        aggs.append(ctx.aggregate(p, n=cfg.n, trials=len(outs), density=sum(dens) / len(dens),
                                  t_max=limit))
    return trials, aggs, None


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run one configured experiment and write whichever outputs are configured."""
    config.validate()
    ctx = _Ctx(config)
    t0 = time.perf_counter()
    if config.experiment in ("estimate-t", "estimate-power"):
        trials, aggs, fit = _run_times(ctx)
    elif config.experiment == "estimate-lc":
        trials, aggs, fit = _run_lc(ctx)
    else:
        trials, aggs, fit = _run_fixation(ctx)
    trials.sort(key=lambda r: (r.p, -1 if r.n is None else r.n, r.trial))
    aggs.sort(key=lambda a: (a.p, a.n if a.n is not None else -1))
    result = ExperimentResult(config, trials, aggs, fit, time.perf_counter() - t0)
    if config.out_csv:
        write_trials_csv(trials, config.out_csv)
    if config.out_aggregate:
        write_aggregate_csv(aggs, config.out_aggregate)
    if config.out_json:
        with open(config.out_json, "w") as fh:
            json.dump(result.summary(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return result

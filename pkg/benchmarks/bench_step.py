"""Compare the compiled and pure-Python step kernels.

    python benchmarks/bench_step.py --sizes 256 512 1024 --repeat 3

Each case runs one random configuration to fixation (or ``--t-max``) on
every available backend, checks the final states agree, and prints the
best wall time per backend.
"""

import argparse
import time

import numpy as np

from ydgrow.engine import StopCondition, _BACKENDS, run, step
from ydgrow.grid import Configuration
from ydgrow.zeroset import bootstrap, line, validate_rule

CASES = {
    "bootstrap(2)/rho=2": (bootstrap(2), 2),
    "line(2,2)/rho=2": (line(2, 2), 2),
    "line(3,2)/rho=4": (line(3, 2), 4),
}


def bench(rule, n, p, t_max, backend, repeat, seed):
    rng = np.random.default_rng(seed)
    occ = rng.random((n, n)) < p
    best, final = float("inf"), None
    for _ in range(repeat):
        cfg = Configuration.from_array(occ)
        t0 = time.perf_counter()
        run(cfg, rule, StopCondition(until_fixed=True, t_max=t_max),
            stepper=lambda c, r: step(c, r, backend=backend))
        best = min(best, time.perf_counter() - t0)
        final = cfg
    return best, final


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[128, 256, 512])
    ap.add_argument("--p", type=float, default=0.02)
    ap.add_argument("--t-max", type=int, default=None)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    backends = sorted(_BACKENDS)
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':<22}{'n':>6}" + "".join(f"{b + ' [s]':>14}" for b in backends) + f"{'speedup':>10}")
    for name, (z, rho) in CASES.items():
        rule = validate_rule(z, rho)
        for n in args.sizes:
            times, states = {}, {}
            for b in backends:
                times[b], states[b] = bench(rule, n, args.p, args.t_max, b, args.repeat, args.seed)
            ref = states[backends[0]]
            assert all(s.same_state(ref) for s in states.values()), "backends disagree"
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            row = "".join(f"{times[b]:>14.4f}" for b in backends)
            print(f"{name:<22}{n:>6}{row}{speed:>9.1f}x")


if __name__ == "__main__":
    main()

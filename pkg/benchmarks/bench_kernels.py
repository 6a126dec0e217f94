"""Compare the compiled and pure-Python mod-p kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [--primes 10007,100003,1000003]

Both backends are run on the same sextics and their outputs are checked for
agreement before timings are reported.
"""
from __future__ import annotations

import argparse
import random
import statistics
import time

from pix.kernels import available_backends

KERNELS = ("count_points", "roots", "first_smooth_z")


def sextic(rng: random.Random, p: int) -> list[int]:
    return [rng.randrange(p) for _ in range(6)] + [rng.randrange(1, p)]


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--primes", default="10007,100003,1000003")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled kernel not built; only the python backend is available")
    rng = random.Random(args.seed)
    rows = []
    for p in (int(x) for x in args.primes.split(",")):
        f = sextic(rng, p)
        for name in KERNELS:
            results = {b: getattr(mod, name)(f, p) for b, mod in backends.items()}
            if len({repr(r) for r in results.values()}) != 1:
                raise SystemExit(f"backends disagree on {name} at p={p}: {results}")
            t = {b: best_of(lambda m=mod: getattr(m, name)(f, p), args.repeat) for b, mod in backends.items()}
            rows.append((name, p, t))

    header = f"{'kernel':<16}{'p':>10}{'python s':>12}{'compiled s':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    speedups = []
    for name, p, t in rows:
        py = t["python"]
        cc = t.get("compiled")
        if cc is None:
            print(f"{name:<16}{p:>10}{py:>12.4f}{'-':>12}{'-':>10}")
            continue
        s = py / cc if cc > 0 else float("inf")
        speedups.append(s)
        print(f"{name:<16}{p:>10}{py:>12.4f}{cc:>12.4f}{s:>9.1f}x")
    if speedups:
        print(f"\ngeometric mean speedup: {statistics.geometric_mean(speedups):.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Time the numba kernels against the plain numpy / Python fallbacks.

Each backend runs in its own interpreter because the switch (EMK_NO_JIT) is
read at import.  Compilation happens in a warm-up call that is not timed.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import json
import os
import subprocess
import sys

CASES = r"""
import json, sys, time
import numpy as np
from emk import _accel, kernels
from emk.core import SetFamily
from emk.exactsolve import BlockerInstance, cover_number, matching_number, solve_blocker
from emk.search import e_exact

repeat = int(sys.argv[1])
g = np.random.default_rng(0)
masks = g.integers(0, 1 << 62, size=200_000, dtype=np.int64)
queries = g.integers(0, 1 << 16, size=2_000, dtype=np.int64)
pool = g.integers(0, 1 << 16, size=2_000, dtype=np.int64)
indicator = g.random(1 << 18) < 0.001
packing = SetFamily(20, g.integers(1, 1 << 20, size=300).tolist())
covering = SetFamily(18, [x for x in SetFamily.uniform(18, 3) if g.random() < 0.05])

cases = {
    "popcount 200k masks": lambda: kernels.popcount(masks),
    "count_disjoint 2k x 2k": lambda: kernels.count_disjoint(queries, pool),
    "subset_closure n=18": lambda: kernels.subset_closure(indicator, 18),
    "matching_number 300 sets on [20]": lambda: matching_number(packing),
    "cover_number 3-sets on [18]": lambda: cover_number(covering),
    "blocker (3,3,1)": lambda: solve_blocker(BlockerInstance(3, 3, 1)),
    "e(5, 2)": lambda: e_exact(5, 2),
}
out = {"jit": _accel.USE_NUMBA, "seconds": {}}
for name, fn in cases.items():
    fn()  # warm-up (compiles under numba)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    out["seconds"][name] = best
print(json.dumps(out))
"""


def measure(no_jit: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("EMK_NO_JIT", None)
    if no_jit:
        env["EMK_NO_JIT"] = "1"
    res = subprocess.run([sys.executable, "-c", CASES, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jit = measure(False, args.repeat)
    plain = measure(True, args.repeat)
    if not jit["jit"]:
        print("numba unavailable: both columns use the fallback", file=sys.stderr)
    width = max(len(k) for k in jit["seconds"])
    print(f"{'case':<{width}}  {'numba s':>10}  {'fallback s':>10}  {'speedup':>8}")
    for name, t_jit in jit["seconds"].items():
        t_plain = plain["seconds"][name]
        print(f"{name:<{width}}  {t_jit:>10.4f}  {t_plain:>10.4f}  {t_plain / t_jit:>7.1f}x")


if __name__ == "__main__":
    main()

"""Glauber sampler throughput: numba kernels vs the plain-Python fallback.

Each mode runs in its own interpreter because the switch (QDIMER_NO_JIT) is
read at import time.  Both modes consume the same random stream, so the final
tilings must coincide; the script checks that.

    python benchmarks/bench_mcmc.py --side 10 --steps 200000
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = """
import hashlib, json, sys, time
from qdimer import kernels
from qdimer.lattice import hexagon
from qdimer.sampler import GlauberChain
from qdimer.tilings import TilingSpace
side, steps, seed = map(int, sys.argv[1:4])
space = TilingSpace(hexagon(side, side, side))
chain = GlauberChain(space, 1.0, seed)
chain.run(1000)  # triggers compilation when numba is on
t = time.perf_counter()
chain.run(steps)
dt = time.perf_counter() - t
print(json.dumps({"jit": kernels.JIT_ENABLED, "seconds": dt, "volume": chain.volume,
                  "digest": hashlib.sha1(chain.arr.tobytes()).hexdigest()}))
"""


def run_mode(no_jit: bool, side: int, steps: int, seed: int) -> dict:
    env = dict(os.environ)
    if no_jit:
        env["QDIMER_NO_JIT"] = "1"
    else:
        env.pop("QDIMER_NO_JIT", None)
    out = subprocess.run([sys.executable, "-c", WORKER, str(side), str(steps), str(seed)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--side", type=int, default=10)
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    t0 = time.perf_counter()
    jit = run_mode(False, args.side, args.steps, args.seed)
    py = run_mode(True, args.side, args.steps, args.seed)
    print(f"H({args.side},{args.side},{args.side}), {args.steps} steps, seed {args.seed}")
    for name, r in (("numba", jit), ("fallback", py)):
        rate = args.steps / r["seconds"] if r["seconds"] else float("inf")
        print(f"  {name:8s} {r['seconds']:8.3f}s  {rate:12.0f} steps/s  volume {r['volume']}")
    print(f"  speed-up {py['seconds'] / jit['seconds']:.1f}x")
    same = jit["digest"] == py["digest"] and jit["volume"] == py["volume"]
    print(f"  identical final tiling: {same}  (total {time.perf_counter() - t0:.1f}s)")
    if not same:
        sys.exit(1)


if __name__ == "__main__":
    main()

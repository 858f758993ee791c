"""Compare the compiled and pure-Python kernels.

Each backend runs in its own interpreter (the choice is made at import time).

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, timeit
from abmod import kernels, Rank3Example, Epair, J, dual, E, jet_isomorphism, ext_dims
from abmod.coefficients import gq

rng = random.Random(0)
rows = [{c: gq(rng.randint(-9, 9), rng.randint(-3, 3)) for c in rng.sample(range(64), 8)} for _ in range(60)]
series = [gq(rng.randint(-9, 9), rng.randint(-3, 3)) / rng.randint(1, 5) for _ in range(200)]
series[0] = gq(1)
half = gq(1) / 2

cases = {
    "nullspace 60x64": lambda: kernels.nullspace(rows, 64),
    "cauchy product n=200": lambda: kernels.cauchy_product(series, series, 200),
    "series reciprocal n=200": lambda: kernels.series_reciprocal(series, 200),
    "jet iso J(4) order 5": lambda: jet_isomorphism(dual(J(4, half, N=12)), J(4, -half - 3, N=12), 5),
    "jet iso Epair order 8": lambda: jet_isomorphism(dual(Epair(half, 1, N=12)), Epair(0, half, N=12), 8),
    "ext dims E0,E2": lambda: ext_dims(E(0, N=24), E(2, N=24)),
}
out = {"backend": kernels.BACKEND}
for name, fn in cases.items():
    out[name] = min(timeit.repeat(fn, number=1, repeat=REPEAT))
print(json.dumps(out))
"""


def run(pure, repeat):
    env = {**os.environ, "ABMOD_PURE_PYTHON": "1" if pure else "0"}
    code = f"REPEAT = {repeat}\n" + WORKLOAD
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    compiled, pure = run(False, args.repeat), run(True, args.repeat)
    if compiled["backend"] != "cython":
        print("compiled kernels are not built; both columns use the pure-Python backend")
    print(f"{'case':28} {'compiled s':>11} {'python s':>10} {'speedup':>8}")
    for name in pure:
        if name == "backend":
            continue
        c, p = compiled[name], pure[name]
        print(f"{name:28} {c:11.4f} {p:10.4f} {p / c:8.2f}")


if __name__ == "__main__":
    main()

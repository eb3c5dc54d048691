"""Time the compiled kernels against the numpy fallback.

    python bench/bench_kernels.py [--repeat 5] [--skip-run]

Prints one line per kernel with both timings and the speed-up, after
checking the two backends return the same numbers.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from mobopc import _fallback
from mobopc.cone import build_basis, parse_preference
from mobopc.hypervolume import ImprovementTables

try:
    from mobopc import _kernels as compiled
except ImportError:
    compiled = None


def cases(rng):
    m = 3
    pts = rng.uniform(0, 1, size=(30, m))
    tables = ImprovementTables(pts, rng.uniform(0, 1, 30), np.zeros(m))
    shape = tuple(int(s) for s in tables.shape)
    upper = np.column_stack([rng.integers(0, s, size=30) for s in shape]).astype(np.intp)
    factors = rng.uniform(0, 1, 30)
    samples = rng.uniform(-0.1, 1.2, size=(500, m))
    bases = [build_basis(parse_preference("0>1", m)), build_basis(parse_preference("2>1", m))]
    gens = np.stack([b.generators for b in bases])
    grads = rng.normal(size=(1000, 2, m))
    return {
        "dominance_products (31^3 grid, 30 pts)": ("dominance_products", (upper, factors, shape)),
        "box_integrals (500 samples, m=3)": (
            "box_integrals", (tables.tables, tables.shape, tables.axes, tables.offsets, samples)),
        "sperp_mask (1000 rounds, n=2, 2 cones)": ("sperp_mask", (grads, gens, 1e-9)),
    }


_RUN = """
import time
from mobopc.optimizer import RunConfig, run
start = time.perf_counter()
run(RunConfig("schaffer_n1", 5, ("0>1",), seed=0))
print(time.perf_counter() - start)
"""


def end_to_end():
    """Wall time of a short Schaffer run under each backend, in fresh interpreters."""
    out = {}
    for label, flag in (("python", "1"), ("compiled", "0")):
        env = dict(os.environ, MOBOPC_PURE_PYTHON=flag)
        res = subprocess.run([sys.executable, "-c", _RUN], env=env, capture_output=True, text=True, check=True)
        out[label] = float(res.stdout.split()[-1])
    return out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-run", action="store_true", help="only time the kernels")
    args = parser.parse_args()
    if compiled is None:
        print("compiled extension not available; nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':42s} {'python':>10s} {'compiled':>10s} {'speed-up':>9s}")
    for label, (name, call_args) in cases(rng).items():
        py_fn, c_fn = getattr(_fallback, name), getattr(compiled, name)
        a = np.asarray(py_fn(*call_args), dtype=float).reshape(-1)
        b = np.asarray(c_fn(*call_args), dtype=float).reshape(-1)
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-14)
        number = 20
        t_py = min(timeit.repeat(lambda: py_fn(*call_args), number=number, repeat=args.repeat)) / number
        t_c = min(timeit.repeat(lambda: c_fn(*call_args), number=number, repeat=args.repeat)) / number
        print(f"{label:42s} {t_py * 1e3:8.3f}ms {t_c * 1e3:8.3f}ms {t_py / t_c:8.1f}x")
    if not args.skip_run:
        t = end_to_end()
        label = "schaffer run, 5 + 5 iterations"
        print(f"{label:42s} {t['python']:9.2f}s {t['compiled']:9.2f}s {t['python'] / t['compiled']:8.1f}x")


if __name__ == "__main__":
    main()

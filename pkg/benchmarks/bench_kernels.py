"""Time the numba kernels against their numpy twins, then a full search with and without JIT.

Run with ``python3 benchmarks/bench_kernels.py``.  The end-to-end part launches the
CLI in two subprocesses because the kernel choice is fixed at import time.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import tempfile
import time
import timeit

import numpy as np

from paulisynth import _kernels as K
from paulisynth.heuristics.common import RP_TAB, SCORE_TAB, VALID_TAB
from paulisynth.io import generate_random_word, write_hamiltonian


def _arrays(rng, rows, n):
    x = rng.integers(0, 2, (rows, n), dtype=np.uint8)
    z = rng.integers(0, 2, (rows, n), dtype=np.uint8)
    s = rng.integers(0, 2, rows, dtype=np.uint8)
    return x, z, s


def _cases(rows, n, seed):
    rng = np.random.default_rng(seed)
    x, z, s = _arrays(rng, rows, n)
    occ = (x | z).astype(np.uint8)
    dist = rng.integers(0, 6, (n, n)).astype(np.int64)
    support = np.arange(n, dtype=np.int64)
    return {
        "conjugate(CX)": lambda f: f(x, z, s, K.GATE_CX, 0, 1),
        "anticommute": lambda f: f(x, z),
        "pair_histogram": lambda f: f(x, z, 0, 1),
        "row_distance": lambda f: f(occ, dist),
        "block_scores": lambda f: f(x, z, 0, support, SCORE_TAB, RP_TAB, VALID_TAB),
    }, {
        "conjugate(CX)": (K.conjugate_np, K.conjugate_nb),
        "anticommute": (K.anticommute_np, K.anticommute_nb),
        "pair_histogram": (K.pair_histogram_np, K.pair_histogram_nb),
        "row_distance": (K.row_distance_np, K.row_distance_nb),
        "block_scores": (K.block_scores_np, K.block_scores_nb),
    }


def _best_us(call, fn, repeat):
    call(fn)  # compile / warm
    number = max(1, repeat)
    return min(timeit.repeat(lambda: call(fn), number=number, repeat=5)) / number * 1e6


def bench_kernels(rows, n, repeat, seed):
    calls, fns = _cases(rows, n, seed)
    print(f"kernels on {rows} rows x {n} qubits (best of 5, microseconds per call)")
    print(f"{'kernel':<16}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for name, call in calls.items():
        f_np, f_nb = fns[name]
        t_np = _best_us(call, f_np, repeat)
        if K.HAVE_NUMBA:
            t_nb = _best_us(call, f_nb, repeat)
            print(f"{name:<16}{t_np:>12.1f}{t_nb:>12.1f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<16}{t_np:>12.1f}{'n/a':>12}{'':>10}")


def bench_search(n, k, iterations, seed):
    with tempfile.TemporaryDirectory() as tmp:
        src = os.path.join(tmp, "h.txt")
        write_hamiltonian(src, generate_random_word(n, k, 0.5, seed=seed))
        cmd = [sys.executable, "-m", "paulisynth", "synth", src, "--iterations", str(iterations), "--mode", "modify"]
        print(f"\nend-to-end search: n={n}, {k} strings, {iterations} iterations")
        outputs = {}
        for label, flag in (("numba", "0"), ("numpy", "1")):
            env = dict(os.environ, PAULISYNTH_NO_JIT=flag)
            subprocess.run(cmd[:-4] + ["--iterations", "1"], env=env, capture_output=True, check=True)
            t0 = time.perf_counter()
            res = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
            outputs[label] = res.stdout
            print(f"{label:<8}{time.perf_counter() - t0:>8.2f}s wall")
        print("outputs identical:", outputs["numba"] == outputs["numpy"])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=64)
    ap.add_argument("--qubits", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--iterations", type=int, default=50)
    ap.add_argument("--strings", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-search", action="store_true")
    args = ap.parse_args(argv)
    bench_kernels(args.rows, args.qubits, args.repeat, args.seed)
    if not args.skip_search:
        bench_search(args.qubits, args.strings, args.iterations, args.seed)


if __name__ == "__main__":
    main()

"""Compare the numba and numpy rank-mod-p kernels.

Two workloads: random dense matrices over F_p, and the specialized differentials of a real
coHochschild complex.  Each timing is the best of --repeat runs; numba is warmed up first so
compilation is excluded.

    python3 benchmarks/bench_rank.py [--sizes 100 200 400] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from qshuffle.bimodule import ShuffleBimodule
from qshuffle.cartan import CartanDatum, WeightSpec
from qshuffle.exact.field import make_field
from qshuffle.exact.modular import DEFAULT_PRIME, HAVE_NUMBA, rank_mod_p_dense, specialization_points, specialize
from qshuffle.homology.cohochschild import block_contents, cohochschild_block


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def random_workload(sizes, repeat, seed):
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        a = rng.integers(0, DEFAULT_PRIME, size=(n, n), dtype=np.int64)
        a[:, n // 2] = a[:, 0]  # force a rank drop
        t_np, r_np = best_of(lambda: rank_mod_p_dense(a, DEFAULT_PRIME, "numpy")[0], repeat)
        row = {"case": f"random {n}x{n}", "rank": r_np, "numpy_s": t_np}
        if HAVE_NUMBA:
            t_nb, r_nb = best_of(lambda: rank_mod_p_dense(a, DEFAULT_PRIME, "numba")[0], repeat)
            assert r_nb == r_np, "backends disagree"
            row["numba_s"] = t_nb
        rows.append(row)
    return rows


def complex_workload(repeat, t_max):
    model = ShuffleBimodule(CartanDatum.of_type("A", 2), make_field(), WeightSpec((1, 0)))
    p, q0 = specialization_points(model.field, 1)[0]
    mats = []
    for Z in block_contents(model, 2, t_max):
        blk = cohochschild_block(model, Z, 2)
        mats.extend(specialize(M, p, q0) for M in blk.diffs.values() if M.nrows and M.ncols)
    cells = sum(a.size for a in mats)

    def run(backend):
        return sum(rank_mod_p_dense(a, p, backend)[0] for a in mats)

    t_np, r_np = best_of(lambda: run("numpy"), repeat)
    row = {"case": f"sl3 M_2 cobar differentials, t<={t_max} ({len(mats)} matrices, {cells} cells)",
           "rank": r_np, "numpy_s": t_np}
    if HAVE_NUMBA:
        t_nb, r_nb = best_of(lambda: run("numba"), repeat)
        assert r_nb == r_np, "backends disagree"
        row["numba_s"] = t_nb
    return [row]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tmax", type=int, default=4, help="truncation for the complex workload")
    args = ap.parse_args(argv)
    if HAVE_NUMBA:
        rank_mod_p_dense(np.eye(3, dtype=np.int64), DEFAULT_PRIME, "numba")  # compile
    rows = random_workload(args.sizes, args.repeat, args.seed) + complex_workload(args.repeat, args.tmax)
    print(f"{'case':64s} {'rank':>6s} {'numpy s':>9s} {'numba s':>9s} {'speedup':>8s}")
    for r in rows:
        nb = r.get("numba_s")
        speed = f"{r['numpy_s'] / nb:8.1f}" if nb else "     n/a"
        nbs = f"{nb:9.4f}" if nb else "      n/a"
        print(f"{r['case']:64s} {r['rank']:6d} {r['numpy_s']:9.4f} {nbs} {speed}")


if __name__ == "__main__":
    main()

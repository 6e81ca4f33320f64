#!/usr/bin/env python3
"""Time the numba kernels against their pure-numpy fallbacks.

Usage:
    python benchmarks/bench_kernels.py

Run without TOPOCHAIN_NO_NUMBA so both paths are importable; the script
reports per-call times and the speedup, and checks both paths agree.
"""

import time

import numpy as np

from topochain import _kernels as K


def _time(fn, *args, repeat=5, number=1):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            result = fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best, result


def bench_ql(n, reps):
    rng = np.random.default_rng(0)
    d0 = rng.normal(size=n)
    e0 = rng.normal(size=n - 1)

    def solve(impl):
        out = None
        for _ in range(reps):
            d = d0.copy()
            e = np.zeros(n)
            e[: n - 1] = e0
            z = np.eye(n)
            impl(d, e, z)
            out = d
        return out

    rows = []
    if K.HAVE_NUMBA:
        solve(K._ql_numba)  # compile before timing
        t_nb, r_nb = _time(solve, K._ql_numba)
        rows.append(("numba", t_nb, r_nb))
    t_np, r_np = _time(solve, K._ql_numpy)
    rows.append(("numpy", t_np, r_np))
    return rows


def bench_rk4(n_sites, t_final, max_step):
    period = 100.0
    table = np.array(
        [
            [K.FORM_COS, 1.0, -1.0, 2 * np.pi / period, 0.0],
            [K.FORM_CONST, 1.0, 0.0, 0.0, 0.0],
            [K.FORM_SIN, 0.0, 1.0, 2 * np.pi / period, 0.0],
        ]
    )
    pat_diag = np.zeros((3, n_sites))
    pat_off = np.zeros((3, n_sites - 1))
    pat_off[0, 0::2] = 1.0
    pat_off[1, 1::2] = 1.0
    pat_diag[2, 0::2] = 1.0
    pat_diag[2, 1::2] = -1.0
    psi0 = np.zeros(n_sites, dtype=np.complex128)
    psi0[0] = 1.0
    times = np.linspace(0.0, t_final, 21)
    args = (table, 1.0 / period, pat_diag, pat_off, psi0, times, max_step)
    rows = []
    if K.HAVE_NUMBA:
        K._rk4_numba(*args)  # compile before timing
        t_nb, r_nb = _time(K._rk4_numba, *args, repeat=3)
        rows.append(("numba", t_nb, r_nb))
    t_np, r_np = _time(K._rk4_numpy, *args, repeat=3)
    rows.append(("numpy", t_np, r_np))
    return rows


def _print_table(title, rows, unit=1e3, unit_name="ms"):
    print(f"\n{title}")
    base = None
    for name, t, _ in rows:
        line = f"  {name:>6}: {t * unit:10.3f} {unit_name}"
        if name == "numpy" and base is not None:
            line += f"   (numba speedup {t / base:.1f}x)"
        if name == "numba":
            base = t
        print(line)
    if len(rows) == 2:
        diff = np.abs(rows[0][2] - rows[1][2]).max()
        print(f"  paths agree to {diff:.2e}")


def main():
    print(f"kernel path active: {K.ACTIVE_PATH}")
    if not K.HAVE_NUMBA:
        print("numba unavailable or disabled; timing the numpy path only")
    _print_table("tridiagonal QL, n=14, 2000 solves", bench_ql(14, 2000))
    _print_table("tridiagonal QL, n=200, 20 solves", bench_ql(200, 20))
    _print_table(
        "RK4 pump, 14 sites, T=100, dt=0.005 (20k steps)",
        bench_rk4(14, 100.0, 0.005),
    )
    _print_table(
        "RK4 trimer-sized chain, 21 sites, T=200, dt=0.002 (100k steps)",
        bench_rk4(21, 200.0, 0.002),
    )


if __name__ == "__main__":
    main()

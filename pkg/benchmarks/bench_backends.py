"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat 5]

Both backends get identical inputs; the script checks that they agree and
prints the best-of-N wall time of each hot loop and of two end-to-end
workloads (a batch of E_{k,l} and an n = 6 matching enumeration).
"""
import argparse
import time

import numpy as np

from kasteleyn import _backend, _pykernels, aztec, kernels, quadrature
from kasteleyn.analytic import ModelParams

try:
    from kasteleyn import _ckernels
except ImportError:
    _ckernels = None


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def swap_backend(mod):
    _backend.power_sums = mod.power_sums
    _backend.transfer_step = mod.transfer_step


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled backend not built; nothing to compare")
        return

    p = ModelParams(0.5)
    table = quadrature.circle_table(p.c, 4096)
    ks = np.arange(1, 81, dtype=np.int64)
    ls = ks + 2
    sh = np.zeros(len(ks))
    args_ps = (table.logg, table.logg1, table.weight, ks, ls, sh)
    a = _pykernels.power_sums(*args_ps)
    b = _ckernels.power_sums(*args_ps)
    print(f"power_sums max rel diff: {np.max(np.abs(a - b) / np.abs(a)):.2e}")

    rows = [("power_sums 80 x 4096",
             best(lambda: _pykernels.power_sums(*args_ps), args.repeat),
             best(lambda: _ckernels.power_sums(*args_ps), args.repeat))]

    g = aztec.build_aztec(6, 1.0)
    q = quadrature.QuadratureSpec()
    kk = np.arange(-30, 31, 2)
    ll = np.full(len(kk), 40)

    def e2e():
        quadrature.circle_table.cache_clear()
        kernels.ekl_many_scaled(kk, ll, p, q)

    timings = {}
    for name, mod in (("python", _pykernels), ("cython", _ckernels)):
        swap_backend(mod)
        z = aztec._transfer(g)
        timings[name] = (best(e2e, args.repeat), best(lambda: aztec._transfer(g), args.repeat), z)
    print(f"enumeration n=6 a=1: python {timings['python'][2]:.0f}, "
          f"cython {timings['cython'][2]:.0f}")
    rows.append(("E_{k,l} batch of 31 (l = 40)", timings["python"][0], timings["cython"][0]))
    rows.append(("matching enumeration n = 6", timings["python"][1], timings["cython"][1]))

    print(f"{'workload':32s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, tp, tc in rows:
        print(f"{name:32s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}")


if __name__ == "__main__":
    main()

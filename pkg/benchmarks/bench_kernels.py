"""Time the float search kernels and one minima sweep under both backends.

    python benchmarks/bench_kernels.py [--repeat 200]
"""

import argparse
import time

import numpy as np

from gonlab import kernels
from gonlab.exponents import cf_value, golden_cf_terms
from gonlab.lattice import ThetaMatrix, theta_lattice
from gonlab.minima import successive_minima
from gonlab.params import TauVector


def _time(fn, repeat):
    fn()  # warm up (includes jit compilation)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()

    rng = np.random.default_rng(7)
    c = rng.normal(size=6)
    G = rng.normal(size=(6, 3))
    A = rng.normal(size=(4, 4))
    R = np.linalg.qr(A)[1]
    radius2 = 4.0 * float(np.abs(np.diag(R)).max()) ** 2
    lat = theta_lattice(ThetaMatrix(1, 1, ((cf_value(golden_cf_terms(30)),),)))

    backends = ["numpy"] + (["numba"] if kernels.NUMBA_AVAILABLE else [])
    print(f"{'kernel':<18}" + "".join(f"{b:>14}" for b in backends))
    rows = {
        "cheb_min": lambda: kernels.cheb_min(c, G),
        "enumerate_short": lambda: kernels.enumerate_short(R, radius2, 10_000),
        "minima d=2 s=12": lambda: successive_minima(lat, TauVector([-12, 12])),
    }
    for name, fn in rows.items():
        cells = []
        for b in backends:
            kernels.set_backend(b)
            reps = args.repeat if name != "minima d=2 s=12" else max(1, args.repeat // 20)
            cells.append(f"{_time(fn, reps) * 1e6:>11.1f} us")
        print(f"{name:<18}" + "".join(cells))


if __name__ == "__main__":
    main()

"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_backends.py [--repeat 5] [--qubits 10]
"""

import argparse
import timeit

import numpy as np

from su2search import _backend
from su2search.kernel import build_kernel
from su2search.su2 import PhasePair, SearchGeometry


def cases(qubits):
    rng = np.random.default_rng(7)
    g = build_kernel(PhasePair(2.1, 1.3), SearchGeometry(0.4, 0.2))
    gs = np.array([build_kernel(PhasePair(*rng.uniform(0.1, 6.1, 2)), SearchGeometry(0.4)) for _ in range(256)])
    vs = rng.normal(size=(256, 2)) + 1j * rng.normal(size=(256, 2))
    n = 1 << qubits
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    v /= np.linalg.norm(v)
    e_phi, e_theta = np.exp(1.7j), np.exp(2.3j)
    return {
        "power2 m=10000": lambda impl: _backend.power2(g, 10000, impl=impl),
        "apply_power2_batch 256x m=200": lambda impl: _backend.apply_power2_batch(gs, vs, 200, impl=impl),
        f"fwht n={qubits}": lambda impl: _backend.fwht(v, impl=impl),
        f"walsh_search n={qubits} m=25": lambda impl: _backend.walsh_search(v, 3, 0, e_phi, e_theta, 25, impl=impl),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--qubits", type=int, default=10)
    args = parser.parse_args()

    impls = [name for name in ("python", "cython") if _backend.IMPLEMENTATIONS.get(name) is not None]
    print(f"active backend: {_backend.BACKEND}")
    print(f"{'case':34s}" + "".join(f"{name:>12s}" for name in impls) + ("     speedup" if len(impls) == 2 else ""))
    for label, fn in cases(args.qubits).items():
        times = [min(timeit.repeat(lambda: fn(name), number=1, repeat=args.repeat)) for name in impls]
        line = f"{label:34s}" + "".join(f"{t * 1e3:10.3f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()

"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--sites 8 12 16 20] [--repeat 20]

Both paths are called directly from ``hardy_lab._accel``, so the env flag
is irrelevant here. Compilation happens in a warm-up call outside the timer.
"""
import argparse
import sys
import timeit

import numpy as np

from hardy_lab import _accel, circuit


def _state(m, rng):
    v = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
    return v / np.linalg.norm(v)


def cases(m, rng):
    psi = _state(m, rng)
    gate = np.array([[0.6, -0.8], [0.8, 0.6]], dtype=np.complex128)
    site = m // 2 + 1
    controls = list(range(1, m))
    return {
        "1q gate": (lambda: _accel.apply_1q_numpy(psi, m, site, gate),
                    lambda: _accel.apply_1q_numba(psi, m, site, gate)),
        "mcx": (lambda: _accel.mcx_numpy(psi, m, controls, m),
                lambda: _accel.mcx_numba(psi, m, controls, m)),
        "popcount": (lambda: _accel.popcount_numpy(m),
                     lambda: _accel.popcount_numba(m)),
    }


def best(fn, repeat):
    fn()  # warm-up / compile
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sites", type=int, nargs="+", default=[8, 12, 16, 20])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    if _accel.nb is None:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':<10}{'sites':>6}{'numpy [ms]':>13}{'numba [ms]':>13}{'speedup':>9}")
    for m in args.sites:
        for name, (np_fn, nb_fn) in cases(m, rng).items():
            t_np, t_nb = best(np_fn, args.repeat), best(nb_fn, args.repeat)
            print(f"{name:<10}{m:>6}{t_np * 1e3:>13.3f}{t_nb * 1e3:>13.3f}{t_np / t_nb:>9.2f}")
    # end to end: one full-cd circuit per size, through whichever path the env flag selected
    for n in (6, 12, 18):
        spec = circuit.build_circuit_for_A(n, 0.9, circuit.FULL_CD)
        t = best(lambda: circuit.run_exact(spec), max(3, args.repeat // 4))
        print(f"full-cd circuit n={n:<3} {t * 1e3:9.3f} ms  (numba={'on' if _accel.USE_NUMBA else 'off'})")
    return 0


if __name__ == "__main__":
    sys.exit(main())

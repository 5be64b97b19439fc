"""Time the numba kernels against the numpy fallback on representative inputs.

    python3 benchmarks/bench_kernels.py [--repeat N] [--quick]

Both backends are imported directly, so the RELAYRATE_DISABLE_JIT flag does
not matter here. The first numba call (compilation or cache load) is excluded.
"""

import argparse
import itertools
import statistics
import time

import numpy as np

from relayrate.kernels import _numpy as numpy_backend

try:
    from relayrate.kernels import _numba as numba_backend
except ImportError:
    numba_backend = None


def random_pmf_arrays(rng, L, alphabet):
    alph = np.full(L, alphabet, dtype=np.int64)
    symbols = np.array(list(itertools.product(range(alphabet), repeat=L)), dtype=np.int64)
    probs = rng.dirichlet(np.ones(len(symbols)))
    return symbols, probs, alph


def boxed_lp(rng, n, m):
    A = rng.uniform(-1.0, 2.0, size=(m - n, n))
    x0 = rng.uniform(0.0, 5.0, size=n)
    b = A @ x0 - rng.uniform(0.0, 1.0, size=m - n)
    A = np.vstack([A, -np.eye(n), np.eye(n)])
    b = np.concatenate([b, -5.0 * np.ones(n), np.zeros(n)])
    return np.ascontiguousarray(A), b


def workloads(quick):
    rng = np.random.default_rng(0)
    L_ent, alph = (7, 3) if quick else (9, 3)
    symbols, probs, alphabets = random_pmf_arrays(rng, L_ent, alph)
    L_atoms = 14 if quick else 18
    H = rng.uniform(0.0, 10.0, size=1 << L_atoms)
    G, g = boxed_lp(rng, 4 if quick else 5, 16 if quick else 24)
    T = rng.uniform(-1.0, 1.0, size=(60, 120))
    return [
        (f"subset_entropies L={L_ent} |A|={alph}", "subset_entropies", (symbols, probs, alphabets)),
        (f"atoms_from_entropies L={L_atoms}", "atoms_from_entropies", (H, L_atoms)),
        (f"basic_solutions n={G.shape[1]} rows={G.shape[0]}", "basic_solutions", (G, g, 0, 1e-9)),
        ("pivot 60x120 (x200)", "pivot_loop", (T,)),
    ]


def _pivot_loop(mod):
    def run(T):
        W = T.copy()
        for k in range(200):
            row, col = k % W.shape[0], (7 * k) % W.shape[1]
            if abs(W[row, col]) > 1e-6:
                mod.pivot(W, row, col)
        return W

    return run


def resolve(mod, name):
    return _pivot_loop(mod) if name == "pivot_loop" else getattr(mod, name)


def best_time(fn, args, repeat):
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - start)
    return min(samples), statistics.median(samples)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--quick", action="store_true", help="smaller inputs")
    args = parser.parse_args()

    print(f"{'kernel':<38} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}")
    for label, name, call_args in workloads(args.quick):
        np_fn = resolve(numpy_backend, name)
        np_best, _ = best_time(np_fn, call_args, args.repeat)
        if numba_backend is None:
            print(f"{label:<38} {np_best * 1e3:>12.3f} {'n/a':>12} {'':>9}")
            continue
        nb_fn = resolve(numba_backend, name)
        nb_fn(*call_args)  # compile or load from cache
        nb_best, _ = best_time(nb_fn, call_args, args.repeat)
        ref, got = np_fn(*call_args), nb_fn(*call_args)
        agree = np.allclose(np.asarray(ref), np.asarray(got), atol=1e-9) if np.shape(ref) == np.shape(got) else False
        flag = "" if agree else "  (outputs differ!)"
        print(f"{label:<38} {np_best * 1e3:>12.3f} {nb_best * 1e3:>12.3f} {np_best / nb_best:>8.1f}x{flag}")


if __name__ == "__main__":
    main()

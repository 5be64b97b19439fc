"""Both kernel backends must agree; numba is optional."""

import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from relayrate import kernels
from relayrate.kernels import _numpy as npk

from .conftest import random_pmf
from .oracles import all_entropies

nbk = pytest.importorskip("relayrate.kernels._numba")
BACKENDS = [pytest.param(npk, id="numpy"), pytest.param(nbk, id="numba")]


def _arrays(pmf):
    sym = np.array([s for s, _ in pmf.entries], dtype=np.int64)
    p = np.array([q for _, q in pmf.entries])
    return sym, p, np.array(pmf.alphabet_sizes, dtype=np.int64)


@pytest.mark.parametrize("backend", BACKENDS)
def test_subset_entropies_match_dict_oracle(backend, rng):
    for L in (1, 2, 3, 4):
        pmf = random_pmf(rng, L)
        H = backend.subset_entropies(*_arrays(pmf))
        ref = all_entropies(pmf.entries, L)
        assert np.allclose(H, [ref[m] for m in range(1 << L)], atol=1e-12)


@pytest.mark.parametrize("backend", BACKENDS)
def test_streaming_path_for_huge_sub_alphabets(backend):
    # 5000 x 5000 joint alphabet exceeds the dense-table cap
    sym = np.array([[0, 0], [4999, 1], [17, 4999], [17, 0]], dtype=np.int64)
    p = np.array([0.25, 0.25, 0.25, 0.25])
    alph = np.array([5000, 5000], dtype=np.int64)
    assert 5000 * 5000 > kernels.DENSE_CAP
    assert backend.marginal_entropy(sym, p, alph, 0b11) == pytest.approx(2.0, abs=1e-12)
    assert backend.marginal_entropy(sym, p, alph, 0b01) == pytest.approx(1.5, abs=1e-12)


@pytest.mark.parametrize("L", [1, 3, 6])
def test_transforms_agree_and_invert(L, rng):
    v = rng.normal(size=1 << L)
    for fn in ("subset_sum", "subset_mobius", "atoms_from_entropies"):
        assert np.allclose(getattr(npk, fn)(v, L), getattr(nbk, fn)(v, L), atol=1e-12)
    assert np.allclose(npk.subset_mobius(npk.subset_sum(v, L), L), v, atol=1e-12)


def test_subset_sum_brute_force(rng):
    L = 4
    v = rng.normal(size=1 << L)
    z = npk.subset_sum(v, L)
    for U in range(1 << L):
        assert z[U] == pytest.approx(sum(v[T] for T in range(1 << L) if T & ~U == 0))


def test_pivot_backends_agree(rng):
    T = rng.normal(size=(5, 7))
    a, b = T.copy(), T.copy()
    npk.pivot(a, 2, 3)
    nbk.pivot(b, 2, 3)
    assert np.allclose(a, b, atol=1e-12)
    assert np.allclose(a[:, 3], np.eye(5)[2])


def test_basic_solutions_backends_agree(rng):
    for _ in range(20):
        n = int(rng.integers(1, 5))
        m = int(rng.integers(n, 9))
        G = rng.normal(size=(m, n))
        g = rng.normal(size=m)
        a = npk.basic_solutions(G, g, 0, 1e-9)
        b = nbk.basic_solutions(G, g, 0, 1e-9)
        key = lambda X: sorted(map(tuple, np.round(X, 7)))
        assert key(a) == key(b)


def test_env_flag_selects_numpy_fallback():
    code = "from relayrate import kernels; print(kernels.BACKEND_NAME)"
    env = dict(os.environ, RELAYRATE_DISABLE_JIT="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env["RELAYRATE_DISABLE_JIT"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"


def test_benchmark_script_runs():
    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    proc = subprocess.run([sys.executable, str(script), "--quick", "--repeat", "1"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "differ" not in proc.stdout and proc.stdout.count("\n") == 5

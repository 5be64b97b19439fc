"""Pure-numpy kernels. Always importable; used when numba is absent or disabled."""

import itertools

import numpy as np

DENSE_CAP = 1 << 24
_CHUNK = 8192


def _entropy_of(weights):
    w = weights[weights > 0.0]
    return float(-(w * np.log2(w)).sum())


def marginal_entropy(symbols, probs, alphabets, mask):
    cols = [i for i in range(symbols.shape[1]) if (mask >> i) & 1]
    if not cols:
        return 0.0
    size = 1
    strides = np.empty(len(cols), dtype=np.int64)
    for j, c in enumerate(cols):
        strides[j] = size
        size *= int(alphabets[c])
    keys = symbols[:, cols] @ strides
    if size <= DENSE_CAP:
        table = np.bincount(keys, weights=probs, minlength=size)
    else:
        _, inverse = np.unique(keys, return_inverse=True)
        table = np.bincount(inverse.ravel(), weights=probs)
    return _entropy_of(table)


def subset_entropies(symbols, probs, alphabets):
    L = symbols.shape[1]
    out = np.zeros(1 << L)
    for mask in range(1, 1 << L):
        out[mask] = marginal_entropy(symbols, probs, alphabets, mask)
    return out


def subset_sum(values, L):
    """z[U] = sum of values[T] over T subset of U."""
    z = np.array(values, dtype=np.float64, copy=True)
    for i in range(L):
        view = z.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    return z


def subset_mobius(values, L):
    """Inverse of :func:`subset_sum`: signed sum over submasks."""
    z = np.array(values, dtype=np.float64, copy=True)
    for i in range(L):
        view = z.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]
    return z


def atoms_from_entropies(H, L):
    full = (1 << L) - 1
    f = H[full ^ np.arange(1 << L)]
    return -subset_mobius(f, L)


def pivot(T, row, col):
    T[row, :] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row, :])
    T[:, col] = 0.0
    T[row, col] = 1.0


def basic_solutions(G, g, n_fixed, tol):
    """Feasible points of {x : G x >= g} where n linearly independent rows are tight.

    Rows ``0..n_fixed-1`` are treated as equalities and always active; the rest
    are chosen ``n - n_fixed`` at a time. Returns an (k, n) array.
    """
    m, n = G.shape
    free = range(n_fixed, m)
    pick = n - n_fixed
    fixed = list(range(n_fixed))
    ineq_G = G[n_fixed:]
    ineq_g = g[n_fixed:]
    found = []
    combos = itertools.combinations(free, pick)
    while True:
        batch = list(itertools.islice(combos, _CHUNK))
        if not batch:
            break
        idx = np.array([fixed + list(c) for c in batch], dtype=np.int64)
        M = G[idx]
        rhs = g[idx]
        sv = np.linalg.svd(M, compute_uv=False)
        ok = sv[:, -1] > 1e-10 * np.maximum(sv[:, 0], 1.0)
        if not ok.any():
            continue
        x = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
        slack = x @ ineq_G.T - ineq_g
        feas = (slack >= -tol).all(axis=1)
        if n_fixed:
            eq = np.abs(x @ G[:n_fixed].T - g[:n_fixed]) <= tol
            feas &= eq.all(axis=1)
        found.append(x[feas])
    if not found:
        return np.zeros((0, n))
    return np.concatenate(found, axis=0)

"""numba-compiled kernels mirroring :mod:`relayrate.kernels._numpy`."""

import numpy as np
from numba import njit

DENSE_CAP = 1 << 24


@njit(cache=True)
def _entropy_dense(table):
    h = 0.0
    for w in table:
        if w > 0.0:
            h -= w * np.log2(w)
    return h


@njit(cache=True)
def _marginal_entropy(symbols, probs, alphabets, mask):
    n, L = symbols.shape
    size = 1
    strides = np.zeros(L, dtype=np.int64)
    for i in range(L):
        if (mask >> i) & 1:
            strides[i] = size
            size *= alphabets[i]
    keys = np.zeros(n, dtype=np.int64)
    for r in range(n):
        k = 0
        for i in range(L):
            if strides[i]:
                k += symbols[r, i] * strides[i]
        keys[r] = k
    if size <= DENSE_CAP:
        table = np.zeros(size)
        for r in range(n):
            table[keys[r]] += probs[r]
        return _entropy_dense(table)
    # streaming aggregation over sorted keys
    order = np.argsort(keys, kind="mergesort")
    h = 0.0
    acc = 0.0
    for j in range(n):
        r = order[j]
        acc += probs[r]
        if j == n - 1 or keys[order[j + 1]] != keys[r]:
            if acc > 0.0:
                h -= acc * np.log2(acc)
            acc = 0.0
    return h


def marginal_entropy(symbols, probs, alphabets, mask):
    if mask == 0:
        return 0.0
    return float(_marginal_entropy(symbols, probs, alphabets, np.int64(mask)))


@njit(cache=True)
def subset_entropies(symbols, probs, alphabets):
    L = symbols.shape[1]
    out = np.zeros(1 << L)
    for mask in range(1, 1 << L):
        out[mask] = _marginal_entropy(symbols, probs, alphabets, mask)
    return out


@njit(cache=True)
def subset_sum(values, L):
    z = values.astype(np.float64).copy()
    for i in range(L):
        bit = 1 << i
        for m in range(1 << L):
            if m & bit:
                z[m] += z[m ^ bit]
    return z


@njit(cache=True)
def subset_mobius(values, L):
    z = values.astype(np.float64).copy()
    for i in range(L):
        bit = 1 << i
        for m in range(1 << L):
            if m & bit:
                z[m] -= z[m ^ bit]
    return z


@njit(cache=True)
def atoms_from_entropies(H, L):
    full = (1 << L) - 1
    f = np.empty(1 << L)
    for m in range(1 << L):
        f[m] = H[full ^ m]
    return -subset_mobius(f, L)


@njit(cache=True)
def pivot(T, row, col):
    rows, cols = T.shape
    p = T[row, col]
    for j in range(cols):
        T[row, j] /= p
    for i in range(rows):
        if i != row:
            f = T[i, col]
            if f != 0.0:
                for j in range(cols):
                    T[i, j] -= f * T[row, j]
            T[i, col] = 0.0
    T[row, col] = 1.0


@njit(cache=True)
def _solve_square(M, rhs, out):
    """Gaussian elimination with partial pivoting; False when (near-)singular."""
    n = M.shape[0]
    A = M.copy()
    b = rhs.copy()
    scale = 1.0
    for i in range(n):
        for j in range(n):
            if abs(A[i, j]) > scale:
                scale = abs(A[i, j])
    for c in range(n):
        best = c
        for r in range(c + 1, n):
            if abs(A[r, c]) > abs(A[best, c]):
                best = r
        if abs(A[best, c]) <= 1e-10 * scale:
            return False
        if best != c:
            for j in range(n):
                A[c, j], A[best, j] = A[best, j], A[c, j]
            b[c], b[best] = b[best], b[c]
        for r in range(c + 1, n):
            f = A[r, c] / A[c, c]
            if f != 0.0:
                for j in range(c, n):
                    A[r, j] -= f * A[c, j]
                b[r] -= f * b[c]
    for c in range(n - 1, -1, -1):
        s = b[c]
        for j in range(c + 1, n):
            s -= A[c, j] * out[j]
        out[c] = s / A[c, c]
    return True


@njit(cache=True)
def basic_solutions(G, g, n_fixed, tol):
    m, n = G.shape
    pick = n - n_fixed
    cap = 64
    found = np.zeros((cap, n))
    count = 0
    M = np.zeros((n, n))
    rhs = np.zeros(n)
    x = np.zeros(n)
    for i in range(n_fixed):
        M[i, :] = G[i, :]
        rhs[i] = g[i]
    idx = np.arange(n_fixed, n_fixed + pick)
    n_free = m - n_fixed
    if pick > n_free:
        return found[:0]
    while True:
        for k in range(pick):
            M[n_fixed + k, :] = G[idx[k], :]
            rhs[n_fixed + k] = g[idx[k]]
        if _solve_square(M, rhs, x):
            feasible = True
            for r in range(m):
                s = -g[r]
                for j in range(n):
                    s += G[r, j] * x[j]
                if s < -tol or (r < n_fixed and s > tol):
                    feasible = False
                    break
            if feasible:
                if count == cap:
                    grown = np.zeros((2 * cap, n))
                    grown[:cap] = found
                    found = grown
                    cap *= 2
                found[count, :] = x
                count += 1
        # next combination in lexicographic order
        k = pick - 1
        while k >= 0 and idx[k] == m - pick + k:
            k -= 1
        if k < 0:
            break
        idx[k] += 1
        for t in range(k + 1, pick):
            idx[t] = idx[t - 1] + 1
    return found[:count].copy()

"""Small dense linear programs: minimise ``c @ x`` subject to ``A @ x >= b`` and ``x >= 0``.

:func:`solve` is a two-phase tableau simplex using Bland's rule throughout.
:func:`enumerate_vertices` is the brute-force oracle used to check it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionTooLargeError, InputError, NumericalBreakdownError

PIVOT_EPS = 1e-9
TINY_PIVOT = 1e-12
MAX_ITERATIONS = 50_000


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.float64).ravel()
        A = np.atleast_2d(np.asarray(self.A, dtype=np.float64))
        b = np.asarray(self.b, dtype=np.float64).ravel()
        if A.shape != (len(b), len(c)) or len(c) < 1 or len(b) < 1:
            raise InputError(f"inconsistent LP shapes: c {c.shape}, A {A.shape}, b {b.shape}")
        if not (np.isfinite(c).all() and np.isfinite(A).all() and np.isfinite(b).all()):
            raise InputError("LP coefficients must be finite")
        for name, arr in (("c", c), ("A", A), ("b", b)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def num_vars(self) -> int:
        return len(self.c)

    @property
    def num_constraints(self) -> int:
        return len(self.b)

    def max_violation(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        return float(max(0.0, (self.b - self.A @ x).max(), (-x).max()))


@dataclass(frozen=True)
class LPSolution:
    status: Status
    x: np.ndarray | None = None
    value: float | None = None
    ray: np.ndarray | None = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    """Constraint rows ``T[:m]`` and reduced-cost row ``T[m]``; last column is the rhs."""

    def __init__(self, T, basis):
        self.T = T
        self.basis = basis
        self.iterations = 0

    @property
    def m(self):
        return self.T.shape[0] - 1

    def set_costs(self, cost):
        T = self.T
        T[-1, :-1] = cost
        T[-1, -1] = 0.0
        for i, j in enumerate(self.basis):
            if cost[j] != 0.0:
                T[-1] -= cost[j] * T[i]

    def pivot(self, row, col):
        kernels.pivot(self.T, row, col)
        self.basis[row] = col
        self.iterations += 1
        if self.iterations > MAX_ITERATIONS:
            raise NumericalBreakdownError("simplex exceeded its iteration budget")

    def run(self, allowed, tol):
        """Bland's-rule iterations. Returns ``None`` at optimum or an unbounded column."""
        T = self.T
        while True:
            rc = T[-1, :allowed]
            entering = np.flatnonzero(rc < -tol)
            if entering.size == 0:
                return None
            col = int(entering[0])
            column = T[:-1, col]
            eligible = np.flatnonzero(column > PIVOT_EPS)
            if eligible.size == 0:
                if (column > TINY_PIVOT).any():
                    raise NumericalBreakdownError(
                        f"only pivots below {PIVOT_EPS:g} available in column {col}"
                    )
                return col
            ratios = np.maximum(T[eligible, -1], 0.0) / column[eligible]
            best = ratios.min()
            ties = eligible[ratios <= best + 1e-12 * max(1.0, abs(best))]
            row = int(min(ties, key=lambda i: self.basis[i]))
            self.pivot(row, col)


def solve(lp: LinearProgram, tol: float = 1e-9) -> LPSolution:
    m, n = lp.A.shape
    # x | surplus s | artificial a ; rows normalised to nonnegative rhs
    sign = np.where(lp.b < 0, -1.0, 1.0)
    N = n + 2 * m
    T = np.zeros((m + 1, N + 1))
    T[:m, :n] = lp.A * sign[:, None]
    T[:m, n : n + m] = -np.diag(sign)
    T[:m, n + m : N] = np.eye(m)
    T[:m, -1] = lp.b * sign
    tab = _Tableau(T, list(range(n + m, N)))

    phase1_cost = np.zeros(N)
    phase1_cost[n + m :] = 1.0
    tab.set_costs(phase1_cost)
    tab.run(N, tol)
    infeasibility = -tab.T[-1, -1]
    if infeasibility > tol * (1.0 + np.abs(lp.b).sum()):
        return LPSolution(Status.INFEASIBLE, iterations=tab.iterations)

    # drive zero-level artificials out of the basis, dropping redundant rows
    keep = []
    for i in range(tab.m):
        if tab.basis[i] < n + m:
            keep.append(i)
            continue
        row = tab.T[i, : n + m]
        candidates = np.flatnonzero(np.abs(row) > PIVOT_EPS)
        if candidates.size:
            tab.pivot(i, int(candidates[0]))
            keep.append(i)
    rows = keep + [tab.m]
    T2 = np.hstack([tab.T[rows, : n + m], tab.T[rows, -1:]])
    phase1_iterations = tab.iterations
    tab = _Tableau(np.ascontiguousarray(T2), [tab.basis[i] for i in keep])
    tab.iterations = phase1_iterations

    cost = np.zeros(n + m)
    cost[:n] = lp.c
    tab.set_costs(cost)
    unbounded_col = tab.run(n + m, tol)
    if unbounded_col is not None:
        d = np.zeros(n + m)
        d[unbounded_col] = 1.0
        for i, j in enumerate(tab.basis):
            d[j] = -tab.T[i, unbounded_col]
        return LPSolution(Status.UNBOUNDED, ray=d[:n], iterations=tab.iterations)

    x = np.zeros(n + m)
    for i, j in enumerate(tab.basis):
        x[j] = tab.T[i, -1]
    x = x[:n]
    x[np.abs(x) < 1e-13] = 0.0
    scale = 1.0 + np.abs(lp.b).max() + np.abs(x).max()
    if lp.max_violation(x) > 1e-7 * scale:
        raise NumericalBreakdownError(f"simplex optimum violates constraints by {lp.max_violation(x):g}")
    return LPSolution(Status.OPTIMAL, x=x, value=float(lp.c @ x), iterations=tab.iterations)


@dataclass(frozen=True)
class VertexEnumeration:
    status: Status
    vertices: np.ndarray
    values: np.ndarray
    value: float | None = None
    argmin: np.ndarray | None = None
    ray: np.ndarray | None = None


MAX_VARS = 8
MAX_CONSTRAINTS = 40


def _dedupe(points, decimals=9):
    if len(points) == 0:
        return points
    _, first = np.unique(np.round(points, decimals), axis=0, return_index=True)
    return points[np.sort(first)]


def enumerate_vertices(lp: LinearProgram, tol: float = 1e-9) -> VertexEnumeration:
    """All basic feasible points, plus an extreme-ray search for unboundedness."""
    m, n = lp.A.shape
    if n > MAX_VARS or m > MAX_CONSTRAINTS:
        raise DimensionTooLargeError(
            f"vertex enumeration limited to n <= {MAX_VARS}, m <= {MAX_CONSTRAINTS}; got n={n}, m={m}"
        )
    G = np.ascontiguousarray(np.vstack([lp.A, np.eye(n)]))
    g = np.concatenate([lp.b, np.zeros(n)])
    verts = _dedupe(np.asarray(kernels.basic_solutions(G, g, 0, tol)))
    if len(verts) == 0:
        return VertexEnumeration(Status.INFEASIBLE, verts, np.zeros(0))
    values = verts @ lp.c

    # recession cone {d >= 0 : A d >= 0}, normalised by sum(d) = 1
    Hn = np.ascontiguousarray(np.vstack([np.ones((1, n)), lp.A, np.eye(n)]))
    hn = np.concatenate([[1.0], np.zeros(m + n)])
    rays = np.asarray(kernels.basic_solutions(Hn, hn, 1, tol))
    if len(rays):
        slopes = rays @ lp.c
        worst = int(np.argmin(slopes))
        if slopes[worst] < -tol:
            return VertexEnumeration(Status.UNBOUNDED, verts, values, ray=rays[worst])
    best = int(np.argmin(values))
    return VertexEnumeration(Status.OPTIMAL, verts, values, float(values[best]), verts[best])

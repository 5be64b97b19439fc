"""The data-exchange rate region, its closed-form candidate point, and region LPs.

The region holds every nonnegative rate tuple ``r`` with
``sum(r[i] for i in S) >= H(W_S | W_{S^c})`` for each nonempty strict
subset ``S``. There is deliberately no constraint for the full set: each
user already holds its own data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NonpositiveCapacityError, NumericalBreakdownError
from .imeasure import AtomTable, atom_table
from .lp import LinearProgram, solve
from .source import DEFAULT_TOL, SourceModel, h_vector
from .subsets import format_subset, full_mask, ordered_subsets, popcount, users_of


@dataclass(frozen=True)
class RegionConstraints:
    num_users: int
    masks: tuple[int, ...]
    bounds: np.ndarray

    def matrix(self) -> np.ndarray:
        """0/1 incidence rows, one per constraint."""
        L = self.num_users
        A = np.zeros((len(self.masks), L))
        for row, mask in enumerate(self.masks):
            for i in range(L):
                if (mask >> i) & 1:
                    A[row, i] = 1.0
        return A

    def bound(self, mask: int) -> float:
        return float(self.bounds[self.masks.index(mask)])

    def to_json(self) -> dict:
        return {
            "constraints": [
                {"subset": users_of(m), "bound": float(b)} for m, b in zip(self.masks, self.bounds)
            ]
        }


def region_constraints(
    model: SourceModel, include_full: bool = False, tol: float = DEFAULT_TOL
) -> RegionConstraints:
    """One constraint per nonempty strict subset; ``include_full`` adds the Slepian-Wolf sum-rate row."""
    L = model.num_users
    if L < 2:
        raise InputError("users must be >= 2")
    H = model.entropy_table()
    full = full_mask(L)
    masks = tuple(ordered_subsets(L, include_full=include_full))
    bounds = np.array([H[full] - H[full ^ m] for m in masks])
    bounds[(bounds < 0) & (bounds >= -tol)] = 0.0
    bounds.setflags(write=False)
    return RegionConstraints(L, masks, bounds)


@dataclass(frozen=True)
class Membership:
    inside: bool
    worst_slack: float
    worst_subset: int | None
    negative_users: tuple[int, ...]

    def describe(self) -> str:
        if self.inside:
            return "inside"
        parts = []
        if self.negative_users:
            parts.append("negative rate for user(s) " + ", ".join(map(str, self.negative_users)))
        if self.worst_subset is not None and self.worst_slack < 0:
            parts.append(f"constraint {format_subset(self.worst_subset)} short by {-self.worst_slack:.6f}")
        return "; ".join(parts)


def contains(
    region: SourceModel | RegionConstraints, r, tol: float = DEFAULT_TOL
) -> Membership:
    if isinstance(region, SourceModel):
        region = region_constraints(region, tol=tol)
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (region.num_users,):
        raise InputError(f"rate tuple has {r.size} entries, expected {region.num_users}")
    slacks = region.matrix() @ r - region.bounds
    worst = int(np.argmin(slacks))
    negative = tuple(i + 1 for i in np.flatnonzero(r < -tol))
    inside = not negative and slacks[worst] >= -tol
    return Membership(bool(inside), float(slacks[worst]), region.masks[worst], negative)


def r_star(model: SourceModel, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unique solution of ``sum over i != l of r_i = h_l`` for every ``l``."""
    h = h_vector(model, tol)
    return h.sum() / (model.num_users - 1) - h


def r_dagger(model: SourceModel, atoms: AtomTable | None = None) -> np.ndarray:
    """The same point assembled from weighted I-measure atoms over strict subsets."""
    L = model.num_users
    if L < 2:
        raise InputError("users must be >= 2")
    if atoms is None:
        atoms = atom_table(model)
    out = np.zeros(L)
    for K in range(1, full_mask(L)):
        k = popcount(K)
        inside = (L - k) / (L - 1)
        outside = (1 - k) / (L - 1)
        value = atoms.values[K]
        for i in range(L):
            out[i] += (inside if (K >> i) & 1 else outside) * value
    return out


@dataclass(frozen=True)
class PStarResult:
    member: bool
    r_star: np.ndarray
    membership: Membership


def in_pstar(model: SourceModel, tol: float = DEFAULT_TOL) -> PStarResult:
    rs = r_star(model, tol)
    m = contains(model, rs, tol)
    return PStarResult(m.inside, rs, m)


def sum_rate_lp(model: SourceModel, tol: float = DEFAULT_TOL) -> LinearProgram:
    region = region_constraints(model, tol=tol)
    return LinearProgram(np.ones(model.num_users), region.matrix(), region.bounds)


def weighted_max_lp(model: SourceModel, weights, tol: float = DEFAULT_TOL) -> LinearProgram:
    """Variables ``(r_1..r_L, t)``; minimise ``t`` with ``sum over i != l of r_i <= weights[l] * t``."""
    L = model.num_users
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (L,):
        raise InputError(f"need {L} weights, got {w.size}")
    if (w < 0).any():
        raise NonpositiveCapacityError(f"weights must be nonnegative, got {w.tolist()}")
    region = region_constraints(model, tol=tol)
    R = region.matrix()
    top = np.hstack([R, np.zeros((len(R), 1))])
    cap = np.zeros((L, L + 1))
    for l in range(L):
        cap[l, :L] = -1.0
        cap[l, l] = 0.0
        cap[l, L] = w[l]
    A = np.vstack([top, cap])
    b = np.concatenate([region.bounds, np.zeros(L)])
    c = np.zeros(L + 1)
    c[L] = 1.0
    return LinearProgram(c, A, b)


def _solve_or_raise(lp, what):
    sol = solve(lp)
    if not sol.optimal:
        raise NumericalBreakdownError(f"{what} LP ended {sol.status.value}; the region LP is always feasible and bounded")
    return sol


def minimize_weighted_max(model: SourceModel, weights, tol: float = DEFAULT_TOL) -> tuple[float, np.ndarray]:
    """Minimum over the region of ``max_l (1/weights[l]) * sum over i != l of r_i``.

    Returns the value and an optimising tuple (one of possibly many).
    """
    w = np.asarray(weights, dtype=np.float64)
    if (w <= 0).any():
        raise NonpositiveCapacityError(f"weights must be positive, got {w.tolist()}")
    sol = _solve_or_raise(weighted_max_lp(model, w, tol), "weighted max-rate")
    L = model.num_users
    return float(sol.x[L]), sol.x[:L].copy()


def minimize_sum(model: SourceModel, tol: float = DEFAULT_TOL) -> tuple[float, np.ndarray]:
    sol = _solve_or_raise(sum_rate_lp(model, tol), "sum-rate")
    return float(sol.value), sol.x.copy()

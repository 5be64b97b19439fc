"""Conditional multiple-mutual informations (I-measure atoms) and the balance test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    EmptySubsetError,
    InvalidPairError,
    JNotInComplementError,
    KOutOfRangeError,
    OverlappingSetsError,
)
from .source import DEFAULT_TOL, SourceModel
from .subsets import check_mask, format_subset, ordered_subsets, popcount, submasks


def conditional_multi_info(model: SourceModel, K: int, given: int = 0) -> float:
    """``I(W_k1; ...; W_kn | W_given)`` by inclusion-exclusion over nonempty ``T`` in ``K``."""
    check_mask(K, model.num_users)
    check_mask(given, model.num_users)
    if K == 0:
        return 0.0
    if K & given:
        raise OverlappingSetsError(f"{format_subset(K)} overlaps the conditioning set {format_subset(given)}")
    H = model.entropy_table()
    base = H[given]
    total = 0.0
    for T in submasks(K):
        if T == 0:
            continue
        sign = 1.0 if popcount(T) % 2 else -1.0
        total += sign * (H[T | given] - base)
    return float(total)


def multi_info(model: SourceModel, K: int) -> float:
    """The atom ``I_K``: multiple mutual information of ``K`` given everything else."""
    if K == 0:
        raise EmptySubsetError("I_K is defined for nonempty K only")
    check_mask(K, model.num_users)
    return conditional_multi_info(model, K, model.full ^ K)


@dataclass(frozen=True)
class AtomTable:
    num_users: int
    values: np.ndarray  # indexed by mask; values[0] == 0

    def __getitem__(self, mask: int) -> float:
        return float(self.values[mask])

    def items(self):
        """``(mask, I_K)`` pairs in (cardinality, mask) order."""
        return [(m, float(self.values[m])) for m in ordered_subsets(self.num_users)]

    def of_size(self, k: int) -> np.ndarray:
        return np.array([self.values[m] for m in ordered_subsets(self.num_users) if popcount(m) == k])


def atom_table(model: SourceModel) -> AtomTable:
    L = model.num_users
    values = np.asarray(kernels.atoms_from_entropies(model.entropy_table(), L), dtype=np.float64)
    values[0] = 0.0
    values.setflags(write=False)
    return AtomTable(L, values)


def composition_check(model: SourceModel, S: int, atoms: AtomTable | None = None) -> float:
    """``|H(W_S | W_{S^c}) - sum of I_K over K in S|``."""
    check_mask(S, model.num_users)
    if atoms is None:
        atoms = atom_table(model)
    H = model.entropy_table()
    lhs = H[model.full] - H[model.full ^ S]
    rhs = sum(atoms.values[K] for K in submasks(S))
    return float(abs(lhs - rhs))


def gap(k: int, L: int) -> float:
    """Allowed max/min ratio between same-size atoms of size ``k`` for ``L`` users."""
    if not 2 <= k <= L - 1:
        raise KOutOfRangeError(f"k must lie in [2, L-1] = [2, {L - 1}], got {k}")
    return 1.0 + (L - 1) / (k * (2 * L - k - 3))


@dataclass(frozen=True)
class BalanceLevel:
    k: int
    mu_bar: float
    mu_under: float
    gap: float
    passed: bool

    @property
    def margin(self) -> float:
        """Positive when the condition holds with room to spare."""
        return self.gap * self.mu_under - self.mu_bar


@dataclass(frozen=True)
class BalanceReport:
    levels: tuple[BalanceLevel, ...]
    overall: bool
    negative_atoms: bool


def balanced_check(model: SourceModel, tol: float = DEFAULT_TOL, atoms: AtomTable | None = None) -> BalanceReport:
    L = model.num_users
    if atoms is None:
        atoms = atom_table(model)
    levels = []
    negative = False
    for k in range(2, L):
        vals = atoms.of_size(k)
        hi, lo = float(vals.max()), float(vals.min())
        g = gap(k, L)
        if lo < -tol:
            negative = True
        levels.append(BalanceLevel(k, hi, lo, g, hi <= g * lo + tol))
    return BalanceReport(tuple(levels), all(lv.passed for lv in levels), negative)


def _user_bit(j: int, L: int) -> int:
    if not 1 <= j <= L:
        raise JNotInComplementError(f"user {j} outside [1, {L}]")
    return 1 << (j - 1)


def lemma5_check(model: SourceModel, S: int, j: int, atoms: AtomTable | None = None) -> float:
    """``|H(W_j | W_{S^c - j}) - sum over K in S of I_{K + j}|`` for user ``j`` outside ``S``."""
    L = model.num_users
    check_mask(S, L)
    bj = _user_bit(j, L)
    if S & bj:
        raise JNotInComplementError(f"user {j} lies in {format_subset(S)}")
    if atoms is None:
        atoms = atom_table(model)
    H = model.entropy_table()
    rest = (model.full ^ S) & ~bj
    lhs = H[rest | bj] - H[rest]
    rhs = sum(atoms.values[K | bj] for K in submasks(S))
    return float(abs(lhs - rhs))


def lemma6_check(model: SourceModel, S: int, j: int, m: int, atoms: AtomTable | None = None) -> float:
    """``|I(W_j; W_m | W_{S^c - {j,m}}) - sum over K in S of I_{K + {j,m}}|``."""
    L = model.num_users
    check_mask(S, L)
    if j == m or not (1 <= j <= L and 1 <= m <= L):
        raise InvalidPairError(f"need two distinct users in [1, {L}], got {j} and {m}")
    pair = (1 << (j - 1)) | (1 << (m - 1))
    if S & pair or popcount(S) > L - 2:
        raise InvalidPairError(f"users {j} and {m} must both lie outside {format_subset(S)}")
    if atoms is None:
        atoms = atom_table(model)
    H = model.entropy_table()
    rest = (model.full ^ S) & ~pair
    bj, bm = 1 << (j - 1), 1 << (m - 1)
    lhs = H[rest | bj] + H[rest | bm] - H[rest | pair] - H[rest]
    rhs = sum(atoms.values[K | pair] for K in submasks(S))
    return float(abs(lhs - rhs))


def expansion_residual(model: SourceModel, K: int, extra: int, given: int) -> float:
    """Residual of ``I(K | T) = I(K + e | T) + I(K | T + e)`` for user ``extra`` outside ``K`` and ``T``."""
    L = model.num_users
    be = _user_bit(extra, L)
    if (K | given) & be or K & given:
        raise OverlappingSetsError("K, the conditioning set and the extra user must be disjoint")
    lhs = conditional_multi_info(model, K, given)
    rhs = conditional_multi_info(model, K | be, given) + conditional_multi_info(model, K, given | be)
    return float(abs(lhs - rhs))

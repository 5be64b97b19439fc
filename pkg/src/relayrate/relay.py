"""Finite-field multiway relay channel: capacity terms and source-channel rate bounds.

Rates are in channel uses per source symbol. The channel only enters through
its field size and the entropies of the uplink and downlink noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EntropyOutOfRangeError,
    InputError,
    LengthMismatchError,
    NonpositiveCapacityError,
    NumericalBreakdownError,
    WrongUserCountError,
)
from .lp import solve
from .region import minimize_weighted_max, weighted_max_lp
from .source import DEFAULT_TOL, SourceModel, h_vector
from .subsets import mask_of

EXACT_TOL = 1e-7


def _noise_entropy(pmf, q: int) -> float:
    p = np.asarray(pmf, dtype=np.float64)
    if p.shape != (q,):
        raise InputError(f"noise pmf must have {q} entries (one per field element), got {p.size}")
    if (p < 0).any() or abs(p.sum() - 1.0) > 1e-9:
        raise InputError("noise pmf must be nonnegative and sum to 1")
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


@dataclass(frozen=True)
class ChannelSpec:
    field_order: int
    uplink_noise_entropy: float
    downlink_noise_entropies: tuple[float, ...]

    def __post_init__(self):
        q = int(self.field_order)
        if q < 2:
            raise InputError(f"field order must be >= 2, got {self.field_order}")
        object.__setattr__(self, "field_order", q)
        down = tuple(float(x) for x in self.downlink_noise_entropies)
        object.__setattr__(self, "downlink_noise_entropies", down)
        object.__setattr__(self, "uplink_noise_entropy", float(self.uplink_noise_entropy))
        top = math.log2(q)
        for name, h in [("uplink", self.uplink_noise_entropy)] + [
            (f"downlink {i + 1}", h) for i, h in enumerate(down)
        ]:
            if not -1e-12 <= h <= top + 1e-12:
                raise EntropyOutOfRangeError(f"{name} noise entropy {h} outside [0, log2 {q} = {top:g}]")

    @classmethod
    def from_noise_pmfs(cls, field_order: int, uplink_pmf, downlink_pmfs) -> ChannelSpec:
        q = int(field_order)
        return cls(q, _noise_entropy(uplink_pmf, q), tuple(_noise_entropy(p, q) for p in downlink_pmfs))

    @property
    def num_users(self) -> int:
        return len(self.downlink_noise_entropies)


def capacity_terms(ch: ChannelSpec) -> np.ndarray:
    """``C_l = log2 q - max(H(Z), H(N_l))`` for each user; may be zero."""
    top = math.log2(ch.field_order)
    return np.array([top - max(ch.uplink_noise_entropy, h) for h in ch.downlink_noise_entropies])


def _capacities(ch, L=None) -> np.ndarray:
    C = capacity_terms(ch) if isinstance(ch, ChannelSpec) else np.asarray(ch, dtype=np.float64).ravel()
    if L is not None and len(C) != L:
        raise LengthMismatchError(f"channel serves {len(C)} users but the source has {L}")
    return C


def _others_sum(r: np.ndarray) -> np.ndarray:
    """``sum over i != l of r_i`` for each ``l``."""
    return r.sum() - r


def capacity_region_contains(ch, R, tol: float = DEFAULT_TOL) -> bool:
    R = np.asarray(R, dtype=np.float64)
    C = _capacities(ch, len(R))
    return bool((_others_sum(R) <= C + tol).all())


def psi(model: SourceModel, ch, tol: float = DEFAULT_TOL) -> float:
    """Lower bound ``max_l H(W_{l^c}|W_l) / C_l``; ``math.inf`` when some user cannot be served."""
    h = h_vector(model, tol)
    C = _capacities(ch, model.num_users)
    best = 0.0
    for hl, cl in zip(h, C):
        if cl <= tol:
            if hl > tol:
                return math.inf
            continue
        best = max(best, hl / cl)
    return float(best)


def upsilon(r, ch, tol: float = DEFAULT_TOL) -> float:
    """``max_l (1/C_l) * sum over i != l of r_i``."""
    r = np.asarray(r, dtype=np.float64)
    C = _capacities(ch, len(r))
    if (C <= 0).any():
        raise NonpositiveCapacityError(f"capacities must be positive, got {C.tolist()}")
    return float((_others_sum(r) / C).max())


@dataclass(frozen=True)
class KappaResult:
    kind: str  # "exact", "bounds" or "unbounded"
    lower: float
    upper: float
    witness: np.ndarray | None = None

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    @property
    def kappa(self) -> float | None:
        return self.lower if self.kind == "exact" else None


def kappa_bounds(
    model: SourceModel, ch, tol: float = EXACT_TOL, entropy_tol: float = DEFAULT_TOL
) -> KappaResult:
    """Lower and upper bounds on the optimal source-channel rate.

    The verdict is ``"exact"`` when the two bounds agree within ``tol``;
    in that case separate source and channel coding with the returned witness
    rate tuple is optimal.
    """
    C = _capacities(ch, model.num_users)
    lower = psi(model, C, entropy_tol)
    if math.isinf(lower):
        return KappaResult("unbounded", math.inf, math.inf)
    if (C > entropy_tol).all():
        upper, witness = minimize_weighted_max(model, C, entropy_tol)
    else:
        # users with no capacity and nothing to learn: their constraint pins the others' rates at 0
        sol = solve(weighted_max_lp(model, np.maximum(C, 0.0), entropy_tol))
        if not sol.optimal:
            raise NumericalBreakdownError(f"weighted max-rate LP ended {sol.status.value}")
        upper, witness = float(sol.x[-1]), sol.x[:-1].copy()
    if upper - lower <= tol:
        return KappaResult("exact", lower, lower, witness)
    return KappaResult("bounds", lower, upper, witness)


_PAIRS_BY_USER = {1: (2, 3), 2: (1, 3), 3: (1, 2)}


def common_message_threshold(rates: dict[int, float], ch) -> tuple[float, bool]:
    """Three users exchanging independent common messages of ``rates[mask]`` bits.

    Returns the source-channel rate threshold and whether the pairwise rates
    are balanced (largest at most twice the smallest).
    """
    C = _capacities(ch)
    if len(C) != 3:
        raise WrongUserCountError(f"common-message threshold is for three users, got {len(C)}")
    R = {m: float(rates.get(m, 0.0)) for m in range(1, 7)}
    if any(m not in range(1, 7) for m in rates):
        raise WrongUserCountError("rates must be keyed by nonempty strict subsets of three users")
    threshold = 0.0
    for l, (a, b) in _PAIRS_BY_USER.items():
        need = R[mask_of([a])] + R[mask_of([b])] + R[mask_of([a, b])]
        cl = C[l - 1]
        if cl <= 0:
            if need > 0:
                return math.inf, _pairs_balanced(R)
            continue
        threshold = max(threshold, need / cl)
    return threshold, _pairs_balanced(R)


def _pairs_balanced(R) -> bool:
    pairs = [R[0b011], R[0b101], R[0b110]]
    hi, lo = max(pairs), min(pairs)
    if hi == 0.0:
        return True
    return lo > 0.0 and hi / lo <= 2.0

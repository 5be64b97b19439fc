"""Optimal centralised storage rate for correlated client data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .region import in_pstar, minimize_sum
from .source import DEFAULT_TOL, SourceModel, h_vector


@dataclass(frozen=True)
class StorageReport:
    optimal_rate: float
    argmin: np.ndarray
    closed_form_applicable: bool
    closed_form_value: float

    def to_json(self) -> dict:
        return {
            "optimal_rate": _sig12(self.optimal_rate),
            "argmin": [_sig12(x) for x in self.argmin],
            "closed_form_applicable": self.closed_form_applicable,
            "closed_form_value": _sig12(self.closed_form_value),
        }


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


def storage_closed_form(model: SourceModel, tol: float = DEFAULT_TOL) -> float:
    """``||h|| / (L-1)``; equals the optimal rate only for sources whose candidate point is in the region."""
    return float(h_vector(model, tol).sum() / (model.num_users - 1))


def optimal_storage_rate(model: SourceModel, tol: float = DEFAULT_TOL) -> StorageReport:
    value, argmin = minimize_sum(model, tol)
    return StorageReport(
        optimal_rate=value,
        argmin=argmin,
        closed_form_applicable=in_pstar(model, tol).member,
        closed_form_value=storage_closed_form(model, tol),
    )

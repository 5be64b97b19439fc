"""Discrete memoryless sources as subset-entropy oracles.

Three concrete models share the :class:`SourceModel` interface:

* :class:`TabularSource` wraps an explicit joint pmf (built by
  :func:`validate_tabular` from a raw :class:`TabularPMF`);
* :class:`ComponentSource` is a collection of independent uniform variables,
  each shared by a fixed group of users;
* :class:`ProfileSource` is given directly by its subset entropies.

All entropies are in bits. Subsets are integer bitmasks (see
:mod:`relayrate.subsets`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import (
    DuplicateEntryError,
    EmptyComponentSubsetError,
    InputError,
    MassNotOneError,
    MissingSubsetError,
    NegativeProbabilityError,
    NegativeRateError,
    NonEntropicProfileError,
    OverlappingSetsError,
    ProbabilityOutOfRangeError,
    SymbolOutOfRangeError,
)
from .subsets import (
    check_mask,
    check_num_users,
    format_subset,
    full_mask,
)

DEFAULT_TOL = 1e-9


class SourceModel:
    """Entropy oracle over subsets of ``num_users`` users.

    Subclasses implement :meth:`_compute_table`, returning a float array of
    length ``2**num_users`` indexed by mask with ``table[0] == 0``.
    """

    num_users: int

    def _compute_table(self) -> np.ndarray:
        raise NotImplementedError

    @cached_property
    def _table(self) -> np.ndarray:
        table = np.asarray(self._compute_table(), dtype=np.float64)
        table[0] = 0.0
        table.setflags(write=False)
        return table

    def entropy_table(self) -> np.ndarray:
        """Read-only array ``H[mask]`` over all ``2**L`` subsets."""
        return self._table

    def entropy(self, mask: int) -> float:
        check_mask(mask, self.num_users)
        return float(self._table[mask])

    @property
    def full(self) -> int:
        return full_mask(self.num_users)


@dataclass(frozen=True)
class TabularPMF:
    """Raw sparse pmf: ``(symbol_tuple, probability)`` entries; absent tuples have mass 0."""

    alphabet_sizes: tuple[int, ...]
    entries: tuple[tuple[tuple[int, ...], float], ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet_sizes", tuple(int(a) for a in self.alphabet_sizes))
        object.__setattr__(
            self, "entries", tuple((tuple(int(s) for s in sym), float(p)) for sym, p in self.entries)
        )

    @property
    def num_users(self) -> int:
        return len(self.alphabet_sizes)


class TabularSource(SourceModel):
    """Source given by an explicit joint pmf. Build with :func:`validate_tabular`."""

    def __init__(self, alphabets: np.ndarray, symbols: np.ndarray, probs: np.ndarray):
        self.num_users = len(alphabets)
        self.alphabets = np.ascontiguousarray(alphabets, dtype=np.int64)
        self.symbols = np.ascontiguousarray(symbols, dtype=np.int64).reshape(-1, self.num_users)
        self.probs = np.ascontiguousarray(probs, dtype=np.float64)
        for arr in (self.alphabets, self.symbols, self.probs):
            arr.setflags(write=False)

    def _compute_table(self):
        return kernels.subset_entropies(self.symbols, self.probs, self.alphabets).copy()

    def entropy(self, mask: int) -> float:
        check_mask(mask, self.num_users)
        if "_table" in self.__dict__:
            return float(self._table[mask])
        return kernels.marginal_entropy(self.symbols, self.probs, self.alphabets, mask)

    def to_pmf(self) -> TabularPMF:
        return TabularPMF(
            tuple(self.alphabets.tolist()),
            tuple((tuple(s), p) for s, p in zip(self.symbols.tolist(), self.probs.tolist())),
        )

    def __repr__(self):
        return f"TabularSource(users={self.num_users}, alphabets={self.alphabets.tolist()}, support={len(self.probs)})"


class ComponentSource(SourceModel):
    """Independent uniform variables ``B_T`` of ``R_T`` bits, each seen by the users in ``T``.

    ``H(W_S) = sum of R_T over all T meeting S``.
    """

    def __init__(self, num_users: int, components: dict[int, float]):
        self.num_users = check_num_users(num_users)
        self.components = dict(sorted(components.items()))

    def _compute_table(self):
        L = self.num_users
        rates = np.zeros(1 << L)
        for mask, r in self.components.items():
            rates[mask] = r
        below = kernels.subset_sum(rates, L)
        # H(S) = total - (mass of components inside the complement of S)
        full = full_mask(L)
        return below[full] - below[full ^ np.arange(1 << L)]

    def rate(self, mask: int) -> float:
        return self.components.get(mask, 0.0)

    def scaled(self, factor: float) -> ComponentSource:
        return ComponentSource(self.num_users, {m: factor * r for m, r in self.components.items()})

    def to_pmf(self) -> TabularPMF:
        """Materialise the joint pmf; every rate must be a whole number of bits."""
        L = self.num_users
        comps = [(m, r) for m, r in self.components.items() if r > 0]
        sizes = []
        for m, r in comps:
            if abs(r - round(r)) > 1e-12:
                raise InputError(f"component {format_subset(m)} has non-integer rate {r}")
            sizes.append(1 << int(round(r)))
        # user l observes the tuple of components containing it, mixed-radix encoded
        seen = [[i for i, (m, _) in enumerate(comps) if (m >> l) & 1] for l in range(L)]
        alphabets = tuple(math.prod(sizes[i] for i in idx) for idx in seen)
        total = math.prod(sizes)
        p = 1.0 / total
        entries = []
        for values in itertools.product(*(range(s) for s in sizes)):
            sym = []
            for idx in seen:
                code = 0
                for i in idx:
                    code = code * sizes[i] + values[i]
                sym.append(code)
            entries.append((tuple(sym), p))
        return TabularPMF(alphabets, tuple(entries))

    def __repr__(self):
        body = ", ".join(f"{format_subset(m)}: {r:g}" for m, r in self.components.items())
        return f"ComponentSource(users={self.num_users}, {{{body}}})"


@dataclass(frozen=True)
class EntropyProfile:
    """Subset entropies given as numbers, keyed by nonempty mask."""

    num_users: int
    values: dict[int, float] = field(default_factory=dict)


class ProfileSource(SourceModel):
    def __init__(self, num_users: int, table: np.ndarray):
        self.num_users = num_users
        self._given = np.array(table, dtype=np.float64)

    def _compute_table(self):
        return self._given.copy()

    def __repr__(self):
        return f"ProfileSource(users={self.num_users})"


def validate_tabular(raw: TabularPMF, tol: float = DEFAULT_TOL) -> TabularSource:
    L = check_num_users(raw.num_users)
    alphabets = np.array(raw.alphabet_sizes, dtype=np.int64)
    if (alphabets < 1).any():
        raise SymbolOutOfRangeError(f"alphabet sizes must be >= 1, got {raw.alphabet_sizes}")
    seen = set()
    symbols = np.zeros((len(raw.entries), L), dtype=np.int64)
    probs = np.zeros(len(raw.entries))
    for row, (sym, p) in enumerate(raw.entries):
        if len(sym) != L:
            raise SymbolOutOfRangeError(f"entry {row}: expected {L} symbols, got {len(sym)}")
        for user, (s, a) in enumerate(zip(sym, raw.alphabet_sizes), start=1):
            if not 0 <= s < a:
                raise SymbolOutOfRangeError(f"entry {row}: symbol {s} of user {user} outside [0, {a - 1}]")
        if sym in seen:
            raise DuplicateEntryError(f"entry {row}: duplicate symbol tuple {list(sym)}")
        seen.add(sym)
        if not math.isfinite(p) or p < 0.0:
            raise NegativeProbabilityError(f"entry {row}: probability {p} is negative")
        if p > 1.0 + tol:
            raise ProbabilityOutOfRangeError(f"entry {row}: probability {p} exceeds 1")
        symbols[row] = sym
        probs[row] = p
    mass = float(probs.sum())
    if abs(mass - 1.0) > tol:
        raise MassNotOneError(f"probabilities sum to {mass!r}, not 1 (tolerance {tol:g})")
    return TabularSource(alphabets, symbols, probs)


def entropy(model: SourceModel, mask: int) -> float:
    return model.entropy(mask)


def conditional_entropy(model: SourceModel, target: int, given: int, tol: float = DEFAULT_TOL) -> float:
    """``H(W_target | W_given)`` for disjoint masks."""
    if target & given:
        raise OverlappingSetsError(
            f"conditional entropy needs disjoint sets, got {format_subset(target)} and {format_subset(given)}"
        )
    value = model.entropy(target | given) - model.entropy(given)
    if -tol <= value < 0.0:
        value = 0.0
    return value


def _conditional_from_table(H, target, given, tol):
    value = H[target | given] - H[given]
    return 0.0 if -tol <= value < 0.0 else float(value)


def h_vector(model: SourceModel, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``h[l-1] = H(W_{l^c} | W_l)`` for every user ``l``."""
    L = model.num_users
    if L < 2:
        raise InputError("users must be >= 2")
    H = model.entropy_table()
    full = model.full
    return np.array([_conditional_from_table(H, full ^ (1 << i), 1 << i, tol) for i in range(L)])


def gen_component(num_users: int, components: dict[int, float]) -> ComponentSource:
    check_num_users(num_users)
    clean = {}
    for mask, rate in components.items():
        mask = check_mask(int(mask), num_users)
        if mask == 0:
            raise EmptyComponentSubsetError("component subsets must be nonempty")
        rate = float(rate)
        if not math.isfinite(rate) or rate < 0.0:
            raise NegativeRateError(f"component {format_subset(mask)} has negative rate {rate}")
        clean[mask] = clean.get(mask, 0.0) + rate
    return ComponentSource(num_users, clean)


def gen_sensor(rho: float, sigmas) -> TabularPMF:
    """Noisy binary sensors ``W_l = B xor E_l`` with ``P(B=0)=rho`` and ``P(E_l=0)=sigma_l``."""
    sigmas = [float(s) for s in sigmas]
    for name, v in [("rho", rho)] + [(f"sigma_{i + 1}", s) for i, s in enumerate(sigmas)]:
        if not 0.0 <= v <= 1.0:
            raise ProbabilityOutOfRangeError(f"{name} = {v} outside [0, 1]")
    L = len(sigmas)
    entries = []
    for w in itertools.product((0, 1), repeat=L):
        p = 0.0
        for b, pb in ((0, rho), (1, 1.0 - rho)):
            term = pb
            for wl, s in zip(w, sigmas):
                term *= s if wl == b else 1.0 - s
            p += term
        entries.append((w, p))
    return TabularPMF((2,) * L, tuple(entries))


def profile_validate(
    profile: EntropyProfile, tol: float = DEFAULT_TOL, strict: bool = False
) -> tuple[ProfileSource, list[str]]:
    """Check a raw entropy profile; returns the oracle and any Shannon-inequality warnings.

    Only elemental inequalities are checked (monotonicity by single-user
    extension, submodularity on pairs), which together imply all Shannon
    inequalities. With ``strict=True`` the first violation raises.
    """
    L = check_num_users(profile.num_users)
    table = np.zeros(1 << L)
    for mask in range(1, 1 << L):
        if mask not in profile.values:
            raise MissingSubsetError(f"profile has no entropy for subset {format_subset(mask)}")
        table[mask] = float(profile.values[mask])
    extra = set(profile.values) - set(range(1, 1 << L))
    if extra:
        raise MissingSubsetError(f"profile has entries outside the {L}-user lattice: {sorted(extra)}")

    problems = []
    for mask in range(1 << L):
        for i in range(L):
            bit = 1 << i
            if mask & bit:
                continue
            if table[mask] > table[mask | bit] + tol:
                problems.append(
                    f"monotonicity: H{format_subset(mask)} = {table[mask]:g} > "
                    f"H{format_subset(mask | bit)} = {table[mask | bit]:g}"
                )
            for j in range(i + 1, L):
                bj = 1 << j
                if mask & bj:
                    continue
                lhs = table[mask | bit] + table[mask | bj]
                rhs = table[mask | bit | bj] + table[mask]
                if lhs + tol < rhs:
                    problems.append(
                        f"submodularity: H{format_subset(mask | bit)} + H{format_subset(mask | bj)} < "
                        f"H{format_subset(mask | bit | bj)} + H{format_subset(mask)}"
                    )
    if strict and problems:
        raise NonEntropicProfileError(problems[0])
    return ProfileSource(L, table), problems


def profile_of(model: SourceModel) -> EntropyProfile:
    H = model.entropy_table()
    return EntropyProfile(model.num_users, {m: float(H[m]) for m in range(1, 1 << model.num_users)})


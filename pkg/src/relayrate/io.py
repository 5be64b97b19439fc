"""JSON file formats for sources, channels and results."""

from __future__ import annotations

import json
import numbers
from pathlib import Path

from .errors import InputError, ParseError
from .relay import ChannelSpec
from .source import (
    DEFAULT_TOL,
    ComponentSource,
    EntropyProfile,
    SourceModel,
    TabularPMF,
    TabularSource,
    gen_component,
    profile_validate,
    validate_tabular,
)
from .subsets import check_num_users, mask_of, users_of

_SOURCE_KEYS = {
    "tabular": {"type", "users", "alphabets", "pmf"},
    "component": {"type", "users", "components"},
    "profile": {"type", "users", "entropies"},
}
_ENTRY_KEYS = {"tabular": {"symbols", "p"}, "component": {"subset", "bits"}, "profile": {"subset", "H"}}
_LIST_KEY = {"tabular": "pmf", "component": "components", "profile": "entropies"}


def _read_json(source) -> dict:
    if isinstance(source, dict):
        return source
    if isinstance(source, str) and source.lstrip().startswith("{"):
        text = source
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    return doc


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ParseError(f"{where} must be a number, got {value!r}")
    return float(value)


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where} must be an integer, got {value!r}")
    return value


def _keys(obj, allowed: set, required: set, where: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{where} must be an object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ParseError(f"{where}: unknown key {unknown[0]!r}")
    missing = sorted(required - set(obj))
    if missing:
        raise ParseError(f"{where}: missing key {missing[0]!r}")


def _subset(value, L: int, where: str) -> int:
    if not isinstance(value, list) or not value:
        raise ParseError(f"{where} must be a nonempty list of user labels")
    labels = [_integer(u, where) for u in value]
    if len(set(labels)) != len(labels):
        raise ParseError(f"{where} repeats a user")
    try:
        return mask_of(labels, L)
    except InputError as exc:
        raise ParseError(f"{where}: {exc}") from None


def parse_source(
    source, tol: float = DEFAULT_TOL, strict: bool = False, min_users: int = 2
) -> tuple[SourceModel, list[str]]:
    """Load a source document (path, JSON text or dict). Returns the model and any warnings."""
    doc = _read_json(source)
    kind = doc.get("type")
    if kind not in _SOURCE_KEYS:
        raise ParseError(f"key 'type' must be one of {sorted(_SOURCE_KEYS)}, got {kind!r}")
    allowed = _SOURCE_KEYS[kind]
    _keys(doc, allowed, allowed, "source")
    L = _integer(doc["users"], "users")
    if L < min_users:
        raise ParseError(f"users must be >= {min_users}, got {L}")
    check_num_users(L)
    entries = doc[_LIST_KEY[kind]]
    if not isinstance(entries, list):
        raise ParseError(f"{_LIST_KEY[kind]!r} must be a list")
    for i, e in enumerate(entries):
        _keys(e, _ENTRY_KEYS[kind], _ENTRY_KEYS[kind], f"{_LIST_KEY[kind]}[{i}]")

    if kind == "tabular":
        alph = doc["alphabets"]
        if not isinstance(alph, list) or len(alph) != L:
            raise ParseError(f"'alphabets' must list {L} sizes")
        sizes = tuple(_integer(a, "alphabets") for a in alph)
        rows = []
        for i, e in enumerate(entries):
            if not isinstance(e["symbols"], list):
                raise ParseError(f"pmf[{i}].symbols must be a list")
            sym = tuple(_integer(s, f"pmf[{i}].symbols") for s in e["symbols"])
            rows.append((sym, _number(e["p"], f"pmf[{i}].p")))
        return validate_tabular(TabularPMF(sizes, tuple(rows)), tol), []

    if kind == "component":
        comps: dict[int, float] = {}
        for i, e in enumerate(entries):
            mask = _subset(e["subset"], L, f"components[{i}].subset")
            comps[mask] = comps.get(mask, 0.0) + _number(e["bits"], f"components[{i}].bits")
        return gen_component(L, comps), []

    values = {}
    for i, e in enumerate(entries):
        mask = _subset(e["subset"], L, f"entropies[{i}].subset")
        if mask in values:
            raise ParseError(f"entropies[{i}]: subset {users_of(mask)} listed twice")
        values[mask] = _number(e["H"], f"entropies[{i}].H")
    model, warnings = profile_validate(EntropyProfile(L, values), tol, strict)
    return model, warnings


def source_to_json(model) -> dict:
    """Serialise a tabular pmf, tabular source or component source."""
    if isinstance(model, TabularSource):
        model = model.to_pmf()
    if isinstance(model, TabularPMF):
        return {
            "type": "tabular",
            "users": model.num_users,
            "alphabets": list(model.alphabet_sizes),
            "pmf": [{"symbols": list(s), "p": p} for s, p in model.entries],
        }
    if isinstance(model, ComponentSource):
        return {
            "type": "component",
            "users": model.num_users,
            "components": [{"subset": users_of(m), "bits": r} for m, r in model.components.items()],
        }
    H = model.entropy_table()
    return {
        "type": "profile",
        "users": model.num_users,
        "entropies": [{"subset": users_of(m), "H": float(H[m])} for m in range(1, len(H))],
    }


_CHANNEL_ENTROPY = {"field_order", "uplink_noise_entropy", "downlink_noise_entropies"}
_CHANNEL_PMF = {"field_order", "uplink_noise_pmf", "downlink_noise_pmfs"}


def parse_channel(source) -> ChannelSpec:
    doc = _read_json(source)
    if "uplink_noise_pmf" in doc or "downlink_noise_pmfs" in doc:
        _keys(doc, _CHANNEL_PMF, _CHANNEL_PMF - {"field_order"}, "channel")
        up = doc["uplink_noise_pmf"]
        down = doc["downlink_noise_pmfs"]
        if not isinstance(up, list) or not isinstance(down, list) or not all(isinstance(d, list) for d in down):
            raise ParseError("noise pmfs must be lists of numbers")
        q = _integer(doc.get("field_order", len(up)), "field_order")
        up = [_number(x, "uplink_noise_pmf") for x in up]
        down = [[_number(x, "downlink_noise_pmfs") for x in d] for d in down]
        return ChannelSpec.from_noise_pmfs(q, up, down)
    _keys(doc, _CHANNEL_ENTROPY, _CHANNEL_ENTROPY, "channel")
    down = doc["downlink_noise_entropies"]
    if not isinstance(down, list):
        raise ParseError("'downlink_noise_entropies' must be a list")
    return ChannelSpec(
        _integer(doc["field_order"], "field_order"),
        _number(doc["uplink_noise_entropy"], "uplink_noise_entropy"),
        tuple(_number(x, "downlink_noise_entropies") for x in down),
    )


def channel_to_json(ch: ChannelSpec) -> dict:
    return {
        "field_order": ch.field_order,
        "uplink_noise_entropy": ch.uplink_noise_entropy,
        "downlink_noise_entropies": list(ch.downlink_noise_entropies),
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"

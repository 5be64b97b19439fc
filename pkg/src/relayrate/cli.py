"""Command-line front end.

Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 input
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .diagram import render_svg
from .errors import InputError, NumericalError, ParseError
from .imeasure import atom_table, balanced_check
from .io import channel_to_json, dumps, parse_channel, parse_source, source_to_json
from .region import in_pstar
from .relay import capacity_terms, kappa_bounds, psi
from .source import DEFAULT_TOL, gen_component, gen_sensor, h_vector
from .storage import optimal_storage_rate
from .subsets import format_subset, mask_of, ordered_subsets, users_of


def _default_tol() -> float:
    raw = os.environ.get("RELAYRATE_TOL")
    if not raw:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"RELAYRATE_TOL={raw!r} is not a number") from None


def _num(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return f"{x + 0.0:.6f}"


def _vec(xs) -> str:
    return "(" + ", ".join(_num(x) for x in xs) + ")"


def _j(x):
    """JSON number at 12 significant digits; infinities become strings."""
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_j(v) for v in x]
    x = float(x)
    if math.isinf(x):
        return "inf"
    return float(f"{x + 0.0:.12g}")


class Report:
    def __init__(self, command: str):
        self.data: dict = {"command": command}
        self.lines: list[str] = []
        self.code = 0

    def emit(self, as_json: bool, stream=None):
        stream = stream or sys.stdout
        if as_json:
            self.data["exit_code"] = self.code
            stream.write(json.dumps(self.data, sort_keys=False) + "\n")
        else:
            stream.write("\n".join(self.lines) + "\n")


def _load(args):
    model, warnings = parse_source(args.source, args.tol, args.strict)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return model, warnings


def cmd_info(args) -> Report:
    model, warnings = _load(args)
    H = model.entropy_table()
    h = h_vector(model, args.tol)
    rep = Report("info")
    rep.lines.append(f"users: {model.num_users}")
    rep.lines.append("subset\tH")
    for m in ordered_subsets(model.num_users):
        rep.lines.append(f"{format_subset(m)}\t{_num(H[m])}")
    rep.lines.append(f"h = {_vec(h)}")
    rep.data.update(
        users=model.num_users,
        entropies=[{"subset": users_of(m), "H": _j(H[m])} for m in ordered_subsets(model.num_users)],
        h=_j(h),
        warnings=warnings,
    )
    return rep


def cmd_imeasure(args) -> Report:
    model, warnings = _load(args)
    atoms = atom_table(model)
    rep = Report("imeasure")
    rep.lines.append("subset\tI_K")
    rep.lines += [f"{format_subset(m)}\t{_num(v)}" for m, v in atoms.items()]
    rep.data.update(atoms=[{"subset": users_of(m), "I": _j(v)} for m, v in atoms.items()], warnings=warnings)
    if args.svg:
        if model.num_users == 3:
            Path(args.svg).write_text(render_svg(atoms), encoding="utf-8")
            rep.lines.append(f"wrote {args.svg}")
            rep.data["svg"] = str(args.svg)
        else:
            print(
                f"notice: the Venn diagram needs exactly 3 users (source has {model.num_users}); table only",
                file=sys.stderr,
            )
            rep.data["svg"] = None
    return rep


def cmd_balanced(args) -> Report:
    model, warnings = _load(args)
    report = balanced_check(model, args.tol)
    rep = Report("balanced")
    rep.lines.append("k\tmax_I\tmin_I\tgap\tmargin\tpass")
    for lv in report.levels:
        rep.lines.append(
            f"{lv.k}\t{_num(lv.mu_bar)}\t{_num(lv.mu_under)}\t{_num(lv.gap)}\t{_num(lv.margin)}\t"
            f"{'yes' if lv.passed else 'no'}"
        )
    if not report.levels:
        rep.lines.append("(no sizes to compare for two users)")
    if report.negative_atoms:
        rep.lines.append("note: some atoms of size >= 3 are negative; condition applied to signed values")
    rep.lines.append("BALANCED" if report.overall else "NOT BALANCED")
    rep.code = 0 if report.overall else 1
    rep.data.update(
        balanced=report.overall,
        negative_atoms=report.negative_atoms,
        levels=[
            {"k": lv.k, "max": _j(lv.mu_bar), "min": _j(lv.mu_under), "gap": _j(lv.gap),
             "margin": _j(lv.margin), "pass": lv.passed}
            for lv in report.levels
        ],
        warnings=warnings,
    )
    return rep


def cmd_pstar(args) -> Report:
    model, warnings = _load(args)
    res = in_pstar(model, args.tol)
    m = res.membership
    rep = Report("pstar")
    rep.lines.append(f"r* = {_vec(res.r_star)}")
    rep.lines.append(f"worst slack = {_num(m.worst_slack)} at {format_subset(m.worst_subset)}")
    if m.negative_users:
        rep.lines.append("negative rate for user(s) " + ", ".join(map(str, m.negative_users)))
    rep.lines.append("IN P*" if res.member else f"NOT IN P* ({m.describe()})")
    rep.code = 0 if res.member else 1
    rep.data.update(
        member=res.member,
        r_star=_j(res.r_star),
        worst_slack=_j(m.worst_slack),
        worst_subset=users_of(m.worst_subset),
        negative_users=list(m.negative_users),
        warnings=warnings,
    )
    return rep


def cmd_kappa(args) -> Report:
    model, warnings = _load(args)
    ch = parse_channel(args.channel)
    C = capacity_terms(ch)
    res = kappa_bounds(model, ch, entropy_tol=args.tol)
    rep = Report("kappa")
    rep.lines.append(f"C = {_vec(C)}")
    rep.lines.append(f"Psi = {_num(psi(model, ch, args.tol))}")
    if res.kind == "unbounded":
        rep.lines.append("UNBOUNDED (a user with zero capacity must still receive data)")
        rep.code = 1
    else:
        rep.lines.append(f"min Upsilon = {_num(res.upper)} at r = {_vec(res.witness)}")
        if res.exact:
            rep.lines.append(f"EXACT κ* = {_num(res.lower)}")
        else:
            rep.lines.append(f"BOUNDS [{_num(res.lower)}, {_num(res.upper)}]")
            rep.code = 1
    rep.data.update(
        verdict=res.kind,
        capacities=_j(C),
        lower=_j(res.lower),
        upper=_j(res.upper),
        witness=None if res.witness is None else _j(res.witness),
        channel=channel_to_json(ch),
        warnings=warnings,
    )
    return rep


def cmd_storage(args) -> Report:
    model, warnings = _load(args)
    rep_ = optimal_storage_rate(model, args.tol)
    rep = Report("storage")
    rep.lines.append(f"optimal storage rate = {_num(rep_.optimal_rate)}")
    rep.lines.append(f"argmin r = {_vec(rep_.argmin)}")
    label = "applicable" if rep_.closed_form_applicable else "not applicable: source outside P*"
    rep.lines.append(f"closed form ||h||/(L-1) = {_num(rep_.closed_form_value)} ({label})")
    rep.data.update(rep_.to_json(), warnings=warnings)
    return rep


def _parse_component(text: str) -> tuple[int, float]:
    try:
        users, bits = text.split(":")
        return mask_of(int(u) for u in users.split(",")), float(bits)
    except ValueError:
        raise ParseError(f"component {text!r} must look like '1,2:3.5' (users:bits)") from None


def cmd_gen(args) -> Report:
    if args.kind == "component":
        comps: dict[int, float] = {}
        for text in args.component or []:
            mask, bits = _parse_component(text)
            comps[mask] = comps.get(mask, 0.0) + bits
        doc = source_to_json(gen_component(args.users, comps))
    else:
        doc = source_to_json(gen_sensor(args.rho, args.sigma))
    text = dumps(doc)
    rep = Report("gen")
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        rep.lines.append(f"wrote {args.output}")
        rep.data["output"] = str(args.output)
    else:
        rep.lines.append(text.rstrip("\n"))
        rep.data["source"] = doc
    return rep


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="comparison tolerance (default 1e-9 or $RELAYRATE_TOL)")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit one JSON object")
    common.add_argument("--strict", action="store_true", default=argparse.SUPPRESS, help="treat non-entropic profiles as errors")

    parser = argparse.ArgumentParser(
        prog="relayrate",
        description="Entropic analysis of multi-terminal sources for relay data exchange and storage.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    add("info", cmd_info, "subset entropies and h(p)").add_argument("source")
    p = add("imeasure", cmd_imeasure, "I-measure atoms, optional Venn SVG")
    p.add_argument("source")
    p.add_argument("--svg", metavar="PATH")
    add("balanced", cmd_balanced, "balanced-source test (exit 1 if not balanced)").add_argument("source")
    add("pstar", cmd_pstar, "P* membership test (exit 1 if not a member)").add_argument("source")
    p = add("kappa", cmd_kappa, "bounds on the optimal source-channel rate")
    p.add_argument("source")
    p.add_argument("--channel", required=True, metavar="FILE")
    add("storage", cmd_storage, "optimal centralised storage rate").add_argument("source")

    gen = add("gen", cmd_gen, "write a source file")
    gsub = gen.add_subparsers(dest="kind", required=True)
    pc = gsub.add_parser("component", parents=[common], help="independent shared components")
    pc.add_argument("--users", type=int, required=True)
    pc.add_argument("--component", action="append", metavar="USERS:BITS", help="e.g. 1,2:1 (repeatable)")
    pc.add_argument("-o", "--output")
    ps = gsub.add_parser("sensor", parents=[common], help="noisy binary sensors of one event")
    ps.add_argument("--rho", type=float, required=True)
    ps.add_argument("--sigma", type=float, nargs="+", required=True)
    ps.add_argument("-o", "--output")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    as_json = getattr(args, "json", False)
    args.strict = getattr(args, "strict", False)
    try:
        if not hasattr(args, "tol"):
            args.tol = _default_tol()
        report = args.func(args)
    except (InputError, OSError) as exc:
        _fail(as_json, "input", exc)
        return 2
    except NumericalError as exc:
        _fail(as_json, "numerical", exc)
        return 3
    report.emit(as_json)
    return report.code


def _fail(as_json: bool, kind: str, exc: Exception):
    print(f"error: {exc}", file=sys.stderr)
    if as_json:
        print(json.dumps({"error": kind, "message": str(exc)}))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

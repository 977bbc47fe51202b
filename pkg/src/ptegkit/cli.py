"""Command-line front end.

Model files are YAML (JSON also parses)::

    format_version: "1"
    transitions: [t1, t2]
    places:
      - {from: t1, to: t2, marking: 0, lower: "2", upper: "3"}

All scalars are read as strings, so ``0.5`` becomes exactly 1/2. ``inf`` is
the only accepted infinite upper bound. Exit codes: 0 success, 1 trajectory
fails validation, 2 input error, 3 requested period is infeasible.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

import yaml

from .maxplus import BOTTOM, TOP, PositiveCircuitError, parse_rational
from .ncp import FeasibleSet
from .precgraph import detect_positive_circuit, eval_pic, from_matrix, param_graph, to_dot
from .pteg import (EventGraphSpec, Place, SpecError, Trajectory, normalize, normalized_count,
                   normalized_spec, period_set, pic_reduction, synthesize, tensor_system,
                   validate_spec, validate_trajectory)

FORMAT_VERSION = "1"

EXIT_OK, EXIT_INVALID_TRAJECTORY, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2, 3


class ModelError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


# -- model files -------------------------------------------------------------

def fmt(x) -> str:
    if x is TOP:
        return "inf"
    if x is BOTTOM:
        return "-inf"
    return str(Fraction(x))


def _parse_bound(text, what, allow_inf):
    if not isinstance(text, str):
        raise ModelError([f"{what}: expected a scalar, got {text!r}"])
    if allow_inf and text.strip() == "inf":
        return TOP
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise ModelError([f"{what}: {exc}"]) from None


def parse_model(text: str) -> EventGraphSpec:
    try:
        doc = yaml.load(text, Loader=yaml.BaseLoader)
    except yaml.YAMLError as exc:
        raise ModelError([f"malformed model: {exc}"]) from None
    if not isinstance(doc, dict):
        raise ModelError(["model must be a mapping"])
    diag = []
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        diag.append(f"unsupported format_version {version!r} (expected {FORMAT_VERSION!r})")
    transitions = doc.get("transitions", [])
    if not isinstance(transitions, list) or not all(isinstance(t, str) for t in transitions):
        raise ModelError(diag + ["transitions must be a list of names"])
    places = []
    for k, rec in enumerate(doc.get("places", []) or []):
        if not isinstance(rec, dict):
            diag.append(f"place {k}: expected a mapping")
            continue
        missing = [f for f in ("from", "to", "lower") if f not in rec]
        if missing:
            diag.append(f"place {k}: missing {', '.join(missing)}")
            continue
        marking = rec.get("marking", "0")
        if not isinstance(marking, str) or not re.fullmatch(r"\d+", marking.strip()):
            diag.append(f"place {k}: marking must be a nonnegative integer, got {marking!r}")
            continue
        try:
            lower = _parse_bound(rec["lower"], f"place {k} lower", False)
            upper = _parse_bound(rec.get("upper", "inf"), f"place {k} upper", True)
        except ModelError as exc:
            diag.extend(exc.diagnostics)
            continue
        places.append(Place(rec["from"], rec["to"], int(marking), lower, upper))
    if diag:
        raise ModelError(diag)
    spec = EventGraphSpec(tuple(transitions), tuple(places))
    try:
        validate_spec(spec)
    except SpecError as exc:
        raise ModelError([f"place {k}: {m}" if k is not None else m for k, m in exc.diagnostics]) from None
    return spec


def dump_model(spec: EventGraphSpec) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "transitions": list(spec.transitions),
        "places": [{"from": p.source, "to": p.target, "marking": p.marking,
                    "lower": fmt(p.lower), "upper": fmt(p.upper)} for p in spec.places],
    }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None, allow_unicode=True)


def load_model(path: str) -> tuple[EventGraphSpec, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ModelError([f"cannot read {path}: {exc.strerror}"]) from None
    return parse_model(raw.decode("utf-8")), hashlib.sha256(raw).hexdigest()


# -- envelopes ---------------------------------------------------------------

def interval_payload(s: FeasibleSet) -> dict:
    if s.is_empty:
        return {"empty": True, "text": "empty"}
    return {"empty": False, "lower": fmt(s.lo), "upper": fmt(s.hi), "text": str(s)}


def vec(x) -> list[str]:
    return [fmt(v) for v in x]


def _emit(args, envelope: dict, lines: list[str]):
    if args.json:
        print(json.dumps(envelope, indent=2, ensure_ascii=False))
    else:
        print("\n".join(lines))


def _envelope(args, digest, result):
    return {"command": args.command, "arguments": _echo(args), "input_sha256": digest, "result": result}


def _echo(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "json", "command")}


# -- commands ----------------------------------------------------------------

def cmd_check(args) -> int:
    spec, digest = load_model(args.model)
    p, _ = normalize(spec)
    lam = period_set(p, 1)
    ok = not lam.is_empty
    _emit(args, _envelope(args, digest, {"boundedly_consistent": ok, "periods": interval_payload(lam)}),
          [f"boundedly consistent: {str(ok).lower()}", f"periods: {lam}"])
    return EXIT_OK


def cmd_periods(args) -> int:
    if args.d < 1:
        raise ModelError(["--d must be >= 1"])
    spec, digest = load_model(args.model)
    p, _ = normalize(spec)
    lam = period_set(p, args.d, args.mode)
    result = {"d": args.d, "mode": args.mode, "periods": interval_payload(lam)}
    lines = [f"periods (d={args.d}, {args.mode}): {lam}"]
    if args.mode == "tensor":
        base = period_set(p, 1, "theorem2")
        result["agrees_with_d1"] = base == lam
        lines.append(f"agrees with d=1: {'yes' if base == lam else 'no'}")
    _emit(args, _envelope(args, digest, result), lines)
    return EXIT_OK


def _read_u(source: str, size: int) -> list[Fraction]:
    if source == "zero":
        return [Fraction(0)] * size
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise ModelError([f"cannot read {source}: {exc.strerror}"]) from None
    try:
        data = json.loads(text)
        items = [str(v) for v in data]
    except (json.JSONDecodeError, TypeError):
        items = text.split()
    try:
        u = [parse_rational(s) for s in items]
    except ValueError as exc:
        raise ModelError([f"u vector: {exc}"]) from None
    if len(u) != size:
        raise ModelError([f"u vector: expected {size} entries, got {len(u)}"])
    return u


def _node_name(v: int, names) -> str:
    n = len(names)
    copy, t = divmod(v, n)
    return names[t] if copy == 0 else f"{names[t]}@{copy}"


def cmd_trajectory(args) -> int:
    spec, digest = load_model(args.model)
    if args.d < 1:
        raise ModelError(["--d must be >= 1"])
    lam = _parse_bound(args.lam, "--lambda", False)
    p, _ = normalize(spec)
    K = 3 * args.d if args.horizon is None else args.horizon
    if K < 0:
        raise ModelError(["--horizon must be >= 0"])
    u = _read_u(args.u, args.d * p.n)
    witness = detect_positive_circuit(tensor_system(p, args.d, lam))
    if witness is not None:
        nodes = [_node_name(v, p.names) for v in witness]
        result = {"feasible": False, "lambda": fmt(lam), "witness": nodes}
        _emit(args, _envelope(args, digest, result),
              [f"lambda = {lam} is not an admissible period for d={args.d}",
               "witness: positive circuit " + " -> ".join(nodes + nodes[:1])])
        return EXIT_INFEASIBLE
    traj = synthesize(p, args.d, lam, u)
    report = validate_trajectory(p, traj, max(K, traj.d))
    xs = traj.upto(K) if K >= traj.d - 1 else list(traj.seed)
    result = {"feasible": True, "d": traj.d, "lambda": fmt(lam), "transitions": list(p.names),
              "seed": [vec(x) for x in traj.seed],
              "x": [vec(x) for x in xs],
              "valid": report.ok, "violations": [str(v) for v in report.violations]}
    lines = [f"transitions: {', '.join(p.names)}"]
    lines += [f"x({k}) = [{', '.join(vec(x))}]" for k, x in enumerate(xs)]
    lines.append(f"valid: {'yes' if report.ok else 'no'}")
    _emit(args, _envelope(args, digest, result), lines)
    return EXIT_OK if report.ok else EXIT_INVALID_TRAJECTORY


def _load_trajectory(path: str, n: int) -> Trajectory:
    try:
        doc = json.loads(Path(path).read_text())
        if "result" in doc:
            doc = doc["result"]
        d = int(doc["d"])
        lam = parse_rational(str(doc["lambda"]))
        seed = tuple(tuple(parse_rational(str(v)) for v in x) for x in doc["seed"])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ModelError([f"trajectory file {path}: {exc}"]) from None
    if any(len(x) != n for x in seed):
        raise ModelError([f"trajectory file {path}: seed vectors must have {n} entries"])
    try:
        return Trajectory(d, lam, seed)
    except ValueError as exc:
        raise ModelError([f"trajectory file {path}: {exc}"]) from None


def cmd_validate(args) -> int:
    spec, digest = load_model(args.model)
    p, _ = normalize(spec)
    traj = _load_trajectory(args.trajectory, p.n)
    report = validate_trajectory(p, traj, args.horizon)
    result = {"valid": report.ok, "horizon": report.horizon,
              "violations": [str(v) for v in report.violations]}
    lines = [f"valid: {'yes' if report.ok else 'no'} (k = 0..{report.horizon})"]
    lines += [f"violation: {v}" for v in report.violations]
    _emit(args, _envelope(args, digest, result), lines)
    return EXIT_OK if report.ok else EXIT_INVALID_TRAJECTORY


def cmd_export_dot(args) -> int:
    spec, _ = load_model(args.model)
    p, _ = normalize(spec)
    t = pic_reduction(p)
    if args.lam is not None:
        lam = _parse_bound(args.lam, "--lambda", False)
        g = from_matrix(eval_pic(t.P, t.I, t.C, lam))
    else:
        g = param_graph(t.P, t.I, t.C)
    sys.stdout.write(to_dot(g))
    return EXIT_OK


def cmd_normalize(args) -> int:
    spec, digest = load_model(args.model)
    flat, mapping = normalized_spec(spec)
    text = dump_model(flat)
    if args.output:
        Path(args.output).write_text(text)
    nbar = normalized_count(spec)
    result = {"transitions_before": len(spec.transitions), "transitions_after": nbar,
              "transition_map": {spec.transitions[k]: flat.transitions[v] for k, v in mapping.items()}}
    if not args.output:
        result["model"] = text
    lines = [f"n = {len(spec.transitions)}, normalized n = {nbar}"]
    if args.output:
        lines.append(f"written to {args.output}")
    else:
        lines.append(text.rstrip())
    _emit(args, _envelope(args, digest, result), lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ptegkit", description="Periodic schedules of P-time event graphs.")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("model")
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.set_defaults(func=func)
        return sp

    add("check", cmd_check, "bounded consistency and the 1-periodic periods")
    sp = add("periods", cmd_periods, "admissible periods of d-periodic trajectories")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--mode", choices=("theorem2", "tensor"), default="theorem2")
    sp = add("trajectory", cmd_trajectory, "synthesize and validate a periodic trajectory")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--u", default="zero", help="'zero' or a file of d*n rationals")
    sp.add_argument("--horizon", type=int, default=None)
    sp = add("validate", cmd_validate, "check a trajectory file against the model")
    sp.add_argument("--trajectory", required=True)
    sp.add_argument("--horizon", type=int, default=None)
    sp = add("export-dot", cmd_export_dot, "parametric precedence graph in DOT")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="lam", default=None)
    g.add_argument("--parametric", action="store_true")
    sp = add("normalize", cmd_normalize, "rewrite markings to 0/1")
    sp.add_argument("--output", "-o", default=None)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ModelError, SpecError) as exc:
        diags = getattr(exc, "diagnostics", [str(exc)])
        for d in diags:
            print(f"error: {d if isinstance(d, str) else d[1]}", file=sys.stderr)
        return EXIT_INPUT
    except PositiveCircuitError as exc:  # pragma: no cover - guarded above
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())

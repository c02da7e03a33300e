"""Command-line interface: JSON instance files in, JSON reports out.

Reports go to stdout as a single JSON document; a short human summary goes
to stderr.  Exit codes: 0 pass, 1 inequality violation or infeasibility
found, 2 usage/parse/validation error, 3 solver failure.  Floats are
serialized with Python's shortest round-trip representation, which
reconstructs the exact double on parse.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import builders, inclusion, pdt, summing
from .core import Exponents, harmonic_combine
from .errors import (
    IterationLimit,
    NotDominated,
    NotSumming,
    NumericalFailure,
    ParseError,
    PremiseNotCertified,
    SummabilityError,
    ValidationError,
)
from .instance import SummingInstance, WeightVector
from .pdt import InfeasibilityWitness, MeasureVector, PdtInstance, ScaledFamily

__all__ = ["parse_instance", "parse_measures", "emit_instance", "execute", "main",
           "preset_instance", "PRESETS"]

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3


def _default_seed() -> int:
    return int(os.environ.get("SUMMABILITY_SEED", "0"))


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_ALLOWED_FIELDS = {
    "summing": {"kind", "points", "v", "w", "s", "r", "seed", "scale"},
    "pdt": {"kind", "t", "atom_sets", "exponents", "data_points", "homogeneous",
            "seed", "scale"},
    "operator": {"kind", "matrix", "domain_norm", "target_norm", "test_grid",
                 "p", "samples", "seed", "scale"},
    "tensor": {"kind", "order", "dims", "coefficients", "target_norm",
               "test_grids", "anchor", "y_grid", "variant", "q", "qs",
               "weight_grid", "a_table", "p", "samples", "seed", "scale"},
    "measures": {"kind", "constant", "measures"},
}
_POINT_FIELDS = {"label", "s", "r_tables"}


def _reject_bad_number(text: str):
    raise ParseError(f"non-finite number {text!r} is not allowed")


def _int_field(doc: dict, name: str, default: int | None, minimum: int | None = None):
    value = doc.get(name, default)
    if value is None:
        return None
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    return value


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh, parse_constant=_reject_bad_number)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("top level must be a JSON object")
    return doc


def _check_fields(doc: dict, kind: str):
    extra = set(doc) - _ALLOWED_FIELDS[kind]
    if extra:
        raise ValidationError(f"unknown fields for kind {kind!r}: {sorted(extra)}")


def _numbers(path: str, value, depth: int):
    if depth == 0:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ValidationError(f"{path} must be a number")
        if not math.isfinite(float(value)):
            raise ValidationError(f"{path} must be finite")
        return float(value)
    if not isinstance(value, list):
        raise ValidationError(f"{path} must be an array")
    return [_numbers(f"{path}[{i}]", v, depth - 1) for i, v in enumerate(value)]


def _table(path: str, value, rows: int | None = None, cols: int | None = None):
    tab = _numbers(path, value, 2)
    if rows is not None and len(tab) != rows:
        raise ValidationError(f"{path} has {len(tab)} rows, expected {rows}")
    widths = {len(r) for r in tab}
    if len(widths) > 1:
        raise ValidationError(f"{path} rows have inconsistent lengths {sorted(widths)}")
    if cols is not None and tab and len(tab[0]) != cols:
        raise ValidationError(f"{path} has {len(tab[0])} columns, expected {cols}")
    return tab


@dataclass(frozen=True)
class OperatorFile:
    spec: builders.OperatorSpec
    p: float
    samples: int | None
    seed: int


@dataclass(frozen=True)
class TensorFile:
    spec: builders.TensorSpec
    variant: str
    q: float | None
    qs: tuple[float, ...] | None
    weight_grid: tuple[float, ...] | None
    a_table: tuple[float, ...] | None
    p: float
    samples: int | None
    seed: int


def parse_instance(path: str):
    """Validated instance of the declared kind.

    Returns a SummingInstance, a PdtInstance, an OperatorFile or a
    TensorFile.  Rejects NaN/Inf, unknown fields and shape mismatches with
    messages naming the offending row or field.
    """
    doc = _load_json(path)
    kind = doc.get("kind")
    if kind not in ("summing", "pdt", "operator", "tensor"):
        raise ValidationError(f"unknown kind {kind!r}")
    _check_fields(doc, kind)

    if kind == "summing":
        for fieldname in ("points", "v", "w", "s", "r"):
            if fieldname not in doc:
                raise ValidationError(f"missing field {fieldname!r}")
        points = [str(x) for x in doc["points"]]
        vs = [str(x) for x in doc["v"]]
        ws = [str(x) for x in doc["w"]]
        s = _table("s", doc["s"], rows=len(points), cols=len(vs))
        r = _table("r", doc["r"], rows=len(points), cols=len(ws))
        try:
            return SummingInstance(
                point_ids=tuple(points), v_ids=tuple(vs), w_ids=tuple(ws),
                s_table=np.asarray(s), r_table=np.asarray(r),
            )
        except SummabilityError as exc:
            raise ValidationError(str(exc)) from exc

    if kind == "pdt":
        for fieldname in ("t", "atom_sets", "exponents", "data_points"):
            if fieldname not in doc:
                raise ValidationError(f"missing field {fieldname!r}")
        t = doc["t"]
        atom_sets = [[str(a) for a in ks] for ks in doc["atom_sets"]]
        if not isinstance(t, int) or t != len(atom_sets):
            raise ValidationError(f"t = {t!r} but {len(atom_sets)} atom_sets")
        parts = _numbers("exponents", doc["exponents"], 1)
        if len(parts) != t:
            raise ValidationError(f"{len(parts)} exponents for t = {t}")
        labels, svals = [], []
        r_tables = [[] for _ in range(t)]
        for j, rec in enumerate(doc["data_points"]):
            where = f"data_points[{j}]"
            if not isinstance(rec, dict):
                raise ValidationError(f"{where} must be an object")
            extra = set(rec) - _POINT_FIELDS
            if extra:
                raise ValidationError(f"{where} has unknown fields {sorted(extra)}")
            for fieldname in _POINT_FIELDS:
                if fieldname not in rec:
                    raise ValidationError(f"{where} missing field {fieldname!r}")
            labels.append(str(rec["label"]))
            svals.append(_numbers(f"{where}.s", rec["s"], 0))
            rows = rec["r_tables"]
            if not isinstance(rows, list) or len(rows) != t:
                raise ValidationError(f"{where}.r_tables must have {t} rows")
            for k in range(t):
                row = _numbers(f"{where}.r_tables[{k}]", rows[k], 1)
                if len(row) != len(atom_sets[k]):
                    raise ValidationError(
                        f"{where}.r_tables[{k}] has {len(row)} entries, "
                        f"expected {len(atom_sets[k])}"
                    )
                r_tables[k].append(row)
        try:
            return PdtInstance(
                atom_sets=tuple(tuple(ks) for ks in atom_sets),
                exponents=harmonic_combine(parts),
                labels=tuple(labels),
                s_values=np.asarray(svals),
                r_tables=tuple(np.asarray(tab) for tab in r_tables),
                homogeneous=bool(doc.get("homogeneous", True)),
            )
        except SummabilityError as exc:
            raise ValidationError(str(exc)) from exc

    if kind == "operator":
        if "matrix" not in doc:
            raise ValidationError("missing field 'matrix'")
        try:
            spec = builders.OperatorSpec(
                matrix=tuple(tuple(row) for row in _table("matrix", doc["matrix"])),
                domain_norm=str(doc.get("domain_norm", "sup")),
                target_norm=str(doc.get("target_norm", "two")),
                test_grid=None if "test_grid" not in doc else tuple(
                    tuple(x) for x in _table("test_grid", doc["test_grid"])
                ),
            )
        except SummabilityError as exc:
            raise ValidationError(str(exc)) from exc
        return OperatorFile(
            spec=spec,
            p=_numbers("p", doc.get("p", 2.0), 0),
            samples=_int_field(doc, "samples", None, minimum=1),
            seed=_int_field(doc, "seed", _default_seed()),
        )

    for fieldname in ("order", "dims", "coefficients"):
        if fieldname not in doc:
            raise ValidationError(f"missing field {fieldname!r}")
    try:
        spec = builders.TensorSpec(
            order=int(doc["order"]),
            dims=tuple(int(d) for d in doc["dims"]),
            coefficients=doc["coefficients"],
            target_norm=str(doc.get("target_norm", "two")),
            test_grids=None if "test_grids" not in doc else tuple(
                tuple(tuple(x) for x in _table(f"test_grids[{l}]", g))
                for l, g in enumerate(doc["test_grids"])
            ),
            anchor=None if "anchor" not in doc else tuple(
                tuple(a) for a in _table("anchor", doc["anchor"])
            ),
            y_grid=None if "y_grid" not in doc else tuple(
                tuple(y) for y in _table("y_grid", doc["y_grid"])
            ),
        )
    except (SummabilityError, TypeError) as exc:
        raise ValidationError(str(exc)) from exc
    variant = str(doc.get("variant", "semi-integral"))
    if variant not in ("semi-integral", "cohen", "weighted", "strongly-summing"):
        raise ValidationError(f"unknown tensor variant {variant!r}")
    return TensorFile(
        spec=spec,
        variant=variant,
        q=None if "q" not in doc else _numbers("q", doc["q"], 0),
        qs=None if "qs" not in doc else tuple(_numbers("qs", doc["qs"], 1)),
        weight_grid=None if "weight_grid" not in doc
        else tuple(_numbers("weight_grid", doc["weight_grid"], 1)),
        a_table=None if "a_table" not in doc
        else tuple(_numbers("a_table", doc["a_table"], 1)),
        p=_numbers("p", doc.get("p", 2.0), 0),
        samples=_int_field(doc, "samples", None, minimum=1),
        seed=_int_field(doc, "seed", _default_seed()),
    )


def parse_measures(path: str) -> tuple[float, list[MeasureVector]]:
    doc = _load_json(path)
    if doc.get("kind") != "measures":
        raise ValidationError(f"expected kind 'measures', got {doc.get('kind')!r}")
    _check_fields(doc, "measures")
    if "constant" not in doc or "measures" not in doc:
        raise ValidationError("measures file needs 'constant' and 'measures'")
    constant = _numbers("constant", doc["constant"], 0)
    out = []
    for k, rec in enumerate(doc["measures"]):
        if not isinstance(rec, dict) or set(rec) != {"atoms", "mass"}:
            raise ValidationError(f"measures[{k}] must have exactly atoms and mass")
        mass = _numbers(f"measures[{k}].mass", rec["mass"], 1)
        try:
            out.append(MeasureVector(tuple(str(a) for a in rec["atoms"]), np.asarray(mass)))
        except SummabilityError as exc:
            raise ValidationError(f"measures[{k}]: {exc}") from exc
    return constant, out


def emit_instance(obj) -> dict:
    """JSON document for an instance; parse(emit(x)) reproduces x exactly."""
    if isinstance(obj, SummingInstance):
        return {
            "kind": "summing",
            "points": list(obj.point_ids),
            "v": list(obj.v_ids),
            "w": list(obj.w_ids),
            "s": [list(map(float, row)) for row in obj.s_table],
            "r": [list(map(float, row)) for row in obj.r_table],
        }
    if isinstance(obj, PdtInstance):
        return {
            "kind": "pdt",
            "t": obj.t,
            "atom_sets": [list(ks) for ks in obj.atom_sets],
            "exponents": [float(p) for p in obj.exponents.parts],
            "homogeneous": obj.homogeneous,
            "data_points": [
                {
                    "label": obj.labels[j],
                    "s": float(obj.s_values[j]),
                    "r_tables": [
                        list(map(float, obj.r_tables[k][j])) for k in range(obj.t)
                    ],
                }
                for j in range(obj.n_points)
            ],
        }
    raise ValidationError(f"cannot emit {type(obj).__name__}")


# ---------------------------------------------------------------------------
# result serialization
# ---------------------------------------------------------------------------


def _jsonable(value) -> Any:
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return repr(value)
        return value
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer)):
        return _jsonable(value.item())
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, WeightVector):
        return {"weights": list(value.weights), "integral": value.integral}
    if isinstance(value, MeasureVector):
        return {"atoms": list(value.atoms), "mass": _jsonable(value.mass)}
    if isinstance(value, ScaledFamily):
        return {
            "point_indices": list(value.point_indices),
            "eta": list(value.eta),
            "thetas": [list(t) for t in value.thetas],
        }
    if isinstance(value, InfeasibilityWitness):
        return {
            "point_labels": list(value.point_labels),
            "weights": _jsonable(value.weights),
            "certified_bound": _jsonable(value.certified_bound),
            "constant": value.constant,
            "required_constant": _jsonable(value.required_constant),
        }
    if isinstance(value, summing.Certificate):
        return {
            "constant": _jsonable(value.constant),
            "kind": value.kind,
            "witness": _jsonable(value.witness),
            "slack": _jsonable(value.slack),
            "metadata": _jsonable(value.metadata),
        }
    if isinstance(value, inclusion.InclusionReport):
        return {
            "exponents": {"p1": value.exponents.p1, "q1": value.exponents.q1,
                          "p2": value.exponents.p2, "q2": value.exponents.q2},
            "alpha": value.alpha,
            "premise": _jsonable(value.premise),
            "predicted": _jsonable(value.predicted),
            "worst_slack": value.worst_slack,
            "worst_family": _jsonable(value.worst_family),
            "families_checked": value.families_checked,
            "pass": value.passed,
        }
    if isinstance(value, pdt.SlackReport):
        return {
            "min_slack": value.min_slack,
            "argmin_point": value.argmin_point,
            "pass": value.passed,
            "per_point": [
                {"label": ps.label, "tau": list(ps.tau), "bound": ps.bound,
                 "slack": ps.slack}
                for ps in value.per_point
            ],
        }
    if isinstance(value, Exponents):
        return {"p1": value.p1, "q1": value.q1, "p2": value.p2, "q2": value.q2}
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _digest(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def _file_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return _digest(fh.read())


# ---------------------------------------------------------------------------
# instance adaptation per command
# ---------------------------------------------------------------------------


def _as_summing(parsed) -> SummingInstance:
    if isinstance(parsed, SummingInstance):
        return parsed
    if isinstance(parsed, OperatorFile):
        return builders.build_linfty_linear(parsed.spec, p=parsed.p).summing
    if isinstance(parsed, TensorFile):
        build = builders.build_semi_integral(parsed.spec, p=parsed.p)
        if build.multiplicative is None:
            raise ValidationError("anchored tensor has no summing view")
        return build.multiplicative.base
    raise ValidationError(f"{type(parsed).__name__} has no summing view")


def _as_pdt(parsed) -> PdtInstance:
    if isinstance(parsed, PdtInstance):
        return parsed
    if isinstance(parsed, OperatorFile):
        if parsed.spec.domain_norm == "sup":
            return builders.build_linfty_linear(parsed.spec, p=parsed.p).pdt
        return builders.build_sampled_dual(
            parsed.spec, samples=parsed.samples or 128, seed=parsed.seed, p=parsed.p
        )
    if isinstance(parsed, TensorFile):
        if parsed.variant == "cohen":
            if parsed.q is None:
                raise ValidationError("cohen variant needs field 'q'")
            return builders.build_cohen(parsed.spec, q=parsed.q)
        if parsed.variant == "weighted":
            if parsed.qs is None or parsed.weight_grid is None:
                raise ValidationError("weighted variant needs 'qs' and 'weight_grid'")
            return builders.build_weighted_dominated(
                parsed.spec, qs=parsed.qs, weight_grid=parsed.weight_grid,
                a_table=parsed.a_table,
            )
        if parsed.variant == "strongly-summing":
            return builders.build_strongly_summing_sampled(
                parsed.spec, samples=parsed.samples or 64, seed=parsed.seed,
                p=parsed.p,
            )
        return builders.build_semi_integral(parsed.spec, p=parsed.p).pdt
    raise ValidationError(f"{type(parsed).__name__} has no domination view")


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


def _preset_identity() -> SummingInstance:
    spec = builders.OperatorSpec(matrix=((1.0, 0.0), (0.0, 1.0)))
    return builders.build_linfty_linear(spec, p=2.0).summing


def _preset_pi2_identity() -> PdtInstance:
    spec = builders.OperatorSpec(matrix=((1.0, 0.0), (0.0, 1.0)))
    return builders.build_linfty_linear(spec, p=2.0).pdt


def _preset_two_point() -> PdtInstance:
    return PdtInstance(
        atom_sets=(("p1", "p2"),),
        exponents=harmonic_combine([1.0]),
        labels=("d1", "d2"),
        s_values=np.array([1.0, 1.0]),
        r_tables=(np.array([[1.0, 0.0], [0.0, 1.0]]),),
    )


_COHEN_GRID = ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0))


def cohen_spec(coefficients=None) -> builders.TensorSpec:
    if coefficients is None:
        coefficients = (((1.0, 0.0), (0.0, 1.0)), ((0.0, 1.0), (1.0, 0.0)))
    return builders.TensorSpec(
        order=2, dims=(2, 2), coefficients=coefficients, target_norm="one",
        test_grids=(_COHEN_GRID, _COHEN_GRID), y_grid=_COHEN_GRID,
    )


def _preset_cohen() -> PdtInstance:
    return builders.build_cohen(cohen_spec(), q=2.0)


PRESETS = {
    "identity": _preset_identity,
    "two-point-pdt": _preset_two_point,
    "cohen-2x2": _preset_cohen,
    "pi2-identity-d2": _preset_pi2_identity,
}


def preset_instance(name: str):
    if name not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}; have {sorted(PRESETS)}")
    return PRESETS[name]()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_summing_constant(args) -> tuple[dict, bool]:
    inst = _as_summing(parse_instance(args.infile))
    if args.alpha is None or args.alpha == 1.0:
        cert = summing.summing_constant_exact(inst, args.q, args.p)
    else:
        cert = summing.summing_constant_bruteforce(
            inst, args.q, args.p, alpha=args.alpha, budget=args.budget
        )
    return {"certificate": _jsonable(cert)}, math.isfinite(cert.constant)


def _cmd_check_inclusion(args) -> tuple[dict, bool]:
    e = Exponents(p1=args.p1, q1=args.q1, p2=args.p2, q2=args.q2)
    parsed = parse_instance(args.infile)
    if args.multilinear:
        scalars = tuple(float(x) for x in args.scalars.split(","))
        minst = inclusion.MultiplicativeInstance(
            base=_as_summing(parsed), scalar_grid=scalars
        )
        report = inclusion.verify_multilinear_inclusion(minst, e, budget=args.budget)
    else:
        report = inclusion.verify_inclusion(_as_summing(parsed), e, budget=args.budget)
    return {"report": _jsonable(report)}, report.passed


def _cmd_synthesize(args) -> tuple[dict, bool]:
    inst = _as_pdt(parse_instance(args.infile))
    got = pdt.synthesize_measures(
        inst, args.constant, tol=args.tol, max_iters=args.max_iters
    )
    if isinstance(got, InfeasibilityWitness):
        return {"infeasible": _jsonable(got)}, False
    report = pdt.verify_domination(inst, args.constant, got)
    return {
        "measures": {"kind": "measures", "constant": args.constant,
                     "measures": [_jsonable(m) for m in got]},
        "verification": _jsonable(report),
    }, report.passed


def _cmd_verify_domination(args) -> tuple[dict, bool]:
    inst = _as_pdt(parse_instance(args.infile))
    constant, measures = parse_measures(args.measures)
    report = pdt.verify_domination(inst, constant, measures)
    return {"constant": constant, "report": _jsonable(report)}, report.passed


def _cmd_duality_gap(args) -> tuple[dict, bool]:
    inst = _as_pdt(parse_instance(args.infile))
    gap = pdt.duality_gap(inst, tol=args.tol, budget=args.budget)
    result = {
        "lower": gap["lower"],
        "upper": _jsonable(gap["upper"]),
        "lower_budget": _jsonable(gap["lower_budget"]),
        "lower_saturated": _jsonable(gap["lower_saturated"]),
        "gap_relative": gap["gap_relative"],
    }
    return result, bool(gap["pass"])


def _cmd_demo(args) -> tuple[dict, bool]:
    name = args.name
    inst = preset_instance(name)
    if name == "identity":
        report = inclusion.verify_inclusion(inst, Exponents(1, 1, 2, 2), budget=6)
        return {"preset": name, "report": _jsonable(report)}, report.passed
    if name == "two-point-pdt":
        cert = pdt.best_constant_duality(inst, tol=1e-9)
        ok = abs(cert.constant - 2.0) <= 1e-9
        return {"preset": name, "certificate": _jsonable(cert),
                "expected_constant": 2.0}, ok
    if name == "pi2-identity-d2":
        cert = pdt.best_constant_duality(inst, tol=1e-7)
        target = math.sqrt(2.0)
        ok = abs(cert.constant - target) <= 1e-6 * target
        return {"preset": name, "certificate": _jsonable(cert),
                "expected_constant": target}, ok
    gap = pdt.duality_gap(inst, tol=1e-6, budget=4)
    measures = gap["upper"].witness
    rt = pdt.roundtrip_check(
        inst, gap["upper"].constant * (1.0 + 1e-6), measures, budget=4
    )
    ok = bool(gap["pass"]) and rt >= -1e-8
    return {"preset": name, "gap_relative": gap["gap_relative"],
            "upper": _jsonable(gap["upper"]), "lower": gap["lower"],
            "roundtrip_min_slack": rt}, ok


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="summability",
        description="Summing constants, inclusion checks and domination measures "
                    "on finite instances.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("summing-constant", help="best summing constant")
    sc.add_argument("--in", dest="infile", required=True)
    sc.add_argument("--q", type=float, required=True)
    sc.add_argument("--p", type=float, required=True)
    sc.add_argument("--alpha", type=float, default=None)
    sc.add_argument("--budget", type=int, default=8)
    sc.set_defaults(fn=_cmd_summing_constant)

    ci = sub.add_parser("check-inclusion", help="verify an inclusion transform")
    ci.add_argument("--in", dest="infile", required=True)
    ci.add_argument("--p1", type=float, required=True)
    ci.add_argument("--q1", type=float, required=True)
    ci.add_argument("--p2", type=float, required=True)
    ci.add_argument("--q2", type=float, required=True)
    ci.add_argument("--budget", type=int, default=6)
    ci.add_argument("--multilinear", action="store_true")
    ci.add_argument("--scalars", default="0.25,0.5,1,2,4")
    ci.set_defaults(fn=_cmd_check_inclusion)

    sm = sub.add_parser("synthesize-measure", help="find domination measures")
    sm.add_argument("--in", dest="infile", required=True)
    sm.add_argument("--constant", type=float, required=True)
    sm.add_argument("--tol", type=float, default=1e-8)
    sm.add_argument("--max-iters", type=int, default=20_000)
    sm.set_defaults(fn=_cmd_synthesize)

    vd = sub.add_parser("verify-domination", help="check measures pointwise")
    vd.add_argument("--in", dest="infile", required=True)
    vd.add_argument("--measures", required=True)
    vd.set_defaults(fn=_cmd_verify_domination)

    dg = sub.add_parser("duality-gap", help="family bound vs measure bound")
    dg.add_argument("--in", dest="infile", required=True)
    dg.add_argument("--tol", type=float, default=1e-6)
    dg.add_argument("--budget", type=int, default=4)
    dg.set_defaults(fn=_cmd_duality_gap)

    dm = sub.add_parser("demo", help="run a named preset")
    dm.add_argument("name", choices=sorted(PRESETS))
    dm.set_defaults(fn=_cmd_demo)
    return ap


def execute(argv: list[str]) -> tuple[dict, int]:
    """Run one command; returns (report, exit code)."""
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return {"command": argv[0] if argv else "", "error": "usage"}, (
            EXIT_USAGE if exc.code else EXIT_PASS
        )
    t0 = time.monotonic()
    report: dict[str, Any] = {"command": args.command}
    if getattr(args, "infile", None):
        try:
            report["inputs_digest"] = _file_digest(args.infile)
        except OSError:
            report["inputs_digest"] = None
    elif args.command == "demo":
        doc = emit_instance(preset_instance(args.name))
        report["inputs_digest"] = _digest(
            json.dumps(doc, sort_keys=True).encode()
        )
    try:
        result, passed = args.fn(args)
        report["result"] = _jsonable(result)
        report["pass"] = bool(passed)
        code = EXIT_PASS if passed else EXIT_VIOLATION
    except (ParseError, ValidationError) as exc:
        report["result"] = {"error": type(exc).__name__, "message": str(exc)}
        report["pass"] = False
        code = EXIT_USAGE
    except (NotSumming, NotDominated) as exc:
        witness = getattr(exc, "family", None)
        report["result"] = {
            "error": type(exc).__name__, "message": str(exc),
            "witness": _jsonable(witness),
        }
        report["pass"] = False
        code = EXIT_VIOLATION
    except PremiseNotCertified as exc:
        report["result"] = {"error": "PremiseNotCertified", "message": str(exc)}
        report["pass"] = False
        code = EXIT_VIOLATION
    except (IterationLimit, NumericalFailure) as exc:
        report["result"] = {"error": type(exc).__name__, "message": str(exc)}
        report["pass"] = False
        code = EXIT_SOLVER
    report["runtime_ms"] = int((time.monotonic() - t0) * 1000)
    return report, code


def main(argv: list[str] | None = None) -> int:
    report, code = execute(sys.argv[1:] if argv is None else argv)
    json.dump(report, sys.stdout, indent=2, sort_keys=True, allow_nan=False)
    sys.stdout.write("\n")
    summary = f"{report.get('command')}: pass={report.get('pass')}"
    result = report.get("result", {})
    if isinstance(result, dict) and "error" in result:
        summary += f" error={result['error']}"
    print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

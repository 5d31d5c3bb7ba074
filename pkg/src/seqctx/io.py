"""JSON encoding of every public data type.

Rationals are always written as lowest-terms ``"num/den"`` strings, bit
vectors as lists of 0/1.  Parsers raise ValidationError naming the field
that failed.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .boolfn import AffineFn, BoolFn
from .errors import ValidationError
from .fraction import EmpiricalModel, NCFResult
from .gf2 import (
    GF2AffineMap,
    OnticDistribution,
    OnticState,
    OntMeasurement,
    Partition,
    gates_to_map,
    map_to_gates,
)
from .parity import NCAssignment, SearchResult
from .qsim import ResourceSpec
from .tbqc import BoundReport, Protocol, RunReport, RunRow, SweepRow


def fmt_q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(value, field: str) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(f"{field}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ValidationError(f"{field}: expected a rational like \"1/4\", got {value!r}")


def _get(obj: dict, key: str, field: str | None = None):
    if not isinstance(obj, dict):
        raise ValidationError(f"{field or key}: expected a JSON object")
    try:
        return obj[key]
    except KeyError:
        raise ValidationError(f"{field or key}: missing required field")


def _bits(value, field: str, length: int | None = None) -> tuple[int, ...]:
    if isinstance(value, str):
        value = [c for c in value]
    if not isinstance(value, (list, tuple)):
        raise ValidationError(f"{field}: expected a list of bits")
    try:
        out = tuple(int(v) for v in value)
    except (TypeError, ValueError):
        raise ValidationError(f"{field}: expected a list of bits")
    if any(v not in (0, 1) for v in out) or any(isinstance(v, bool) for v in value):
        raise ValidationError(f"{field}: entries must be 0 or 1")
    if length is not None and len(out) != length:
        raise ValidationError(f"{field}: expected {length} bits, got {len(out)}")
    return out


def _int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{field}: expected an integer, got {value!r}")
    return value


def _wrap(field: str, fn, *args):
    try:
        return fn(*args)
    except ValidationError as exc:
        if str(exc).startswith(field):
            raise
        raise ValidationError(f"{field}: {exc}") from exc


# --- qsim ---------------------------------------------------------------

def resource_spec_to_json(spec: ResourceSpec) -> dict:
    return {"gate_angles_over_pi": list(spec.gate_angles), "noise_q": fmt_q(spec.noise_q)}


def resource_spec_from_json(obj: dict) -> ResourceSpec:
    angles = _get(obj, "gate_angles_over_pi")
    if not isinstance(angles, list) or not all(
        isinstance(a, (int, float)) and not isinstance(a, bool) for a in angles
    ):
        raise ValidationError("gate_angles_over_pi: expected a list of numbers")
    q = parse_q(obj.get("noise_q", "0/1"), "noise_q")
    return ResourceSpec(tuple(angles), q)


# --- boolfn -------------------------------------------------------------

def boolfn_to_json(f: BoolFn) -> dict:
    return {"r": f.r, "table": list(f.table)}


def boolfn_from_json(obj: dict, field: str = "function") -> BoolFn:
    r = _int(_get(obj, "r", f"{field}.r"), f"{field}.r")
    table = _bits(_get(obj, "table", f"{field}.table"), f"{field}.table")
    return _wrap(field, BoolFn, r, table)


def affine_to_json(h: AffineFn) -> dict:
    return {"b": list(h.b), "c0": h.c0}


# --- gf2 ----------------------------------------------------------------

def map_to_json(f: GF2AffineMap, gates: bool = False) -> dict:
    if gates:
        try:
            return {"s": f.s, "gates": map_to_gates(f)}
        except ValidationError:
            pass
    return {"s": f.s, "A": f.A_lists(), "u": f.u_list()}


def map_from_json(obj: dict, s: int | None = None, field: str = "map") -> GF2AffineMap:
    if not isinstance(obj, dict):
        raise ValidationError(f"{field}: expected a JSON object")
    if "s" in obj:
        s_here = _int(obj["s"], f"{field}.s")
        if s is not None and s_here != s:
            raise ValidationError(f"{field}.s: {s_here} does not match dimension {s}")
        s = s_here
    if s is None:
        raise ValidationError(f"{field}.s: missing required field")
    if "gates" in obj:
        gates = obj["gates"]
        if not isinstance(gates, list) or not all(isinstance(g, list) and g for g in gates):
            raise ValidationError(f"{field}.gates: expected a list of gates")
        return _wrap(f"{field}.gates", gates_to_map, s, gates)
    if "A" not in obj and "u" not in obj:
        raise ValidationError(f"{field}: needs either \"gates\" or \"A\"/\"u\"")
    A = obj.get("A", [[0] * s for _ in range(s)])
    u = _bits(obj.get("u", [0] * s), f"{field}.u", s)
    if not isinstance(A, list) or len(A) != s:
        raise ValidationError(f"{field}.A: expected a {s}x{s} matrix")
    rows = [_bits(row, f"{field}.A", s) for row in A]
    return GF2AffineMap.from_lists(rows, u)


def state_from_json(value, s: int, field: str) -> OnticState:
    return OnticState.from_bits(_bits(value, field, s))


def assignment_to_json(a: NCAssignment, gates: bool = True) -> dict:
    out: dict[str, Any] = {
        "s": a.s,
        "controls": sorted(a.partition.controls),
        "targets": sorted(a.partition.targets),
        "slots": [[map_to_json(m, gates) for m in pair] for pair in a.slots],
        "measurement": {"map": map_to_json(a.measurement.pre_map, gates), "j": a.measurement.j},
    }
    if isinstance(a.preparation, OnticState):
        out["lambda"] = a.preparation.to_list()
    else:
        out["preparation"] = [
            {"state": st.to_list(), "weight": fmt_q(w)} for st, w in a.preparation.items
        ]
    if a.relaxed_measurement:
        out["relaxed_measurement"] = True
    return out


def assignment_from_json(obj: dict) -> NCAssignment:
    s = _int(_get(obj, "s"), "s")
    if s < 1:
        raise ValidationError(f"s: must be >= 1, got {s}")
    controls = _get(obj, "controls")
    targets = _get(obj, "targets")
    if not isinstance(controls, list) or not isinstance(targets, list):
        raise ValidationError("controls/targets: expected lists of bit indices")
    part = _wrap("partition", Partition, {_int(i, "controls") for i in controls},
                 {_int(i, "targets") for i in targets})
    _wrap("partition", part.check, s)
    slots_raw = _get(obj, "slots")
    if not isinstance(slots_raw, list) or not all(
        isinstance(pair, list) and len(pair) == 2 for pair in slots_raw
    ):
        raise ValidationError("slots: expected a list of [map_k0, map_k1] pairs")
    slots = tuple(
        tuple(map_from_json(m, s, f"slots[{n}][{k}]") for k, m in enumerate(pair))
        for n, pair in enumerate(slots_raw)
    )
    meas = _get(obj, "measurement")
    pre = map_from_json(_get(meas, "map", "measurement.map"), s, "measurement.map")
    j = _int(_get(meas, "j", "measurement.j"), "measurement.j")
    measurement = _wrap("measurement.j", OntMeasurement, pre, j)
    if "lambda" in obj:
        prep = state_from_json(obj["lambda"], s, "lambda")
    elif "preparation" in obj:
        items_raw = obj["preparation"]
        if not isinstance(items_raw, list):
            raise ValidationError("preparation: expected a list of weighted states")
        items = tuple(
            (
                state_from_json(_get(it, "state", f"preparation[{n}].state"), s, f"preparation[{n}].state"),
                parse_q(_get(it, "weight", f"preparation[{n}].weight"), f"preparation[{n}].weight"),
            )
            for n, it in enumerate(items_raw)
        )
        prep = _wrap("preparation", OnticDistribution, items)
    else:
        raise ValidationError("lambda: missing initial ontic state (or \"preparation\")")
    relaxed = bool(obj.get("relaxed_measurement", False))
    return _wrap("slots", NCAssignment, part, slots, measurement, prep, relaxed)


# --- fraction -----------------------------------------------------------

def model_to_json(e: EmpiricalModel) -> dict:
    return {
        "t": e.t,
        "contexts": [
            {"k": list(k), "p0": fmt_q(p0), "p1": fmt_q(p1)} for k, (p0, p1) in e.items()
        ],
    }


def model_from_json(obj: dict) -> EmpiricalModel:
    t = _int(_get(obj, "t"), "t")
    raw = _get(obj, "contexts")
    if not isinstance(raw, list):
        raise ValidationError("contexts: expected a list")
    table = {}
    for n, ctx in enumerate(raw):
        k = _bits(_get(ctx, "k", f"contexts[{n}].k"), f"contexts[{n}].k", t)
        p0 = parse_q(_get(ctx, "p0", f"contexts[{n}].p0"), f"contexts[{n}].p0")
        p1 = parse_q(_get(ctx, "p1", f"contexts[{n}].p1"), f"contexts[{n}].p1")
        if k in table:
            raise ValidationError(f"contexts[{n}].k: duplicate context {list(k)}")
        table[k] = (p0, p1)
    return EmpiricalModel(t, table)


def ncf_result_to_json(res: NCFResult) -> dict:
    return {
        "ncf": fmt_q(res.ncf),
        "cf": fmt_q(res.cf),
        "strongly_contextual": res.ncf == 0,
        "weights": [dict(affine_to_json(h), weight=fmt_q(w)) for h, w in res.weights.items()],
        "residual": None if res.residual is None else model_to_json(res.residual),
    }


def ncf_result_from_json(obj: dict) -> NCFResult:
    weights = {}
    for n, item in enumerate(_get(obj, "weights")):
        h = AffineFn(_bits(_get(item, "b"), f"weights[{n}].b"), _int(_get(item, "c0"), "c0"))
        weights[h] = parse_q(_get(item, "weight"), f"weights[{n}].weight")
    residual = obj.get("residual")
    omega = parse_q(_get(obj, "ncf"), "ncf")
    if parse_q(_get(obj, "cf"), "cf") != 1 - omega:
        raise ValidationError("cf: must equal 1 - ncf")
    if sum(weights.values(), Fraction(0)) != omega:
        raise ValidationError("weights: must sum to ncf")
    return NCFResult(omega, weights, None if residual is None else model_from_json(residual))


# --- tbqc ---------------------------------------------------------------

def resource_from_json(obj: dict):
    if not isinstance(obj, dict):
        raise ValidationError("resource: expected a JSON object")
    if "gate_angles_over_pi" in obj:
        return resource_spec_from_json(obj)
    if "contexts" in obj:
        return model_from_json(obj)
    if "slots" in obj:
        return assignment_from_json(obj)
    raise ValidationError(
        "resource: expected a qubit resource (gate_angles_over_pi), an empirical model "
        "(contexts) or an ontology assignment (slots)"
    )


def resource_to_json(res) -> dict:
    if isinstance(res, ResourceSpec):
        return resource_spec_to_json(res)
    if isinstance(res, EmpiricalModel):
        return model_to_json(res)
    return assignment_to_json(res)


def protocol_from_json(obj: dict) -> Protocol:
    if not isinstance(obj, dict):
        raise ValidationError("protocol: expected a JSON object")
    r = _int(_get(obj, "r"), "r")
    t = _int(_get(obj, "t"), "t")
    B_raw = _get(obj, "B")
    if not isinstance(B_raw, list):
        raise ValidationError("B: expected a matrix")
    B = tuple(_bits(row, "B", r) for row in B_raw)
    c = _bits(_get(obj, "c"), "c")
    try:
        resource = resource_from_json(_get(obj, "resource"))
    except ValidationError as exc:
        msg = str(exc)
        raise ValidationError(msg if msg.startswith("resource") else f"resource: {msg}") from exc
    target = boolfn_from_json(_get(obj, "target"), "target")
    return Protocol(r, t, B, c, resource, target)


def protocol_to_json(p: Protocol) -> dict:
    return {
        "r": p.r,
        "t": p.t,
        "B": [list(row) for row in p.B],
        "c": list(p.c),
        "resource": resource_to_json(p.resource),
        "target": boolfn_to_json(p.target),
    }


def run_report_to_json(rep: RunReport) -> dict:
    return {
        "rows": [
            {
                "i": list(row.i),
                "k": list(row.k),
                "p0": fmt_q(row.p0),
                "p1": fmt_q(row.p1),
                "fail": fmt_q(row.fail),
            }
            for row in rep.rows
        ],
        "epsilon": fmt_q(rep.epsilon),
    }


def run_report_from_json(obj: dict) -> RunReport:
    rows = []
    for n, row in enumerate(_get(obj, "rows")):
        rows.append(
            RunRow(
                _bits(_get(row, "i"), f"rows[{n}].i"),
                _bits(_get(row, "k"), f"rows[{n}].k"),
                parse_q(_get(row, "p0"), f"rows[{n}].p0"),
                parse_q(_get(row, "p1"), f"rows[{n}].p1"),
                parse_q(_get(row, "fail"), f"rows[{n}].fail"),
            )
        )
    epsilon = parse_q(_get(obj, "epsilon"), "epsilon")
    if rows and sum((row.fail for row in rows), Fraction(0)) / len(rows) != epsilon:
        raise ValidationError("epsilon: does not equal the mean failure probability")
    return RunReport(tuple(rows), epsilon)


def bound_to_json(rep: BoundReport) -> dict:
    return {
        "epsilon": fmt_q(rep.epsilon),
        "ncf": fmt_q(rep.ncf),
        "nu": fmt_q(rep.nu),
        "rhs": fmt_q(rep.rhs),
        "holds": rep.holds,
        "tight": rep.tight,
    }


def bound_from_json(obj: dict) -> BoundReport:
    vals = {k: parse_q(_get(obj, k), k) for k in ("epsilon", "ncf", "nu", "rhs")}
    rep = BoundReport(holds=bool(_get(obj, "holds")), tight=bool(_get(obj, "tight")), **vals)
    if rep.rhs != rep.ncf * rep.nu:
        raise ValidationError("rhs: must equal ncf * nu")
    return rep


SWEEP_FIELDS = ("q", "epsilon", "ncf", "nu", "rhs", "slack")


def sweep_to_json(rows: list[SweepRow]) -> dict:
    return {"rows": [{f: fmt_q(getattr(row, f)) for f in SWEEP_FIELDS} for row in rows]}


def sweep_from_json(obj: dict) -> list[SweepRow]:
    return [
        SweepRow(**{f: parse_q(_get(row, f), f"rows[{n}].{f}") for f in SWEEP_FIELDS})
        for n, row in enumerate(_get(obj, "rows"))
    ]


def search_to_json(res: SearchResult, s: int, part: Partition, target) -> dict:
    return {
        "s": s,
        "controls": sorted(part.controls),
        "targets": sorted(part.targets),
        "target": "".join(str(b) for b in target),
        "max_satisfied": res.max_satisfied,
        "assignments": res.assignments,
        "witness": assignment_to_json(res.witness, gates=True),
    }


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read file ({exc.strerror})") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


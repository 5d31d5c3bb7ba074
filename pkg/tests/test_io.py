import json
import random
from fractions import Fraction

import pytest

from seqctx import io
from seqctx.boolfn import BoolFn
from seqctx.errors import ValidationError
from seqctx.fraction import EmpiricalModel, ncf
from seqctx.gf2 import (
    GF2AffineMap,
    OnticDistribution,
    OnticState,
    Partition,
    all_partitions,
    cnot_gate,
    compose,
    not_gate,
)
from seqctx.parity import NCAssignment, evaluate_contexts, exhaustive_search, random_assignment
from seqctx.tbqc import and_protocol, resource_model, run, sweep_noise, verify_bound


def roundtrip(obj):
    return json.loads(io.dumps(obj))


def test_fmt_and_parse_q():
    assert io.fmt_q(Fraction(2, 4)) == "1/2"
    assert io.fmt_q(0) == "0/1"
    assert io.parse_q("3/6", "x") == Fraction(1, 2)
    assert io.parse_q(1, "x") == 1
    for bad in ("half", True, 0.5, None, "1/0"):
        with pytest.raises(ValidationError, match="^x"):
            io.parse_q(bad, "x")


def test_map_round_trip_both_forms():
    rng = random.Random(0)
    for _ in range(100):
        s = rng.randint(1, 4)
        f = GF2AffineMap(s, tuple(rng.getrandbits(s) for _ in range(s)), rng.getrandbits(s))
        assert io.map_from_json(roundtrip(io.map_to_json(f))) == f
        # gate form falls back to A/u when no gate list exists
        assert io.map_from_json(roundtrip(io.map_to_json(f, gates=True))) == f


def test_map_gate_form():
    f = compose(cnot_gate(0, 2, 3), not_gate(2, 3))
    obj = io.map_to_json(f, gates=True)
    assert "gates" in obj
    assert io.map_from_json(obj) == f
    assert io.map_from_json({"gates": [["NOT", 2], ["CNOT", 0, 2]]}, 3) == f


def test_map_errors_name_field():
    with pytest.raises(ValidationError, match=r"^m\.s"):
        io.map_from_json({"gates": []}, None, "m")
    with pytest.raises(ValidationError, match=r"^m\.A"):
        io.map_from_json({"s": 2, "A": [[0, 2], [0, 0]]}, None, "m")
    with pytest.raises(ValidationError, match=r"^m\.u"):
        io.map_from_json({"s": 2, "u": [0]}, None, "m")
    with pytest.raises(ValidationError, match=r"^m\.gates"):
        io.map_from_json({"s": 2, "gates": [["CNOT", 1, 1]]}, None, "m")
    with pytest.raises(ValidationError, match=r"^m\.s"):
        io.map_from_json({"s": 3, "gates": []}, 2, "m")


def test_boolfn_round_trip_and_errors():
    f = BoolFn(2, (0, 1, 1, 1))
    assert io.boolfn_from_json(roundtrip(io.boolfn_to_json(f))) == f
    with pytest.raises(ValidationError, match="^target"):
        io.boolfn_from_json({"r": 2, "table": [0, 1]}, "target")
    with pytest.raises(ValidationError, match=r"^function\.table"):
        io.boolfn_from_json({"r": 1, "table": [0, 3]})


def test_model_round_trip_keeps_order():
    model = EmpiricalModel(2, {(1, 1): ("1/3", "2/3"), (0, 0): (1, 0)})
    back = io.model_from_json(roundtrip(io.model_to_json(model)))
    assert back == model and back.contexts == model.contexts


def test_model_errors():
    with pytest.raises(ValidationError, match="p0"):
        io.model_from_json({"t": 1, "contexts": [{"k": [0], "p0": "x", "p1": "1/1"}]})
    with pytest.raises(ValidationError):
        io.model_from_json({"t": 1, "contexts": [{"k": [0], "p0": "1/2", "p1": "1/3"}]})


def test_ncf_result_round_trip():
    for q in (Fraction(0), Fraction(1, 4), Fraction(1)):
        res = ncf(resource_model(and_protocol(q)))
        back = io.ncf_result_from_json(roundtrip(io.ncf_result_to_json(res)))
        assert back.ncf == res.ncf and back.weights == res.weights
        assert back.residual == res.residual


def test_protocol_round_trip_all_resource_kinds():
    rng = random.Random(1)
    p = and_protocol(Fraction(1, 3))
    assert io.protocol_from_json(roundtrip(io.protocol_to_json(p))) == p
    q = p.with_resource(resource_model(p))
    assert io.protocol_from_json(roundtrip(io.protocol_to_json(q))) == q
    a = p.with_resource(random_assignment(3, rng))
    back = io.protocol_from_json(roundtrip(io.protocol_to_json(a)))
    assert run(back) == run(a)


def test_protocol_errors_name_field():
    good = io.protocol_to_json(and_protocol())
    bad = dict(good, target={"r": 1, "table": [0, 1]})
    with pytest.raises(ValidationError, match="target"):
        io.protocol_from_json(bad)
    bad = dict(good, resource={"gate_angles_over_pi": "x"})
    with pytest.raises(ValidationError, match="^resource"):
        io.protocol_from_json(bad)
    bad = dict(good, B=[[1, 0]])
    with pytest.raises(ValidationError, match="B"):
        io.protocol_from_json(bad)
    bad = {k: v for k, v in good.items() if k != "c"}
    with pytest.raises(ValidationError, match="^c"):
        io.protocol_from_json(bad)


def test_reports_round_trip():
    p = and_protocol(Fraction(1, 4))
    rep = run(p)
    assert io.run_report_from_json(roundtrip(io.run_report_to_json(rep))) == rep
    b = verify_bound(p)
    assert io.bound_from_json(roundtrip(io.bound_to_json(b))) == b
    rows = sweep_noise(p, [Fraction(n, 10) for n in range(11)])
    assert io.sweep_from_json(roundtrip(io.sweep_to_json(rows))) == rows


def test_report_consistency_checks():
    obj = io.run_report_to_json(run(and_protocol(Fraction(1, 4))))
    obj["epsilon"] = "1/2"
    with pytest.raises(ValidationError, match="^epsilon"):
        io.run_report_from_json(obj)
    obj = io.bound_to_json(verify_bound(and_protocol()))
    obj["rhs"] = "1/3"
    with pytest.raises(ValidationError, match="^rhs"):
        io.bound_from_json(obj)


@pytest.mark.parametrize("part", all_partitions(3), ids=lambda p: f"c{sorted(p.controls)}")
def test_search_witness_reparses_and_reevaluates(part):
    target = (0, 1, 1, 1)
    res = exhaustive_search(3, part, target)
    obj = roundtrip(io.search_to_json(res, 3, part, target))
    a = io.assignment_from_json(obj["witness"])
    assert a == res.witness
    hits = sum(o == t for o, t in zip(evaluate_contexts(a), target))
    assert hits == obj["max_satisfied"] == 3


def test_assignment_with_distribution_round_trip():
    a = random_assignment(2, random.Random(4), Partition({0}, {1}))
    prep = OnticDistribution(((OnticState(2, 0), Fraction(1, 4)), (OnticState(2, 3), Fraction(3, 4))))
    mixed = NCAssignment(a.partition, a.slots, a.measurement, prep)
    back = io.assignment_from_json(roundtrip(io.assignment_to_json(mixed)))
    assert all(back.distribution(k) == mixed.distribution(k) for k in [(0, 0, 0), (1, 1, 0)])


def test_assignment_class_violation_is_reported():
    obj = io.assignment_to_json(random_assignment(2, random.Random(5), Partition({0}, {1})))
    obj["slots"][0][0] = {"gates": [["NOT", 0]]}
    with pytest.raises(ValueError, match="slot"):
        io.assignment_from_json(obj)


def test_load_json_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ValidationError, match="malformed"):
        io.load_json(str(path))
    with pytest.raises(ValidationError, match="cannot read"):
        io.load_json(str(tmp_path / "missing.json"))

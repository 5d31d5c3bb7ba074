import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqctx.boolfn import BoolFn, affine_fit, nu_fwht
from seqctx.errors import ArityMismatch, MissingContext, ValidationError
from seqctx.fraction import EmpiricalModel, is_strongly_contextual
from seqctx.gf2 import OnticDistribution, OnticState, Partition
from seqctx.parity import NCAssignment, random_assignment
from seqctx.qsim import ResourceSpec
from seqctx.tbqc import (
    Protocol,
    and_protocol,
    computed_function,
    controls,
    fit_computed_affine,
    noncontextual_failure,
    realizable_contexts,
    resource_model,
    run,
    sweep_noise,
    verify_bound,
)

OR_TABLE = BoolFn(2, (0, 1, 1, 1))


def test_controls_examples():
    p = and_protocol()
    assert controls(p, (1, 0)) == (1, 0, 1)
    assert controls(p, (1, 1)) == (1, 1, 0)
    zero = Protocol(2, 3, ((0, 0),) * 3, (0, 0, 0), p.resource, OR_TABLE)
    assert all(controls(zero, i) == (0, 0, 0) for i in [(0, 0), (1, 0), (0, 1), (1, 1)])
    with pytest.raises(ArityMismatch):
        controls(p, (1,))


def test_run_and_protocol_deterministic():
    rep = run(and_protocol())
    assert rep.epsilon == 0
    outputs = {row.i: row.p1 for row in rep.rows}
    assert outputs == {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1}
    assert computed_function(rep, 2) == OR_TABLE


def test_run_noisy_and():
    assert run(and_protocol(Fraction(1, 4))).epsilon == Fraction(1, 8)


def test_run_xor_with_pi_gate():
    p = Protocol(2, 1, ((1, 1),), (0,), ResourceSpec((1.0,)), BoolFn.from_callable(2, lambda a, b: a ^ b))
    assert run(p).epsilon == 0


def test_verify_bound_examples():
    rep = verify_bound(and_protocol())
    assert (rep.epsilon, rep.ncf, rep.rhs, rep.holds, rep.tight) == (0, 0, 0, True, True)
    rep = verify_bound(and_protocol(Fraction(1, 4)))
    assert (rep.epsilon, rep.ncf, rep.nu, rep.rhs) == (Fraction(1, 8), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))
    assert rep.holds and rep.tight
    affine_target = Protocol(2, 3, and_protocol().B, (0, 0, 0), ResourceSpec((0.5,) * 3, Fraction(1, 3)),
                             BoolFn.from_callable(2, lambda a, b: a ^ b ^ 1))
    rep = verify_bound(affine_target)
    assert rep.nu == 0 and rep.rhs == 0 and rep.holds


@pytest.mark.parametrize(
    "q, eps, omega, rhs, slack",
    [
        (Fraction(0), Fraction(0), Fraction(0), Fraction(0), Fraction(0)),
        (Fraction(1, 4), Fraction(1, 8), Fraction(1, 2), Fraction(1, 8), Fraction(0)),
        (Fraction(1, 2), Fraction(1, 4), Fraction(1), Fraction(1, 4), Fraction(0)),
        (Fraction(3, 4), Fraction(3, 8), Fraction(1), Fraction(1, 4), Fraction(1, 8)),
        (Fraction(1), Fraction(1, 2), Fraction(1), Fraction(1, 4), Fraction(1, 4)),
    ],
)
def test_sweep_rows(q, eps, omega, rhs, slack):
    (row,) = sweep_noise(and_protocol(), [q])
    assert (row.q, row.epsilon, row.ncf, row.rhs, row.slack) == (q, eps, omega, rhs, slack)


def test_sweep_needs_qubit_resource():
    p = and_protocol()
    model = resource_model(p)
    with pytest.raises(ValidationError):
        sweep_noise(p.with_resource(model), [0])


def test_empirical_resource_missing_context():
    model = EmpiricalModel(3, {(0, 0, 0): (1, 0)})
    p = and_protocol().with_resource(model)
    with pytest.raises(MissingContext):
        run(p)


def test_protocol_validation_names_field():
    p = and_protocol()
    with pytest.raises(ValidationError, match="target"):
        Protocol(2, 3, p.B, p.c, p.resource, BoolFn(1, (0, 1)))
    with pytest.raises(ValidationError, match="B"):
        Protocol(2, 3, ((1, 0),), p.c, p.resource, OR_TABLE)
    with pytest.raises(ValidationError, match="resource"):
        Protocol(2, 2, ((1, 0), (0, 1)), (0, 0), p.resource, OR_TABLE)


def test_realizable_contexts_in_input_order():
    assert realizable_contexts(and_protocol()) == [(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 0)]


def _random_qubit_protocol(rng: random.Random) -> Protocol:
    r = rng.randint(1, 3)
    t = rng.randint(1, 4)
    base = rng.choice([Fraction(1, 2), Fraction(1, 3)])
    angles = tuple(float(base * rng.randint(0, 5)) for _ in range(t))
    q = Fraction(rng.randint(0, 8), 8)
    B = tuple(tuple(rng.getrandbits(1) for _ in range(r)) for _ in range(t))
    c = tuple(rng.getrandbits(1) for _ in range(t))
    target = BoolFn(r, tuple(rng.getrandbits(1) for _ in range(1 << r)))
    return Protocol(r, t, B, c, ResourceSpec(angles, q), target)


def _random_ontology_protocol(rng: random.Random) -> Protocol:
    r = rng.randint(1, 3)
    t = rng.randint(1, 4)
    s = rng.randint(2, 4)
    res = random_assignment(s, rng, t=t)
    B = tuple(tuple(rng.getrandbits(1) for _ in range(r)) for _ in range(t))
    c = tuple(rng.getrandbits(1) for _ in range(t))
    target = BoolFn(r, tuple(rng.getrandbits(1) for _ in range(1 << r)))
    return Protocol(r, t, B, c, res, target)


def test_bound_holds_on_random_qubit_protocols():
    rng = random.Random(21)
    for _ in range(150):
        p = _random_qubit_protocol(rng)
        rep = verify_bound(p)
        assert rep.holds
        omega, eps_nc = noncontextual_failure(p)
        if eps_nc is not None:
            assert rep.epsilon >= omega * eps_nc
            # the NC part can only compute affine functions of the input, on average
            assert eps_nc >= rep.nu


def test_ontology_resources_compute_affine_functions():
    rng = random.Random(22)
    for _ in range(150):
        p = _random_ontology_protocol(rng)
        f = computed_function(run(p), p.r)
        assert f is not None and affine_fit(f) is not None
        assert fit_computed_affine(p) == affine_fit(f)
        rep = verify_bound(p)
        assert rep.ncf == 1
        assert rep.epsilon >= rep.nu and rep.holds


def test_deterministic_nonlinear_runs_need_strong_contextuality():
    rng = random.Random(23)
    found = 0
    for _ in range(400):
        r, t = rng.randint(2, 3), rng.randint(2, 4)
        angles = tuple(rng.choice([0.5, 1.0, 1.5]) for _ in range(t))
        B = tuple(tuple(rng.getrandbits(1) for _ in range(r)) for _ in range(t))
        c = tuple(rng.getrandbits(1) for _ in range(t))
        p = Protocol(r, t, B, c, ResourceSpec(angles), BoolFn(r, (0,) * (1 << r)))
        f = computed_function(run(p), p.r)
        if f is None:
            continue
        p = Protocol(p.r, p.t, p.B, p.c, p.resource, f)
        assert run(p).epsilon == 0
        if nu_fwht(f) > 0:
            found += 1
            assert is_strongly_contextual(resource_model(p))
    assert found > 0
    assert is_strongly_contextual(resource_model(and_protocol()))


@settings(max_examples=40, deadline=None)
@given(st.fractions(0, 1, max_denominator=30))
def test_and_bound_is_tight_below_half(q):
    rep = verify_bound(and_protocol(q))
    assert rep.epsilon == q / 2
    assert rep.tight == (q <= Fraction(1, 2))


def test_ontology_protocol_with_mixed_preparation():
    rng = random.Random(24)
    a = random_assignment(3, rng, Partition({0}, {1, 2}))
    prep = OnticDistribution(((OnticState(3, 0), Fraction(1, 3)), (OnticState(3, 5), Fraction(2, 3))))
    mixed = NCAssignment(a.partition, a.slots, a.measurement, prep)
    p = and_protocol().with_resource(mixed)
    rep = verify_bound(p)
    assert rep.ncf == 1 and rep.holds

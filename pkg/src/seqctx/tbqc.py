"""Protocols with a mod-2 linear control computer driving a resource.

For input ``i`` the control computer selects the control vector
``k = B i + c`` over Z_2, the resource answers with a distribution over
one readout bit, and that bit is the protocol's output.  The resource can
be the simulated qubit, a GF(2) ontology assignment, or a bare empirical
model; all three are reduced to "outcome distribution for context k".
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .boolfn import AffineFn, BoolFn, affine_fit, eval_fn, inputs, nu_fwht
from .errors import ArityMismatch, ValidationError
from .fraction import EmpiricalModel, decompose, ncf
from .parity import NCAssignment
from .qsim import ResourceSpec, resource_empirical_model

Resource = Union[ResourceSpec, NCAssignment, EmpiricalModel]


def _resource_t(resource) -> int:
    if isinstance(resource, (ResourceSpec, NCAssignment)):
        return resource.t
    if isinstance(resource, EmpiricalModel):
        return resource.t
    raise ValidationError(f"resource: unsupported resource type {type(resource).__name__}")


@dataclass(frozen=True)
class Protocol:
    r: int
    t: int
    B: tuple[tuple[int, ...], ...]
    c: tuple[int, ...]
    resource: Resource
    target: BoolFn

    def __post_init__(self):
        B = tuple(tuple(int(x) for x in row) for row in self.B)
        c = tuple(int(x) for x in self.c)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "c", c)
        if self.r < 0 or self.t < 1:
            raise ValidationError(f"r/t: need r >= 0 and t >= 1, got r={self.r}, t={self.t}")
        if len(B) != self.t or any(len(row) != self.r for row in B):
            raise ValidationError(f"B: expected a {self.t}x{self.r} matrix")
        if any(x not in (0, 1) for row in B for x in row):
            raise ValidationError("B: entries must be 0 or 1")
        if len(c) != self.t or any(x not in (0, 1) for x in c):
            raise ValidationError(f"c: expected {self.t} bits")
        if self.target.r != self.r:
            raise ValidationError(f"target: arity {self.target.r} does not match r={self.r}")
        if _resource_t(self.resource) != self.t:
            raise ValidationError(
                f"resource: acts on {_resource_t(self.resource)} transformations, protocol has t={self.t}"
            )

    def with_resource(self, resource: Resource) -> "Protocol":
        return Protocol(self.r, self.t, self.B, self.c, resource, self.target)


def controls(p: Protocol, i: Sequence[int]) -> tuple[int, ...]:
    """k = B i + c over Z_2."""
    if len(i) != p.r:
        raise ArityMismatch(f"input: expected length {p.r}, got {len(i)}")
    out = []
    for row, off in zip(p.B, p.c):
        acc = off
        for bij, ij in zip(row, i):
            acc ^= bij & int(ij)
        out.append(acc)
    return tuple(out)


def realizable_contexts(p: Protocol) -> list[tuple[int, ...]]:
    """Distinct control vectors reached by some input, in input order."""
    seen: dict[tuple[int, ...], None] = {}
    for i in inputs(p.r):
        seen.setdefault(controls(p, i), None)
    return list(seen)


def resource_model(p: Protocol) -> EmpiricalModel:
    """Empirical model of the resource restricted to the realizable contexts."""
    contexts = realizable_contexts(p)
    res = p.resource
    if isinstance(res, ResourceSpec):
        return resource_empirical_model(res, contexts)
    if isinstance(res, NCAssignment):
        return EmpiricalModel(p.t, {k: res.distribution(k) for k in contexts})
    return EmpiricalModel(p.t, {k: res[k] for k in contexts})


@dataclass(frozen=True)
class RunRow:
    i: tuple[int, ...]
    k: tuple[int, ...]
    p0: Fraction
    p1: Fraction
    fail: Fraction


@dataclass(frozen=True)
class RunReport:
    rows: tuple[RunRow, ...]
    epsilon: Fraction


def run(p: Protocol) -> RunReport:
    model = resource_model(p)
    rows = []
    total = Fraction(0)
    for i in inputs(p.r):
        k = controls(p, i)
        p0, p1 = model[k]
        fail = p0 if eval_fn(p.target, i) else p1
        total += fail
        rows.append(RunRow(i, k, p0, p1, fail))
    return RunReport(tuple(rows), total / (1 << p.r))


@dataclass(frozen=True)
class BoundReport:
    epsilon: Fraction
    ncf: Fraction
    nu: Fraction
    rhs: Fraction
    holds: bool
    tight: bool


def verify_bound(p: Protocol) -> BoundReport:
    """Check failure probability >= NCF(resource) * nonlinearity(target) exactly."""
    epsilon = run(p).epsilon
    omega = ncf(resource_model(p)).ncf
    nu = nu_fwht(p.target)
    rhs = omega * nu
    return BoundReport(epsilon, omega, nu, rhs, epsilon >= rhs, epsilon == rhs)


@dataclass(frozen=True)
class SweepRow:
    q: Fraction
    epsilon: Fraction
    ncf: Fraction
    nu: Fraction
    rhs: Fraction
    slack: Fraction


def sweep_noise(p: Protocol, qs: Sequence) -> list[SweepRow]:
    if not isinstance(p.resource, ResourceSpec):
        raise ValidationError("resource: noise sweeps need a simulated qubit resource")
    out = []
    for q in qs:
        q = Fraction(q)
        rep = verify_bound(p.with_resource(p.resource.with_noise(q)))
        out.append(SweepRow(q, rep.epsilon, rep.ncf, rep.nu, rep.rhs, rep.epsilon - rep.rhs))
    return out


def noncontextual_failure(p: Protocol) -> tuple[Fraction, Fraction | None]:
    """(NCF, failure probability when the resource is replaced by its NC part)."""
    omega, e_nc, _ = decompose(resource_model(p))
    if e_nc is None:
        return omega, None
    return omega, run(p.with_resource(e_nc)).epsilon


def computed_function(report: RunReport, r: int) -> BoolFn | None:
    """The function the protocol computes when every row is deterministic."""
    table = []
    for row in report.rows:
        if row.p1 not in (0, 1):
            return None
        table.append(int(row.p1))
    return BoolFn(r, tuple(table))


def fit_computed_affine(p: Protocol) -> AffineFn | None:
    f = computed_function(run(p), p.r)
    return None if f is None else affine_fit(f)


AND_B = ((1, 0), (0, 1), (1, 1))


def and_protocol(noise_q=0, angle_over_pi: float = 0.5) -> Protocol:
    """Three controlled pi/2 phase gates on |+>, controlled by a, b and a xor b."""
    spec = ResourceSpec((angle_over_pi,) * 3, Fraction(noise_q))
    return Protocol(2, 3, AND_B, (0, 0, 0), spec, BoolFn(2, (0, 1, 1, 1)))

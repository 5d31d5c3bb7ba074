"""Non-contextual and contextual fractions of empirical models.

An empirical model gives, for each realised control vector ``k``, a
distribution over the readout bit.  Its non-contextual part is a mixture
of deterministic behaviours, and in a commutative GF(2) ontology the
deterministic behaviours are exactly the affine functions of ``k``.  The
largest weight such a mixture can carry without exceeding the model
anywhere is found by an exact linear program.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .boolfn import AffineFn, iter_affine
from .errors import ArityTooLarge, InfeasibleModel, MissingContext, ValidationError
from .simplex import maximize

MAX_BEHAVIOUR_ARITY = 16


class EmpiricalModel:
    """Exact outcome distributions ``(P(0), P(1))`` per control vector.

    Contexts keep their insertion order.
    """

    def __init__(self, t: int, contexts: Mapping[Sequence[int], Sequence]):
        if t < 1:
            raise ValidationError(f"t: must be >= 1, got {t}")
        self.t = t
        table: dict[tuple[int, ...], tuple[Fraction, Fraction]] = {}
        for k, p in contexts.items():
            key = tuple(int(x) for x in k)
            if len(key) != t or any(x not in (0, 1) for x in key):
                raise ValidationError(f"contexts: k={list(k)} is not a bit vector of length {t}")
            if key in table:
                raise ValidationError(f"contexts: duplicate context k={list(key)}")
            if len(p) != 2:
                raise ValidationError(f"contexts: k={list(key)} needs (p0, p1)")
            p0, p1 = Fraction(p[0]), Fraction(p[1])
            if not (0 <= p0 <= 1 and 0 <= p1 <= 1) or p0 + p1 != 1:
                raise ValidationError(
                    f"contexts: k={list(key)} probabilities must be in [0,1] and sum to 1"
                )
            table[key] = (p0, p1)
        if not table:
            raise ValidationError("contexts: model needs at least one context")
        self._table = table

    @property
    def contexts(self) -> list[tuple[int, ...]]:
        return list(self._table)

    def items(self):
        return self._table.items()

    def __getitem__(self, k: Sequence[int]) -> tuple[Fraction, Fraction]:
        key = tuple(int(x) for x in k)
        try:
            return self._table[key]
        except KeyError:
            raise MissingContext(f"context k={list(key)} not present in the empirical model")

    def __contains__(self, k) -> bool:
        return tuple(int(x) for x in k) in self._table

    def __len__(self):
        return len(self._table)

    def __eq__(self, other):
        if not isinstance(other, EmpiricalModel):
            return NotImplemented
        return self.t == other.t and self._table == other._table

    def __repr__(self):
        body = ", ".join(
            f"{''.join(map(str, k))}: ({p0}, {p1})" for k, (p0, p1) in self._table.items()
        )
        return f"EmpiricalModel(t={self.t}, {{{body}}})"

    def reordered(self, order: Sequence[Sequence[int]]) -> "EmpiricalModel":
        return EmpiricalModel(self.t, {tuple(k): self[k] for k in order})


def uniform_model(t: int, contexts: Sequence[Sequence[int]]) -> EmpiricalModel:
    half = Fraction(1, 2)
    return EmpiricalModel(t, {tuple(k): (half, half) for k in contexts})


def deterministic_model(t: int, outcomes: Mapping[Sequence[int], int]) -> EmpiricalModel:
    return EmpiricalModel(
        t, {tuple(k): (Fraction(1 - o), Fraction(o)) for k, o in outcomes.items()}
    )


def _affine_family(t: int) -> list[AffineFn]:
    if t > MAX_BEHAVIOUR_ARITY:
        raise ArityTooLarge(f"t: behaviour enumeration supports t <= {MAX_BEHAVIOUR_ARITY}, got {t}")
    return list(iter_affine(t))


def deterministic_behaviours(t: int, contexts: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Outcome vector of each affine function of ``k`` on the given contexts.

    Ordered like :func:`seqctx.boolfn.iter_affine`; duplicates are kept.
    """
    return [tuple(h(k) for k in contexts) for h in _affine_family(t)]


@dataclass(frozen=True)
class NCFResult:
    ncf: Fraction
    weights: dict[AffineFn, Fraction]
    residual: EmpiricalModel | None

    @property
    def cf(self) -> Fraction:
        return 1 - self.ncf


def _solve(e: EmpiricalModel) -> tuple[Fraction, dict[AffineFn, Fraction]]:
    family = _affine_family(e.t)
    contexts = e.contexts
    rows = []
    rhs = []
    for k in contexts:
        p = e[k]
        vals = [h(k) for h in family]
        for o in (0, 1):
            rows.append([1 if v == o else 0 for v in vals])
            rhs.append(p[o])
    sol = maximize([1] * len(family), rows, rhs)
    weights = {h: w for h, w in zip(family, sol.x) if w > 0}
    if sum(weights.values()) != sol.value:
        raise InfeasibleModel("LP solution weights do not sum to its objective")
    return sol.value, weights


def _mixture(e: EmpiricalModel, weights: Mapping[AffineFn, Fraction], total: Fraction):
    table = {}
    for k in e.contexts:
        p1 = sum((w for h, w in weights.items() if h(k)), Fraction(0)) / total
        table[k] = (1 - p1, p1)
    return EmpiricalModel(e.t, table)


def decompose(e: EmpiricalModel):
    """Split ``e = omega * e_nc + (1 - omega) * e_residual`` with maximal ``omega``.

    Returns ``(omega, e_nc, e_residual)``; ``e_nc`` is None when omega is 0
    and ``e_residual`` is None when omega is 1.
    """
    omega, weights = _solve(e)
    return _split(e, omega, weights)


def _split(e: EmpiricalModel, omega: Fraction, weights: Mapping[AffineFn, Fraction]):
    e_nc = _mixture(e, weights, omega) if omega > 0 else None
    if omega == 1:
        return omega, e_nc, None
    table = {}
    for k, (p0, p1) in e.items():
        n0, n1 = e_nc[k] if e_nc is not None else (Fraction(0), Fraction(0))
        r0 = (p0 - omega * n0) / (1 - omega)
        r1 = (p1 - omega * n1) / (1 - omega)
        if r0 < 0 or r1 < 0:
            raise InfeasibleModel(f"negative residual at k={list(k)}")
        table[k] = (r0, r1)
    return omega, e_nc, EmpiricalModel(e.t, table)


def ncf(e: EmpiricalModel) -> NCFResult:
    omega, weights = _solve(e)
    _, _, residual = _split(e, omega, weights)
    return NCFResult(omega, weights, residual)


def cf(e: EmpiricalModel) -> Fraction:
    return 1 - ncf(e).ncf


def is_strongly_contextual(e: EmpiricalModel) -> bool:
    return ncf(e).ncf == 0

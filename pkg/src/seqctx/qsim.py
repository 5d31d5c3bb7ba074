"""Single-qubit resource simulator.

The resource is always prepared in |+>, acted on by diagonal phase gates
selected by the control bits of a context, and read out in the X basis
(+1 -> 0, -1 -> 1).  Outcome probabilities are computed in floating point
and snapped to exact rationals before leaving the module.
"""
from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import RationalizationFailure, ValidationError

NORM_TOL = 1e-9
DEFAULT_TOL = 1e-9
DEFAULT_MAX_DEN = 1 << 20
MAX_DEN_ENV = "SEQCTX_MAX_DEN"

_SQRT_HALF = 1 / math.sqrt(2)


def default_max_den() -> int:
    """Denominator bound for rationalization, overridable by SEQCTX_MAX_DEN."""
    raw = os.environ.get(MAX_DEN_ENV)
    if raw is None:
        return DEFAULT_MAX_DEN
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"{MAX_DEN_ENV} must be a positive integer, got {raw!r}")
    if value < 1:
        raise ValidationError(f"{MAX_DEN_ENV} must be a positive integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class QubitState:
    amp0: complex
    amp1: complex

    def __post_init__(self):
        norm = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(norm - 1) > NORM_TOL:
            raise ValidationError(f"QubitState amplitudes not normalized (norm {norm!r})")


@dataclass(frozen=True)
class Unitary2:
    m00: complex
    m01: complex
    m10: complex
    m11: complex

    def __post_init__(self):
        # U U^dagger == I entrywise
        d00 = abs(self.m00) ** 2 + abs(self.m01) ** 2
        d11 = abs(self.m10) ** 2 + abs(self.m11) ** 2
        off = self.m00 * self.m10.conjugate() + self.m01 * self.m11.conjugate()
        if abs(d00 - 1) > NORM_TOL or abs(d11 - 1) > NORM_TOL or abs(off) > NORM_TOL:
            raise ValidationError("Unitary2 entries do not form a unitary matrix")

    def __matmul__(self, other: "Unitary2") -> "Unitary2":
        return Unitary2(
            self.m00 * other.m00 + self.m01 * other.m10,
            self.m00 * other.m01 + self.m01 * other.m11,
            self.m10 * other.m00 + self.m11 * other.m10,
            self.m10 * other.m01 + self.m11 * other.m11,
        )


IDENTITY = Unitary2(1, 0, 0, 1)


@dataclass(frozen=True)
class ResourceSpec:
    """Phase-gate resource: gate ``i`` applies ``phase_gate(pi * gate_angles[i])``
    when control bit ``i`` is 1.  ``noise_q`` is the probability that the
    measured bit is replaced by a uniformly random one."""

    gate_angles: tuple[float, ...]
    noise_q: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "gate_angles", tuple(float(a) for a in self.gate_angles))
        object.__setattr__(self, "noise_q", Fraction(self.noise_q))
        if len(self.gate_angles) < 1:
            raise ValidationError("gate_angles: need at least one controlled gate")
        if not all(math.isfinite(a) for a in self.gate_angles):
            raise ValidationError("gate_angles: angles must be finite")
        if not 0 <= self.noise_q <= 1:
            raise ValidationError(f"noise_q: must lie in [0, 1], got {self.noise_q}")

    @property
    def t(self) -> int:
        return len(self.gate_angles)

    def with_noise(self, q) -> "ResourceSpec":
        return ResourceSpec(self.gate_angles, Fraction(q))


def prepare_plus() -> QubitState:
    return QubitState(complex(_SQRT_HALF), complex(_SQRT_HALF))


def phase_gate(theta: float) -> Unitary2:
    """diag(1, exp(i*theta))."""
    if not math.isfinite(theta):
        raise ValidationError(f"theta: must be finite, got {theta!r}")
    return Unitary2(1, 0, 0, cmath.exp(1j * theta))


def apply(U: Unitary2, psi: QubitState) -> QubitState:
    return QubitState(
        U.m00 * psi.amp0 + U.m01 * psi.amp1,
        U.m10 * psi.amp0 + U.m11 * psi.amp1,
    )


def measure_x(psi: QubitState) -> dict[int, float]:
    """Outcome distribution of an X-basis measurement, {0: P(+), 1: P(-)}."""
    plus = (psi.amp0 + psi.amp1) * _SQRT_HALF
    minus = (psi.amp0 - psi.amp1) * _SQRT_HALF
    return {0: abs(plus) ** 2, 1: abs(minus) ** 2}


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    # Smallest-denominator rational in [lo, hi], lo >= 0, via continued fractions.
    fl = lo.numerator // lo.denominator
    if fl == lo or Fraction(fl + 1) <= hi:
        return Fraction(fl) if fl == lo else Fraction(fl + 1)
    # lo and hi share the integer part fl and lo is not an integer.
    frac_lo = lo - fl
    frac_hi = hi - fl
    return fl + 1 / _simplest_between(1 / frac_hi, 1 / frac_lo)


def rationalize(p: float, tol: float = DEFAULT_TOL, max_den: int | None = None) -> Fraction:
    """Snap a float probability to the simplest rational within ``tol``.

    Returns the rational with the smallest denominator lying in
    ``[p - tol, p + tol]`` clipped to ``[0, 1]``.  Raises
    RationalizationFailure if that denominator exceeds ``max_den``.
    """
    if max_den is None:
        max_den = default_max_den()
    if not tol > 0:
        raise ValidationError(f"tol: must be positive, got {tol!r}")
    if max_den < 1:
        raise ValidationError(f"max_den: must be positive, got {max_den!r}")
    if not math.isfinite(p) or p < -tol or p > 1 + tol:
        raise RationalizationFailure(f"probability {p!r} outside [0, 1] beyond tolerance {tol}")
    exact = Fraction(p)
    lo = max(Fraction(0), exact - Fraction(tol))
    hi = min(Fraction(1), exact + Fraction(tol))
    best = _simplest_between(lo, hi)
    if best.denominator > max_den:
        raise RationalizationFailure(
            f"no rational with denominator <= {max_den} within {tol} of {p!r}"
        )
    return best


def context_distribution(
    spec: ResourceSpec, k: Sequence[int], tol: float = DEFAULT_TOL, max_den: int | None = None
) -> tuple[Fraction, Fraction]:
    """Exact (P(0), P(1)) for one control vector, noise included."""
    if len(k) != spec.t:
        raise ValidationError(f"context k: expected length {spec.t}, got {len(k)}")
    psi = prepare_plus()
    for bit, angle in zip(k, spec.gate_angles):
        if bit not in (0, 1):
            raise ValidationError(f"context k: entries must be bits, got {bit!r}")
        if bit:
            psi = apply(phase_gate(math.pi * angle), psi)
    probs = measure_x(psi)
    p0 = rationalize(probs[0], tol, max_den)
    p0 = (1 - spec.noise_q) * p0 + spec.noise_q / 2
    return p0, 1 - p0


def resource_empirical_model(
    spec: ResourceSpec,
    contexts: Sequence[Sequence[int]],
    tol: float = DEFAULT_TOL,
    max_den: int | None = None,
):
    """Empirical model of the resource on the given control vectors."""
    from .fraction import EmpiricalModel

    table = {}
    for k in contexts:
        key = tuple(int(b) for b in k)
        table[key] = context_distribution(spec, key, tol, max_den)
    return EmpiricalModel(spec.t, table)

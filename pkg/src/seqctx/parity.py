"""Non-contextual GF(2) realisations of the three-gate AND protocol.

An assignment fixes, once and for all, the affine map used by each
controlled transformation for each value of its control bit.  In the AND
protocol the transformations U, V, W are controlled by a, b and a xor b,
so every map appears in exactly two of the four contexts and every such
assignment produces outcomes with even total parity.  The target table
(0, 1, 1, 1) has odd parity, which is why at most three of its four
contexts can ever be matched.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .errors import DimensionMismatch, DimensionTooLarge, NotInCommutativeClass, ValidationError
from .gf2 import (
    GF2AffineMap,
    OnticDistribution,
    OnticState,
    OntMeasurement,
    Partition,
    _apply_bits,
    _sum_action,
    class_free_positions,
    compose,
    in_class,
    iter_maps_from_positions,
    iter_states,
    offdiag_free_positions,
    parity,
)

MAX_SEARCH_DIM = 4

# Context order used throughout: (a, b) = 00, 01, 10, 11.
AND_CONTEXTS = ((0, 0), (0, 1), (1, 0), (1, 1))
SLOT_NAMES = ("U", "V", "W")


def and_controls(a: int, b: int) -> tuple[int, int, int]:
    return (a, b, a ^ b)


@dataclass(frozen=True)
class NCAssignment:
    """One fixed map per (transformation, control value), plus preparation and readout.

    ``slots[i] = (map used when k_i = 0, map used when k_i = 1)``.  The
    measurement's pre-map must belong to the commutative class too unless
    ``relaxed_measurement`` is set.
    """

    partition: Partition
    slots: tuple[tuple[GF2AffineMap, GF2AffineMap], ...]
    measurement: OntMeasurement
    preparation: OnticState | OnticDistribution
    relaxed_measurement: bool = field(default=False)

    def __post_init__(self):
        slots = tuple((m0, m1) for m0, m1 in self.slots)
        object.__setattr__(self, "slots", slots)
        s = self.measurement.s
        self.partition.check(s)
        if not slots:
            raise ValidationError("slots: need at least one controlled transformation")
        for idx, pair in enumerate(slots):
            for k, f in enumerate(pair):
                if f.s != s:
                    raise DimensionMismatch(f"slots[{idx}][{k}]: dimension {f.s} != {s}")
                if not in_class(f, self.partition):
                    raise NotInCommutativeClass(
                        f"slots[{idx}][{k}]: map outside the commutative class"
                    )
        if self.preparation.s != s:
            raise DimensionMismatch(f"preparation: dimension {self.preparation.s} != {s}")
        if not self.relaxed_measurement and not in_class(self.measurement.pre_map, self.partition):
            raise NotInCommutativeClass("measurement: pre-map outside the commutative class")

    @property
    def s(self) -> int:
        return self.measurement.s

    @property
    def t(self) -> int:
        return len(self.slots)

    def _states(self) -> tuple[tuple[OnticState, Fraction], ...]:
        if isinstance(self.preparation, OnticState):
            return ((self.preparation, Fraction(1)),)
        return self.preparation.items

    def outcome(self, k: Sequence[int], lam: OnticState) -> int:
        if len(k) != self.t:
            raise ValidationError(f"context k: expected length {self.t}, got {len(k)}")
        maps = [pair[int(bit)] for pair, bit in zip(self.slots, k)]
        final = _sum_action(maps, lam.bits)
        return (_apply_bits(self.measurement.pre_map, final) >> self.measurement.j) & 1

    def distribution(self, k: Sequence[int]) -> tuple[Fraction, Fraction]:
        """Exact (P(0), P(1)) for control vector ``k`` under the preparation."""
        p1 = Fraction(0)
        for lam, w in self._states():
            if self.outcome(k, lam):
                p1 += w
        return 1 - p1, p1


def evaluate_contexts(a: NCAssignment) -> tuple[int, int, int, int]:
    """Outcomes of the four AND contexts (a, b) = 00, 01, 10, 11."""
    if a.t != 3:
        raise ValidationError(f"slots: the AND protocol needs 3 transformations, got {a.t}")
    if not isinstance(a.preparation, OnticState):
        raise ValidationError("preparation: context equations need a deterministic ontic state")
    return tuple(a.outcome(and_controls(x, y), a.preparation) for x, y in AND_CONTEXTS)


def parity_check(a: NCAssignment) -> int:
    """XOR of the four context outcomes; zero for every valid assignment."""
    out = 0
    for bit in evaluate_contexts(a):
        out ^= bit
    return out


def _measurement_options(part: Partition, s: int, relaxed: bool) -> list[GF2AffineMap]:
    positions = offdiag_free_positions(s) if relaxed else class_free_positions(part, s)
    return list(iter_maps_from_positions(s, *positions))


def iter_assignments(
    s: int, part: Partition, relax_measurement: bool = False
) -> Iterator[NCAssignment]:
    """Every class-valid AND assignment with deterministic preparation.

    Order is lexicographic over (lambda, j, U(0), U(1), V(0), V(1), W(0),
    W(1), M), each map ranging over its free bits in row-major order.
    """
    part.check(s)
    maps = list(iter_maps_from_positions(s, *class_free_positions(part, s)))
    m_opts = _measurement_options(part, s, relax_measurement)
    for lam in iter_states(s):
        for j in range(s):
            for u0, u1, v0, v1, w0, w1 in product(maps, repeat=6):
                for m in m_opts:
                    yield NCAssignment(
                        part,
                        ((u0, u1), (v0, v1), (w0, w1)),
                        OntMeasurement(m, j),
                        lam,
                        relax_measurement,
                    )


def assignment_count(s: int, part: Partition, relax_measurement: bool = False) -> int:
    a_pos, u_pos = class_free_positions(part, s)
    per_map = 1 << (len(a_pos) + len(u_pos))
    n_m = len(_measurement_options(part, s, relax_measurement))
    return (1 << s) * s * per_map**6 * n_m


@dataclass(frozen=True)
class SearchResult:
    max_satisfied: int
    witness: NCAssignment
    assignments: int


def _satisfied(outcomes: Sequence[int], target: Sequence[int]) -> int:
    return sum(o == t for o, t in zip(outcomes, target))


def _check_search_args(s: int, part: Partition, target: Sequence[int]) -> tuple[int, ...]:
    if s > MAX_SEARCH_DIM:
        raise DimensionTooLarge(f"s: exhaustive search supports s <= {MAX_SEARCH_DIM}, got {s}")
    part.check(s)
    target = tuple(int(x) for x in target)
    if len(target) != 4 or any(x not in (0, 1) for x in target):
        raise ValidationError(f"target: expected four bits, got {target!r}")
    return target


@lru_cache(maxsize=None)
def _cached_compose(f: GF2AffineMap, g: GF2AffineMap) -> GF2AffineMap:
    return compose(f, g)


def exhaustive_search_bruteforce(
    s: int, part: Partition, target: Sequence[int], relax_measurement: bool = False
) -> tuple[SearchResult, int]:
    """Literal enumeration using general map composition.

    Returns the search result and the number of assignments whose four
    outcomes had odd parity (expected to be zero).  Slow; intended as an
    independent check of :func:`exhaustive_search` for small ``s``.
    """
    target = _check_search_args(s, part, target)
    maps = list(iter_maps_from_positions(s, *class_free_positions(part, s)))
    m_opts = _measurement_options(part, s, relax_measurement)
    states = list(iter_states(s))
    best = -1
    best_key = None
    odd = 0
    count = 0
    for lam in states:
        for j in range(s):
            for combo in product(range(len(maps)), repeat=6):
                u0, u1, v0, v1, w0, w1 = (maps[i] for i in combo)
                pre = (
                    _cached_compose(_cached_compose(u0, v0), w0),
                    _cached_compose(_cached_compose(u0, v1), w1),
                    _cached_compose(_cached_compose(u1, v0), w1),
                    _cached_compose(_cached_compose(u1, v1), w0),
                )
                for mi, m in enumerate(m_opts):
                    count += 1
                    outs = [
                        (_apply_bits(_cached_compose(seq, m), lam.bits) >> j) & 1 for seq in pre
                    ]
                    odd += outs[0] ^ outs[1] ^ outs[2] ^ outs[3]
                    score = _satisfied(outs, target)
                    if score > best:
                        best = score
                        best_key = (lam, j, combo, mi)
    lam, j, combo, mi = best_key
    u0, u1, v0, v1, w0, w1 = (maps[i] for i in combo)
    witness = NCAssignment(
        part, ((u0, u1), (v0, v1), (w0, w1)), OntMeasurement(m_opts[mi], j), lam, relax_measurement
    )
    return SearchResult(best, witness, count), odd


def exhaustive_search(
    s: int, part: Partition, target: Sequence[int], relax_measurement: bool = False
) -> SearchResult:
    """Best number of AND contexts any class-valid assignment can match.

    Equivalent to scanning :func:`iter_assignments` and keeping the first
    assignment with the highest score, but factorised: for fixed lambda
    and measurement each transformation only contributes one bit
    ``r . (A lam + u)`` to the readout, so the scan runs over contribution
    bits rather than over maps.
    """
    target = _check_search_args(s, part, target)
    maps = list(iter_maps_from_positions(s, *class_free_positions(part, s)))
    m_opts = _measurement_options(part, s, relax_measurement)
    best = -1
    best_key = None
    for lam in iter_states(s):
        x = lam.bits
        shifts = [_apply_bits(f, x) ^ x for f in maps]
        for j in range(s):
            local = None
            for mi, m in enumerate(m_opts):
                r = (1 << j) ^ m.rows[j]
                base = parity(r & x) ^ ((m.u >> j) & 1)
                first = [None, None]
                for idx, y in enumerate(shifts):
                    bit = parity(r & y)
                    if first[bit] is None:
                        first[bit] = idx
                bits_ok = [b for b in (0, 1) if first[b] is not None]
                for yu0, yu1, yv0, yv1, yw0, yw1 in product(bits_ok, repeat=6):
                    outs = (
                        base ^ yu0 ^ yv0 ^ yw0,
                        base ^ yu0 ^ yv1 ^ yw1,
                        base ^ yu1 ^ yv0 ^ yw1,
                        base ^ yu1 ^ yv1 ^ yw0,
                    )
                    score = _satisfied(outs, target)
                    idx6 = tuple(first[b] for b in (yu0, yu1, yv0, yv1, yw0, yw1))
                    key = (-score, idx6, mi)
                    if local is None or key < local:
                        local = key
            score = -local[0]
            if score > best:
                best = score
                best_key = (lam, j, local[1], local[2])
        if best == 4:
            break
    lam, j, idx6, mi = best_key
    u0, u1, v0, v1, w0, w1 = (maps[i] for i in idx6)
    witness = NCAssignment(
        part, ((u0, u1), (v0, v1), (w0, w1)), OntMeasurement(m_opts[mi], j), lam, relax_measurement
    )
    return SearchResult(best, witness, assignment_count(s, part, relax_measurement))


def random_assignment(
    s: int, rng: random.Random, part: Partition | None = None, t: int = 3
) -> NCAssignment:
    """Uniformly random class-valid assignment (random partition if none given)."""
    if part is None:
        controls = {i for i in range(s) if rng.random() < 0.5}
        part = Partition(controls, set(range(s)) - controls)
    a_pos, u_pos = class_free_positions(part, s)

    def rand_map():
        rows = [0] * s
        for r, c in a_pos:
            if rng.getrandbits(1):
                rows[r] |= 1 << c
        u = 0
        for i in u_pos:
            if rng.getrandbits(1):
                u |= 1 << i
        return GF2AffineMap(s, tuple(rows), u)

    slots = tuple((rand_map(), rand_map()) for _ in range(t))
    lam = OnticState(s, rng.getrandbits(s))
    return NCAssignment(part, slots, OntMeasurement(rand_map(), rng.randrange(s)), lam)

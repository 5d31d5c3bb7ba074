"""Affine maps over Z_2^s built from NOT and CNOT gates.

A map acts as ``lam -> (I + A) lam + u`` over Z_2.  Matrices are stored
bit-packed: ``rows[r]`` is an int whose bit ``c`` is entry ``A[r][c]``.
States and offsets are ints whose bit ``i`` is coordinate ``i``.  Bit
strings are displayed with coordinate 0 leftmost.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import (
    ControlEqualsTarget,
    DimensionMismatch,
    IndexOutOfRange,
    NotInCommutativeClass,
    ValidationError,
)


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def _check_index(i: int, s: int, name: str):
    if not 0 <= i < s:
        raise IndexOutOfRange(f"{name}: index {i} out of range for s={s}")


def bits_to_int(bits: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def int_to_bits(x: int, s: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(s))


@dataclass(frozen=True)
class OnticState:
    s: int
    bits: int

    def __post_init__(self):
        if self.s < 1:
            raise ValidationError(f"s: ontic dimension must be >= 1, got {self.s}")
        if not 0 <= self.bits < 1 << self.s:
            raise ValidationError(f"bits: value {self.bits} does not fit in s={self.s}")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "OnticState":
        if any(b not in (0, 1) for b in bits):
            raise ValidationError("state: entries must be 0 or 1")
        return cls(len(bits), bits_to_int(bits))

    @classmethod
    def from_string(cls, text: str) -> "OnticState":
        return cls.from_bits([int(c) for c in text])

    def to_list(self) -> list[int]:
        return list(int_to_bits(self.bits, self.s))

    def __getitem__(self, i: int) -> int:
        _check_index(i, self.s, "bit")
        return (self.bits >> i) & 1

    def __str__(self):
        return "".join(str(b) for b in self.to_list())


@dataclass(frozen=True)
class GF2AffineMap:
    s: int
    rows: tuple[int, ...]
    u: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if self.s < 1:
            raise ValidationError(f"s: ontic dimension must be >= 1, got {self.s}")
        if len(self.rows) != self.s:
            raise DimensionMismatch(f"A: expected {self.s} rows, got {len(self.rows)}")
        full = (1 << self.s) - 1
        if any(not 0 <= row <= full for row in self.rows):
            raise DimensionMismatch(f"A: row wider than s={self.s}")
        if not 0 <= self.u <= full:
            raise DimensionMismatch(f"u: vector wider than s={self.s}")

    @classmethod
    def identity(cls, s: int) -> "GF2AffineMap":
        return cls(s, (0,) * s, 0)

    @classmethod
    def from_lists(cls, A: Sequence[Sequence[int]], u: Sequence[int]) -> "GF2AffineMap":
        s = len(u)
        if len(A) != s or any(len(row) != s for row in A):
            raise DimensionMismatch(f"A: expected a {s}x{s} matrix")
        for row in A:
            if any(v not in (0, 1) for v in row):
                raise ValidationError("A: entries must be 0 or 1")
        if any(v not in (0, 1) for v in u):
            raise ValidationError("u: entries must be 0 or 1")
        return cls(s, tuple(bits_to_int(row) for row in A), bits_to_int(u))

    def A_lists(self) -> list[list[int]]:
        return [list(int_to_bits(row, self.s)) for row in self.rows]

    def u_list(self) -> list[int]:
        return list(int_to_bits(self.u, self.s))

    def entry(self, r: int, c: int) -> int:
        return (self.rows[r] >> c) & 1

    def is_identity(self) -> bool:
        return self.u == 0 and not any(self.rows)

    def __call__(self, lam: OnticState) -> OnticState:
        return apply_map(self, lam)


def _apply_bits(f: GF2AffineMap, x: int) -> int:
    out = x ^ f.u
    for r, row in enumerate(f.rows):
        if row and parity(row & x):
            out ^= 1 << r
    return out


def _matmul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    # (a b)[r] = xor of rows b[c] for each c set in a[r]
    out = []
    for row in a:
        acc = 0
        c = 0
        while row:
            if row & 1:
                acc ^= b[c]
            row >>= 1
            c += 1
        out.append(acc)
    return tuple(out)


def not_gate(i: int, s: int) -> GF2AffineMap:
    _check_index(i, s, "NOT target")
    return GF2AffineMap(s, (0,) * s, 1 << i)


def cnot_gate(i: int, j: int, s: int) -> GF2AffineMap:
    """CNOT with control ``i`` and target ``j``: single A entry at (j, i)."""
    _check_index(i, s, "CNOT control")
    _check_index(j, s, "CNOT target")
    if i == j:
        raise ControlEqualsTarget(f"CNOT: control and target are both {i}")
    rows = [0] * s
    rows[j] = 1 << i
    return GF2AffineMap(s, tuple(rows), 0)


def _same_dim(*objs):
    dims = {o.s for o in objs}
    if len(dims) > 1:
        raise DimensionMismatch(f"dimension: mismatched s values {sorted(dims)}")


def apply_map(f: GF2AffineMap, lam: OnticState) -> OnticState:
    _same_dim(f, lam)
    return OnticState(f.s, _apply_bits(f, lam.bits))


def compose(f: GF2AffineMap, g: GF2AffineMap) -> GF2AffineMap:
    """Apply ``f`` first, then ``g`` (the map ``g o f``).

    ``(I+A_g)((I+A_f) x + u_f) + u_g`` gives
    ``A = A_f + A_g + A_g A_f`` and ``u = (I+A_g) u_f + u_g``.
    """
    _same_dim(f, g)
    cross = _matmul(g.rows, f.rows)
    rows = tuple(a ^ b ^ c for a, b, c in zip(f.rows, g.rows, cross))
    return GF2AffineMap(f.s, rows, _apply_bits(g, f.u))


def compose_all(maps: Iterable[GF2AffineMap], s: int) -> GF2AffineMap:
    out = GF2AffineMap.identity(s)
    for f in maps:
        out = compose(out, f)
    return out


def commutes(f: GF2AffineMap, g: GF2AffineMap) -> bool:
    # (A, u) determines the action uniquely, so equal representations <=> equal maps.
    return compose(f, g) == compose(g, f)


@dataclass(frozen=True)
class Partition:
    controls: frozenset[int]
    targets: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "controls", frozenset(self.controls))
        object.__setattr__(self, "targets", frozenset(self.targets))
        overlap = self.controls & self.targets
        if overlap:
            raise ValidationError(f"partition: bits {sorted(overlap)} are both control and target")

    @property
    def s(self) -> int:
        return len(self.controls) + len(self.targets)

    def check(self, s: int):
        if self.controls | self.targets != set(range(s)):
            raise ValidationError(
                f"partition: controls {sorted(self.controls)} and targets "
                f"{sorted(self.targets)} must cover 0..{s - 1}"
            )

    @property
    def control_mask(self) -> int:
        return bits_to_int_set(self.controls)

    @property
    def target_mask(self) -> int:
        return bits_to_int_set(self.targets)


def bits_to_int_set(indices: Iterable[int]) -> int:
    x = 0
    for i in indices:
        x |= 1 << i
    return x


def all_partitions(s: int) -> list[Partition]:
    """Every (controls, targets) split of 0..s-1, either side possibly empty."""
    out = []
    for mask in range(1 << s):
        controls = {i for i in range(s) if mask >> i & 1}
        out.append(Partition(controls, set(range(s)) - controls))
    return out


def in_class(f: GF2AffineMap, part: Partition) -> bool:
    cmask, tmask = part.control_mask, part.target_mask
    if f.u & ~tmask:
        return False
    for r, row in enumerate(f.rows):
        if row and (not tmask >> r & 1 or row & ~cmask):
            return False
    return True


def validate_commutative_class(maps: Sequence[GF2AffineMap], part: Partition) -> bool:
    """True iff every map has CNOTs only from controls to targets and NOTs only on targets."""
    if maps:
        _same_dim(*maps)
        part.check(maps[0].s)
    return all(in_class(f, part) for f in maps)


def infer_partition(maps: Sequence[GF2AffineMap]) -> Partition | None:
    """Some partition under which ``maps`` form a commutative class, if one exists.

    Bits used as CNOT controls become controls, everything else a target.
    """
    if not maps:
        return None
    _same_dim(*maps)
    s = maps[0].s
    controls = 0
    targets = 0
    for f in maps:
        targets |= f.u
        for r, row in enumerate(f.rows):
            if row:
                controls |= row
                targets |= 1 << r
    if controls & targets:
        return None
    cset = {i for i in range(s) if controls >> i & 1}
    return Partition(cset, set(range(s)) - cset)


def compose_sequence_commutative(
    maps: Sequence[GF2AffineMap], lam: OnticState, part: Partition | None = None
) -> OnticState:
    """``lam + sum_i A_i lam + sum_i u_i`` for maps in a commutative class.

    Without an explicit partition, one is inferred from the maps' supports.
    """
    if not maps:
        return lam
    _same_dim(lam, *maps)
    if part is None:
        part = infer_partition(maps)
        if part is None:
            raise NotInCommutativeClass("maps: no control/target partition makes these commute")
    elif not validate_commutative_class(maps, part):
        raise NotInCommutativeClass("maps: not in the commutative class of the given partition")
    return OnticState(lam.s, _sum_action(maps, lam.bits))


def _sum_action(maps: Sequence[GF2AffineMap], x: int) -> int:
    out = x
    for f in maps:
        out ^= f.u
        for r, row in enumerate(f.rows):
            if row and parity(row & x):
                out ^= 1 << r
    return out


@dataclass(frozen=True)
class OntMeasurement:
    pre_map: GF2AffineMap
    j: int

    def __post_init__(self):
        _check_index(self.j, self.pre_map.s, "readout j")

    @property
    def s(self) -> int:
        return self.pre_map.s


def measure_ont(m: OntMeasurement, lam: OnticState) -> int:
    _same_dim(m.pre_map, lam)
    return (_apply_bits(m.pre_map, lam.bits) >> m.j) & 1


@dataclass(frozen=True)
class OnticDistribution:
    items: tuple[tuple[OnticState, Fraction], ...]

    def __post_init__(self):
        items = tuple((st, Fraction(w)) for st, w in self.items)
        object.__setattr__(self, "items", items)
        if not items:
            raise ValidationError("distribution: needs at least one ontic state")
        _same_dim(*(st for st, _ in items))
        if any(w < 0 for _, w in items):
            raise ValidationError("distribution: weights must be nonnegative")
        if sum(w for _, w in items) != 1:
            raise ValidationError("distribution: weights must sum to exactly 1")

    @property
    def s(self) -> int:
        return self.items[0][0].s

    @classmethod
    def point(cls, lam: OnticState) -> "OnticDistribution":
        return cls(((lam, Fraction(1)),))


def gates_to_map(s: int, gates: Sequence[Sequence]) -> GF2AffineMap:
    """Compose a gate list like ``[["CNOT", 0, 1], ["NOT", 1]]`` in order."""
    f = GF2AffineMap.identity(s)
    for gate in gates:
        name = str(gate[0]).upper()
        if name == "NOT" and len(gate) == 2:
            g = not_gate(int(gate[1]), s)
        elif name == "CNOT" and len(gate) == 3:
            g = cnot_gate(int(gate[1]), int(gate[2]), s)
        else:
            raise ValidationError(f"gates: unrecognised gate {list(gate)!r}")
        f = compose(f, g)
    return f


def map_to_gates(f: GF2AffineMap) -> list[list]:
    """Gate list realising ``f``: all CNOTs, then all NOTs.

    Only maps whose CNOT entries never chain (no target reused as a
    control) decompose this way; anything else raises ValidationError.
    """
    gates: list[list] = []
    for r, row in enumerate(f.rows):
        for c in range(f.s):
            if row >> c & 1:
                if c == r:
                    raise ValidationError("A: diagonal entry has no CNOT realisation")
                gates.append(["CNOT", c, r])
    for i in range(f.s):
        if f.u >> i & 1:
            gates.append(["NOT", i])
    if gates_to_map(f.s, gates) != f:
        raise ValidationError("A: map is not a product of non-chaining CNOTs")
    return gates


def iter_states(s: int) -> Iterator[OnticState]:
    """All states in lexicographic order of (bit 0, bit 1, ...)."""
    for bits in product((0, 1), repeat=s):
        yield OnticState.from_bits(bits)


def class_free_positions(part: Partition, s: int) -> tuple[list[tuple[int, int]], list[int]]:
    """A-entry positions (row-major) and u positions a class-valid map may set."""
    a_pos = [(r, c) for r in sorted(part.targets) for c in sorted(part.controls)]
    u_pos = sorted(part.targets)
    return a_pos, u_pos


def offdiag_free_positions(s: int) -> tuple[list[tuple[int, int]], list[int]]:
    a_pos = [(r, c) for r in range(s) for c in range(s) if r != c]
    return a_pos, list(range(s))


def iter_maps_from_positions(
    s: int, a_pos: Sequence[tuple[int, int]], u_pos: Sequence[int]
) -> Iterator[GF2AffineMap]:
    """All maps supported on the given positions, lexicographic over their bits."""
    n_a = len(a_pos)
    for bits in product((0, 1), repeat=n_a + len(u_pos)):
        rows = [0] * s
        for (r, c), b in zip(a_pos, bits[:n_a]):
            if b:
                rows[r] |= 1 << c
        u = 0
        for i, b in zip(u_pos, bits[n_a:]):
            if b:
                u |= 1 << i
        yield GF2AffineMap(s, tuple(rows), u)


def iter_class_maps(part: Partition, s: int) -> Iterator[GF2AffineMap]:
    part.check(s)
    return iter_maps_from_positions(s, *class_free_positions(part, s))

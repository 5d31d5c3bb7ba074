"""Boolean functions on bit vectors, their distance and nonlinearity.

Truth tables use a little-endian input encoding: the table entry for input
``i = (i_0, ..., i_{r-1})`` sits at index ``sum(i_j << j)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import ArityMismatch, ArityTooLarge, ValidationError

MAX_ENUM_ARITY = 20
MAX_FWHT_ARITY = 28


def encode(bits: Sequence[int]) -> int:
    return sum(int(b) << j for j, b in enumerate(bits))


def decode(index: int, r: int) -> tuple[int, ...]:
    return tuple((index >> j) & 1 for j in range(r))


def inputs(r: int) -> Iterator[tuple[int, ...]]:
    """All inputs of arity ``r`` in truth-table order."""
    for n in range(1 << r):
        yield decode(n, r)


@dataclass(frozen=True)
class BoolFn:
    r: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if self.r < 0:
            raise ValidationError(f"r: arity must be nonnegative, got {self.r}")
        if len(self.table) != 1 << self.r:
            raise ValidationError(
                f"table: expected length {1 << self.r} for r={self.r}, got {len(self.table)}"
            )
        if any(v not in (0, 1) for v in self.table):
            raise ValidationError("table: entries must be 0 or 1")

    @classmethod
    def from_callable(cls, r: int, fn) -> "BoolFn":
        return cls(r, tuple(int(fn(*i)) & 1 for i in inputs(r)))

    @classmethod
    def from_string(cls, bits: str) -> "BoolFn":
        """Parse a table written as a bit string, e.g. ``"0111"``."""
        n = len(bits)
        if n == 0 or n & (n - 1):
            raise ValidationError(f"table: length must be a power of two, got {n}")
        return cls(n.bit_length() - 1, tuple(int(c) for c in bits))

    def __call__(self, *i: int) -> int:
        return eval_fn(self, i)

    def complement(self) -> "BoolFn":
        return BoolFn(self.r, tuple(1 - v for v in self.table))


@dataclass(frozen=True)
class AffineFn:
    """h(i) = b . i  xor  c0."""

    b: tuple[int, ...]
    c0: int = 0

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        if any(x not in (0, 1) for x in self.b) or self.c0 not in (0, 1):
            raise ValidationError("AffineFn: coefficients must be bits")

    @property
    def r(self) -> int:
        return len(self.b)

    def __call__(self, i: Sequence[int]) -> int:
        if len(i) != len(self.b):
            raise ArityMismatch(f"input: expected length {len(self.b)}, got {len(i)}")
        acc = self.c0
        for bj, ij in zip(self.b, i):
            acc ^= bj & int(ij)
        return acc

    def to_boolfn(self) -> BoolFn:
        return BoolFn(self.r, tuple(self(i) for i in inputs(self.r)))


def eval_fn(f: BoolFn, i: Sequence[int]) -> int:
    if len(i) != f.r:
        raise ArityMismatch(f"input: expected length {f.r}, got {len(i)}")
    return f.table[encode(i)]


def distance(g: BoolFn, h: BoolFn) -> Fraction:
    """Fraction of inputs on which ``g`` and ``h`` disagree."""
    if g.r != h.r:
        raise ArityMismatch(f"arity: cannot compare r={g.r} with r={h.r}")
    diff = sum(a != b for a, b in zip(g.table, h.table))
    return Fraction(diff, 1 << g.r)


def iter_affine(r: int, strict: bool = False) -> Iterator[AffineFn]:
    """Affine functions of arity ``r``, constant term major, ``b`` as an integer minor.

    With ``strict=True`` only the linear ones (zero constant) are produced.
    """
    for c0 in (0,) if strict else (0, 1):
        for n in range(1 << r):
            yield AffineFn(decode(n, r), c0)


@lru_cache(maxsize=16)
def _affine_tables(r: int, strict: bool) -> tuple[BoolFn, ...]:
    return tuple(h.to_boolfn() for h in iter_affine(r, strict))


def enumerate_affine(r: int, strict: bool = False) -> list[BoolFn]:
    if r > MAX_ENUM_ARITY:
        raise ArityTooLarge(f"r: enumeration supports r <= {MAX_ENUM_ARITY}, got {r}")
    return list(_affine_tables(r, strict))


def nu_bruteforce(g: BoolFn, strict: bool = False) -> Fraction:
    """Distance from ``g`` to the nearest affine (or, if strict, linear) function."""
    if g.r > MAX_ENUM_ARITY:
        raise ArityTooLarge(f"r: enumeration supports r <= {MAX_ENUM_ARITY}, got {g.r}")
    best = min(sum(a != b for a, b in zip(g.table, h.table)) for h in enumerate_affine(g.r, strict))
    return Fraction(best, 1 << g.r)


def walsh_spectrum(g: BoolFn) -> np.ndarray:
    """W(w) = sum_i (-1)^(g(i) xor w.i), indexed like the truth table."""
    if g.r > MAX_FWHT_ARITY:
        raise ArityTooLarge(f"r: transform supports r <= {MAX_FWHT_ARITY}, got {g.r}")
    spec = 1 - 2 * np.asarray(g.table, dtype=np.int64)
    n = spec.size
    h = 1
    while h < n:
        view = spec.reshape(-1, 2, h)
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] += b
        view[:, 1, :] = a - b
        h *= 2
    return spec


def nu_fwht(g: BoolFn, strict: bool = False) -> Fraction:
    """Same value as :func:`nu_bruteforce`, read off the Walsh spectrum.

    ``W(w) = 2^r - 2 * #{i : g(i) != w.i}``, so the best linear fit has
    distance ``(2^r - W(w)) / 2^(r+1)`` and its complement
    ``(2^r + W(w)) / 2^(r+1)``.
    """
    spec = walsh_spectrum(g)
    n = 1 << g.r
    best = int(spec.max()) if strict else int(np.abs(spec).max())
    return Fraction(n - best, 2 * n)


def affine_fit(f: BoolFn) -> AffineFn | None:
    """The affine function agreeing with ``f`` everywhere, or None."""
    c0 = f.table[0]
    b = tuple(f.table[1 << j] ^ c0 for j in range(f.r))
    h = AffineFn(b, c0)
    if all(h(i) == v for i, v in zip(inputs(f.r), f.table)):
        return h
    return None


def parse_table(table: str | Sequence[int]) -> BoolFn:
    if isinstance(table, str):
        return BoolFn.from_string(table)
    n = len(table)
    if n == 0 or n & (n - 1):
        raise ValidationError(f"table: length must be a power of two, got {n}")
    return BoolFn(n.bit_length() - 1, tuple(table))


OR2 = BoolFn(2, (0, 1, 1, 1))
AND2 = BoolFn(2, (0, 0, 0, 1))

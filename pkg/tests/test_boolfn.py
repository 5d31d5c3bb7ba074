import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqctx.boolfn import (
    AND2,
    OR2,
    AffineFn,
    BoolFn,
    affine_fit,
    distance,
    enumerate_affine,
    eval_fn,
    iter_affine,
    nu_bruteforce,
    nu_fwht,
    walsh_spectrum,
)
from seqctx.errors import ArityMismatch, ArityTooLarge, ValidationError


def or_from_formula(a, b):
    # (a+1)(b+1)+1 over Z_2
    return ((a ^ 1) & (b ^ 1)) ^ 1


def test_eval_examples():
    assert OR2 == BoolFn.from_callable(2, or_from_formula)
    assert eval_fn(OR2, (0, 0)) == 0
    assert eval_fn(OR2, (1, 1)) == 1
    zero = BoolFn(3, (0,) * 8)
    assert all(eval_fn(zero, i) == 0 for i in product((0, 1), repeat=3))
    with pytest.raises(ArityMismatch):
        eval_fn(OR2, (1,))


def test_table_index_is_little_endian():
    f = BoolFn(2, (0, 1, 0, 0))
    assert f(1, 0) == 1 and f(0, 1) == 0


def test_distance_examples():
    assert distance(OR2, OR2) == 0
    assert distance(OR2, OR2.complement()) == 1
    assert distance(OR2, BoolFn(2, (1, 1, 1, 1))) == Fraction(1, 4)
    with pytest.raises(ArityMismatch):
        distance(OR2, BoolFn(1, (0, 1)))


def test_enumerate_affine():
    fams = enumerate_affine(2)
    assert len(fams) == 8
    assert BoolFn(2, (0,) * 4) in fams and BoolFn(2, (1,) * 4) in fams
    assert len({f.table for f in fams}) == 8
    assert fams[0].table == (0, 0, 0, 0) and fams[4].table == (1, 1, 1, 1)
    assert len(enumerate_affine(3, strict=True)) == 8
    with pytest.raises(ArityTooLarge):
        enumerate_affine(21)


def test_nu_examples():
    for h in iter_affine(3):
        assert nu_bruteforce(h.to_boolfn()) == 0
    assert nu_bruteforce(OR2) == Fraction(1, 4)
    assert nu_bruteforce(AND2) == Fraction(1, 4)
    assert nu_bruteforce(BoolFn.from_callable(2, lambda a, b: a ^ b)) == 0


def test_fwht_examples():
    assert sorted(abs(int(w)) for w in walsh_spectrum(OR2)) == [2, 2, 2, 2]
    assert nu_fwht(OR2) == Fraction(1, 4)
    bent = BoolFn.from_callable(4, lambda a, b, c, d: (a & b) ^ (c & d))
    assert max(abs(int(w)) for w in walsh_spectrum(bent)) == 4
    assert nu_bruteforce(bent) == Fraction(3, 8)
    assert nu_fwht(bent) == Fraction(3, 8)
    assert nu_fwht(BoolFn(3, (1,) * 8)) == 0


def test_fwht_equals_bruteforce_exhaustive_r3():
    for n in range(256):
        f = BoolFn(3, tuple((n >> j) & 1 for j in range(8)))
        assert nu_fwht(f) == nu_bruteforce(f)
        assert nu_fwht(f, strict=True) == nu_bruteforce(f, strict=True)


def test_fwht_equals_bruteforce_random():
    rng = random.Random(7)
    for r in (4, 5):
        for _ in range(200):
            f = BoolFn(r, tuple(rng.getrandbits(1) for _ in range(1 << r)))
            assert nu_fwht(f) == nu_bruteforce(f)


def test_strict_family_differs_on_constants():
    one = BoolFn(2, (1, 1, 1, 1))
    assert nu_fwht(one) == 0
    # every nonzero linear function is balanced, the zero function disagrees everywhere
    assert nu_fwht(one, strict=True) == nu_bruteforce(one, strict=True) == Fraction(1, 2)


tables = st.integers(1, 4).flatmap(
    lambda r: st.lists(st.integers(0, 1), min_size=1 << r, max_size=1 << r).map(
        lambda t, r=r: BoolFn(r, tuple(t))
    )
)


@given(tables)
def test_nu_range(f):
    assert 0 <= nu_fwht(f) <= Fraction(1, 2)


@given(st.integers(1, 4).flatmap(lambda r: st.tuples(*[
    st.lists(st.integers(0, 1), min_size=1 << r, max_size=1 << r) for _ in range(3)
]).map(lambda ts, r=r: [BoolFn(r, tuple(t)) for t in ts])))
def test_distance_is_metric(fs):
    f, g, h = fs
    assert distance(f, g) == distance(g, f)
    assert distance(f, h) <= distance(f, g) + distance(g, h)
    assert (distance(f, g) == 0) == (f == g)


def test_affine_fit():
    h = AffineFn((1, 0, 1), 1)
    assert affine_fit(h.to_boolfn()) == h
    assert affine_fit(OR2) is None


def test_validation():
    with pytest.raises(ValidationError):
        BoolFn(2, (0, 1, 1))
    with pytest.raises(ValidationError):
        BoolFn.from_string("011")
    assert BoolFn.from_string("0111") == OR2

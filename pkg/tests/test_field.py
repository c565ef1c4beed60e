import itertools

import pytest
from hypothesis import given, strategies as st

from grassid.field import (FieldError, FieldSpec, ff_arith, ff_enumerate, ff_make, ff_pow,
                           smallest_irreducible)

from strategies import FIELDS


def _poly_has_root(m, p):
    return any(sum(c * pow(x, i, p) for i, c in enumerate(m)) % p == 0 for x in range(p))


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_axioms_exhaustive_small(F):
    if F.q > 27:
        pytest.skip("exhaustive only for q <= 27")
    els = range(F.q)
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("F", FIELDS, ids=str)
@given(data=st.data())
def test_axioms_random(F, data):
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(F.add(a, b), c) == F.add(F.mul(a, c), F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a
    # Frobenius fixes every element of GF(q)
    assert F.pow(a, F.q) == a


@pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (3, 4), (5, 2), (7, 2)])
def test_no_zero_divisors(p, n):
    F = FieldSpec(p, n)
    nz = range(1, F.q)
    assert all(F.mul(a, b) for a in nz for b in nz)


def test_smallest_irreducible_is_lexicographically_first():
    # degree 2 and 3: irreducible iff no root, so brute force is an oracle
    for p in (3, 5, 7):
        for n in (2, 3):
            found = None
            for tail in itertools.product(range(p), repeat=n):
                m = list(tail) + [1]
                if m[0] and not _poly_has_root(m, p):
                    found = tuple(m)
                    break
            assert smallest_irreducible(p, n) == found


def test_gf9_modulus_and_generator():
    F = FieldSpec.parse("3^2")
    assert F.q == 9 and F.modulus == (1, 0, 1)   # t^2 + 1
    t = F.encode([0, 1])
    assert F.mul(t, t) == F.from_int(-1)


@pytest.mark.parametrize("bad", ["2", "4", "9", "3^0", "x", "1"])
def test_bad_fields(bad):
    with pytest.raises(FieldError):
        FieldSpec.parse(bad)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        FieldSpec(3, 2, (2, 0, 1))      # t^2 - 1 = (t-1)(t+1)


def test_element_api():
    F = FieldSpec(5)
    a, b = F(2), F(4)
    assert ff_arith(a, b, "add") == F(1)
    assert ff_arith(a, b, "div") * b == a
    assert ff_pow(a, 4) == F(1)
    assert len(ff_enumerate(F)) == 5
    assert ff_make(F, 7) == F(2)
    assert str(F(3)) == "3"
    with pytest.raises(ValueError):
        ff_arith(a, b, "mod")
    with pytest.raises(FieldError):
        a + FieldSpec(7)(1)


def test_format_extension():
    F = FieldSpec(3, 2)
    assert F.format(F.encode([1, 2])) == "1+2*t"
    assert F.format(0) == "0"

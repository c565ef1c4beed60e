import itertools

import pytest
from hypothesis import given, strategies as st

from grassid.field import FieldSpec
from grassid.grassmann import (GrassmannElement, TruncationError, format_element, g_commutator,
                               g_mul, indices_of, mask_of, parse_element, supp_wt_dom, wedge)

from strategies import F3, F9, grassmann


def _sign_by_bubble(a, b):
    """Sort the concatenated index list by adjacent swaps, counting swaps."""
    seq = list(indices_of(a)) + list(indices_of(b))
    if len(set(seq)) < len(seq):
        return 0
    s = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                s = -s
    return s


def test_wedge_sign_matches_bubble_sort_E6():
    for a in range(64):
        for b in range(64):
            s, m = wedge(a, b)
            assert s == _sign_by_bubble(a, b)
            if s:
                assert m == a | b


def test_generators_anticommute_and_square_zero():
    N = 5
    e = [GrassmannElement.generator(F3, N, i) for i in range(1, N + 1)]
    for a, b in itertools.product(e, repeat=2):
        assert a * b == -(b * a)
    for a in e:
        assert not (a * a)


@given(grassmann(), grassmann(), grassmann())
def test_associative_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@given(grassmann(F=F9, N=5))
def test_unit_and_zero(a):
    one = GrassmannElement.one(F9, 5)
    assert a * one == a == one * a
    assert not (a - a)


@given(grassmann(), grassmann(), grassmann())
def test_triple_commutator_vanishes(a, b, c):
    assert not g_commutator(g_commutator(a, b), c)


def test_even_part_is_central():
    N = 6
    even = GrassmannElement.monomial(F3, N, [1, 2]) + GrassmannElement.monomial(F3, N, [3, 4, 5, 6])
    for m in range(1 << N):
        g = GrassmannElement(F3, N, {m: 1})
        assert even * g == g * even


def test_support_weight_dominant():
    g = GrassmannElement(F3, 6, {mask_of([1, 2]): 1, mask_of([3, 4, 5]): 2, mask_of([2, 6]): 1})
    supp, w, dom = supp_wt_dom(g)
    assert supp == frozenset({1, 2, 3, 4, 5, 6})
    assert w == 3
    assert dom == GrassmannElement.monomial(F3, 6, [3, 4, 5], 2)


def test_truncation_error():
    with pytest.raises(TruncationError):
        GrassmannElement.generator(F3, 3, 4)
    with pytest.raises(ValueError):
        g_mul(GrassmannElement.one(F3, 3), GrassmannElement.one(F3, 4))


@pytest.mark.parametrize("F", [F3, F9, FieldSpec(5)], ids=str)
@given(data=st.data())
def test_format_parse_round_trip(F, data):
    g = data.draw(grassmann(F=F, N=6))
    assert parse_element(format_element(g), F, 6) == g


def test_format_examples():
    g = GrassmannElement(F3, 4, {mask_of([2, 4]): 2, 0: 1})
    assert format_element(g) == "1 + 2*e2e4"
    assert parse_element("e1e3 - e2", F3, 4) == (GrassmannElement.monomial(F3, 4, [1, 3])
                                                   - GrassmannElement.generator(F3, 4, 2))
    with pytest.raises(ValueError):
        parse_element("e3e1", F3, 4)

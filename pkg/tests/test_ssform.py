import random

import pytest
from hypothesis import given, strategies as st

from grassid.freealg import FreePolynomial, gsubstitute, left_normed, straighten, y, z
from grassid.gradings import GradingSpec
from grassid.parser import parse_polynomial
from grassid.ssform import (CentralForm, PPolynomial, SSMonomial, TestPolynomial, bad_terms,
                            basis_for_grading, catalog_fT, catalog_gm, catalog_h, catalog_rT, is_ss3,
                            leading_term, reduce, ss_compare)

from strategies import F3, F5, F9, random_free_poly, random_homogeneous

SPECS = ["canonical", "infinity", "kstar:1", "kstar:2", "k:1", "k:2", "k:3"]


def ss(text_beg=(), psi=()):
    return SSMonomial.make(dict(text_beg), psi)


@st.composite
def ss_monomials(draw, p=3):
    vs = [y(1), y(2), y(3), z(1), z(2), z(3)]
    beg = {v: draw(st.integers(0, p - 1)) for v in vs}
    beg = {v: e for v, e in beg.items() if e}
    psi = draw(st.lists(st.sampled_from(vs), unique=True, max_size=4))
    if len(psi) % 2:
        psi = psi[:-1]
    return SSMonomial.make(beg, psi)


def test_accessors():
    u = ss({y(1): 2, z(1): 1, z(2): 1}, [y(2), z(3)])
    assert (u.deg_Y, u.deg_Z, u.deg) == (3, 3, 6)
    assert u.pr_z == z(1)
    assert str(u) == "y1^2*z1*z2*[y2,z3]"
    assert SSMonomial.from_json(u.to_json()) == u
    assert str(ss({y(1): 1})) == "y1" and str(SSMonomial()) == "1"
    with pytest.raises(ValueError):
        ss({y(1): 1}).pr_z
    with pytest.raises(ValueError):
        SSMonomial((), (y(1),))


def test_order_examples():
    one, y1, y1sq = SSMonomial(), ss({y(1): 1}), ss({y(1): 2})
    assert ss_compare(one, y1) < 0 and ss_compare(y1, y1sq) < 0
    assert ss_compare(ss({y(1): 1, z(1): 1}), ss({z(1): 2})) < 0
    a = ss({z(1): 2}, [y(1), y(2)])
    b = ss({y(1): 1, z(1): 1}, [y(2), z(1)])
    f = TestPolynomial(F3, PPolynomial.zero(F3), {a: PPolynomial.one(F3), b: PPolynomial.one(F3)})
    assert leading_term(f) == a
    assert bad_terms(f) == ([b], b)


def test_bad_terms_preconditions():
    lt = ss({y(1): 2})
    f = TestPolynomial(F3, PPolynomial.zero(F3), {lt: PPolynomial.one(F3),
                                                   ss({y(1): 1}): PPolynomial.one(F3)})
    assert bad_terms(f) == ([], None)
    g = TestPolynomial(F3, PPolynomial.zero(F3), {ss({z(1): 2}, [y(1), y(2)]): PPolynomial.one(F3),
                                                   ss({y(1): 1, z(1): 1}, [y(3), z(1)]): PPolynomial.one(F3)})
    assert bad_terms(g) == ([], None)        # multidegrees differ
    with pytest.raises(ValueError):
        leading_term(TestPolynomial.zero(F3))


@given(ss_monomials(), ss_monomials())
def test_order_antisymmetric(u, v):
    assert ss_compare(u, v) == -ss_compare(v, u)
    assert (ss_compare(u, v) == 0) == (u == v)


def _r(text, spec, F=F3):
    return str(reduce(parse_polynomial(text, F), GradingSpec.parse(spec)))


def test_reduce_examples():
    assert _r("z1^3", "infinity") == "0"
    assert _r("y1^9", "infinity") == "y1^3"
    assert _r("y1^9 - y1^3", "canonical") == "0"
    assert _r("z1^5", "infinity", F5) == "0"
    assert _r("[y1,z2][z2,y3]", "infinity") == "0"
    assert _r("z1 z2", "kstar:1") == "0"
    assert _r("z1 z2 z3", "kstar:2") == "0"
    assert _r("z1 z2", "kstar:2") == "z1*z2"
    assert _r("[y1,y2]", "canonical") == "0"
    assert _r("[y1,y2]", "infinity") == "[y1,y2]"
    assert _r("y2 y1", "infinity") == "y1*y2 - [y1,y2]"
    with pytest.raises(ValueError):
        reduce(parse_polynomial("[x1,x2]", F3), GradingSpec.parse("infinity"))


def test_catalog_examples():
    half = F3.inv(F3.from_int(-2))
    g2 = catalog_gm(2, F3)
    z1z2 = FreePolynomial.word(F3, [z(1), z(2)])
    assert g2 == z1z2 + left_normed([z(1), z(2)], F3).scale(half)
    assert catalog_gm(1, F3) == FreePolynomial.variable(F3, z(1))
    for k in (1, 2, 3):
        g = catalog_gm(k + 2, F9, [z(1)] * (k + 1) + [z(2)])
        c = F9.mul(F9.from_int(k + 1), F9.inv(F9.from_int(-2)))
        want = (FreePolynomial.word(F9, [z(1)] * (k + 1) + [z(2)])
                + FreePolynomial.word(F9, [z(1)] * k, c) * left_normed([z(1), z(2)], F9))
        assert g == want
    assert catalog_fT((1, 2), 3, F3) == FreePolynomial.variable(F3, z(3)) * left_normed([z(1), z(2)], F3)
    assert catalog_rT((2,), 2, F3) == FreePolynomial.variable(F3, z(1)) * left_normed([y(1), z(2)], F3)
    for bad in (lambda: catalog_fT((1,), 2, F3), lambda: catalog_rT((1, 2), 2, F3),
                lambda: catalog_h(1, 2, F3), lambda: catalog_h(3, 2, F3, l=1)):
        with pytest.raises(ValueError):
            bad()


@pytest.mark.parametrize("spec,count", [("canonical", 4), ("infinity", 3), ("kstar:2", 4)])
def test_basis_sizes(spec, count):
    assert len(basis_for_grading(GradingSpec.parse(spec), F3)) == count


def test_k_basis_shape():
    items = basis_for_grading(GradingSpec.parse("k:2"), F3)
    # (1)/(2) with x as y and as z, (3) and (7)/(8), (4)/(5)/(6) at l = 1
    assert len(items) >= 8


@given(st.integers(0, 10**6))
def test_central_form_two_routes(seed):
    """Word-by-word central form equals the one built from the straightened terms."""
    rng = random.Random(seed)
    f = random_free_poly(F3, rng, [y(1), y(2), z(1), z(2)])
    C = CentralForm(F3)
    direct = C.poly(f)
    via = {}
    for t, c in straighten(f).items():
        via = C.add(via, C.scale(C.prterm(t), c.code))
    assert direct == via


@pytest.mark.parametrize("spec_text", SPECS)
def test_reduce_agrees_with_evaluation(spec_text):
    spec = GradingSpec.parse(spec_text)
    rng = random.Random(hash(spec_text) & 0xffff)
    vs = [y(1), y(2), z(1), z(2)]
    for _ in range(25):
        f = random_free_poly(F3, rng, vs)
        r = reduce(f, spec)
        g = r.to_free()
        N = 2 * max(f.degree(), 1) + spec.k + 2
        for _ in range(4):
            s = {v: random_homogeneous(spec, v.degree, N, F3, rng) for v in vs}
            assert gsubstitute(f, s, spec) == gsubstitute(g, s, spec), (str(f), str(r))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_k_reduce_reaches_ss3_or_flags(k):
    spec = GradingSpec.parse(f"k:{k}")
    rng = random.Random(k)
    for _ in range(40):
        r = reduce(random_free_poly(F3, rng, [y(1), y(2), z(1), z(2)]), spec)
        for u in r.terms:
            assert is_ss3(u, k) or u in r.unresolved


def test_test_polynomial_io():
    r = reduce(parse_polynomial("1 + y1^3 + 2*z1 z2 + y1^3 z1 + z2 z1", F3), GradingSpec.parse("infinity"))
    assert TestPolynomial.from_json(F3, r.to_json()) == r
    assert str(r) == "1 + y1^3 - [z1,z2] + y1^3*z1"
    r9 = reduce(parse_polynomial("t*y1 z1", F9), GradingSpec.parse("infinity"))
    assert TestPolynomial.from_json(F9, r9.to_json()) == r9


def test_ppolynomial_arithmetic():
    a = PPolynomial.monomial(F3, {y(1): 3})
    b = PPolynomial.monomial(F3, {y(1): 6})
    assert a * b == a          # y^9 folds back to y^3 over GF(3)
    assert (a * a) == b
    assert a.evaluate({y(1): 2}) == 2
    assert (a - a) == PPolynomial.zero(F3)

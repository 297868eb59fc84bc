import pytest
from hypothesis import given
from hypothesis import strategies as st

from oreloc import DegreeOverflow, DivisionByZero, InputError, PrimeField, QQ, SkewLaurentRing
from oreloc.skewpoly import (
    content_factor,
    gcrd,
    laurent_normalize,
    left_divide,
    left_lcm,
    right_divide,
    right_lcm,
    skew_mul,
)

from conftest import AUTOS, QX, RINGS, poly, skews

x = QX.gen


def test_commutation_rule_shift():
    assert str(poly("shift", "t*x")) == "(x + 1)*t"


def test_shift_product():
    p = skew_mul(poly("shift", "t - x"), poly("shift", "t + x"))
    assert p == poly("shift", "t^2 + t - x^2")


def test_identity_product():
    assert skew_mul(poly("id", "t - 1"), poly("id", "t + 1")) == poly("id", "t^2 - 1")


def test_inv_commutation():
    assert poly("inv", "t*x") == poly("inv", "x^-1*t")
    assert poly("inv", "t^-1*x") == poly("inv", "x^-1*t^-1")


def test_right_divide_examples():
    assert right_divide(poly("id", "t^2"), poly("id", "t - 1")) == (poly("id", "t + 1"), poly("id", "1"))
    q, r = right_divide(poly("shift", "t*x"), poly("shift", "t"))
    assert q == poly("shift", "x + 1") and not r


def test_right_divide_inv_remultiplies():
    p, d = poly("inv", "t^2 + x*t"), poly("inv", "t + 1")
    q, r = right_divide(p, d)
    assert skew_mul(q, d) + r == p
    assert r.degree < d.degree


def test_left_divide_examples():
    assert left_divide(poly("id", "t^2"), poly("id", "t - 1")) == (poly("id", "t + 1"), poly("id", "1"))
    q, r = left_divide(poly("shift", "x*t"), poly("shift", "t"))
    assert q == poly("shift", "x - 1") and not r
    d = poly("inv", "x*t^2 + 1")
    assert left_divide(d, d) == (poly("inv", "1"), poly("inv", "0"))


def test_divide_by_zero():
    with pytest.raises(DivisionByZero):
        right_divide(poly("id", "t"), poly("id", "0"))


def test_divide_requires_polynomials():
    with pytest.raises(InputError):
        right_divide(poly("id", "t^-1"), poly("id", "t"))


def test_lcm_example():
    a, b, m = right_lcm(poly("id", "t"), poly("id", "t - 1"))
    q1, q2 = poly("id", "t"), poly("id", "t - 1")
    assert m == poly("id", "t^2 - t")
    assert skew_mul(q1, a) == m == skew_mul(q2, b)


def test_lcm_of_equal_inputs():
    q = poly("shift", "x*t + 1")
    a, b, m = right_lcm(q, q)
    assert a == b and a.is_unit()
    assert skew_mul(q, a) == m


def test_lcm_with_unit():
    q1 = poly("inv", "t + x")
    a, b, m = right_lcm(q1, poly("inv", "x"))
    assert a.is_unit()
    assert skew_mul(q1, a) == m == skew_mul(poly("inv", "x"), b)


def test_laurent_normalize():
    assert laurent_normalize(poly("inv", "t^-1 + 1")) == (-1, poly("inv", "1 + t"))
    assert laurent_normalize(poly("inv", "t^3")) == (3, poly("inv", "1"))
    k, p = laurent_normalize(poly("inv", "x*t^-2 + t^-1"))
    assert (k, p) == (-2, poly("inv", "x + t"))
    assert skew_mul(p, poly("inv", "t^-2")) == poly("inv", "x*t^-2 + t^-1")


def test_gcrd_common_factor():
    d = poly("shift", "t + x")
    p = skew_mul(poly("shift", "t^2 + 1"), d)
    q = skew_mul(poly("shift", "x*t - 3"), d)
    g = gcrd(p, q)
    assert g.degree == 1
    assert not right_divide(d, g)[1] and not right_divide(g, d)[1]


def test_content_factor_clears_denominators():
    p = poly("inv", "(x/2)*t + 1/(x+1)")
    c = content_factor([p])
    scaled = p.scale_left(c)
    assert all(a.is_polynomial() for a in scaled.coeffs)


def test_degree_cap():
    ring = SkewLaurentRing(QX, AUTOS["shift"], degree_cap=8)
    t = ring.gen
    with pytest.raises(DegreeOverflow):
        t**9 + ring.one


def test_plain_field_rejects_twist():
    with pytest.raises(InputError):
        SkewLaurentRing(QQ, AUTOS["inv"])


def test_gf_p_coefficients():
    from oreloc import FunctionField, Moebius

    F = FunctionField(PrimeField(5))
    R = SkewLaurentRing(F, Moebius.inversion(F))
    t, y = R.gen, R.scalar(F.gen)
    assert t * y == R.scalar(1 / F.gen) * t
    q, r = right_divide(t**2 * y + 1, t + 1)
    assert q * (t + 1) + r == t**2 * y + 1


def gcrd_left_degree(q1, q2):
    # degree of the greatest common left divisor via left Euclid
    while q2:
        q1, q2 = q2, left_divide(q1, q2)[1]
    return q1.degree


names = st.sampled_from(sorted(RINGS))


@given(st.data(), names)
def test_associativity(data, name):
    ring = RINGS[name]
    p, q, d = (data.draw(skews(ring)) for _ in range(3))
    assert skew_mul(skew_mul(p, q), d) == skew_mul(p, skew_mul(q, d))
    assert p * (q + d) == p * q + p * d


@given(st.data(), names)
def test_division_identities(data, name):
    ring = RINGS[name]
    p = data.draw(skews(ring, polynomial=True, hi=3))
    d = data.draw(skews(ring, polynomial=True, nonzero=True))
    q, r = right_divide(p, d)
    assert q * d + r == p
    assert not r or r.degree < d.degree
    q, r = left_divide(p, d)
    assert d * q + r == p
    assert not r or r.degree < d.degree


@given(st.data(), names)
def test_lcm_identities(data, name):
    ring = RINGS[name]
    q1 = data.draw(skews(ring, polynomial=True, hi=1, nonzero=True))
    q2 = data.draw(skews(ring, polynomial=True, hi=1, nonzero=True))
    a, b, m = right_lcm(q1, q2)
    assert q1 * a == m == q2 * b
    assert m.lead() == 1
    assert m.degree == q1.degree + q2.degree - gcrd_left_degree(q1, q2)
    a, b, m = left_lcm(q1, q2)
    assert a * q1 == m == b * q2


@given(st.data(), names)
def test_units_invert(data, name):
    ring = RINGS[name]
    c = data.draw(skews(ring, lo=-3, hi=3, nonzero=True))
    u = ring.monomial(c.lead(), c.lo)
    assert u.is_unit()
    assert u * u.unit_inverse() == ring.one == u.unit_inverse() * u

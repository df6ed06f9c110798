from collections import defaultdict
from fractions import Fraction
from math import gcd as igcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asepchain.polyring import (
    KernelDimensionError,
    MissingVariableError,
    NotDivisibleError,
    ParseError,
    PolyMatrix,
    Ring,
    RingMismatchError,
    arith,
    determinant,
    divides,
    evaluate,
    exact_div,
    gcd,
    gcd_all,
    int_determinant,
    left_kernel,
)

R = Ring(("a", "b", "c"))
Q = Ring(("q",))

term_st = st.tuples(
    st.tuples(*[st.integers(0, 3)] * 3),
    st.integers(-5, 5).filter(bool),
)
poly_st = st.lists(term_st, max_size=5).map(
    lambda ts: R.from_terms(_collect(ts)))
nonzero_st = poly_st.filter(bool)


def _collect(ts):
    acc = defaultdict(int)
    for e, c in ts:
        acc[e] += c
    return {e: c for e, c in acc.items() if c}


def dict_mul(p, q):
    """Schoolbook product on raw term dictionaries, independent of the backend."""
    acc = defaultdict(int)
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            acc[tuple(x + y for x, y in zip(e1, e2))] += c1 * c2
    return {e: c for e, c in acc.items() if c}


@settings(max_examples=250, deadline=None)
@given(poly_st, poly_st, poly_st)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b).terms == dict_mul(a, b)
    assert a - a == R.zero


@settings(max_examples=250, deadline=None)
@given(poly_st, nonzero_st)
def test_exact_div_round_trip(a, b):
    assert exact_div(a * b, b) == a


@settings(max_examples=200, deadline=None)
@given(nonzero_st, nonzero_st, nonzero_st)
def test_gcd_properties(a, b, g):
    d = gcd(a, b)
    assert divides(d, a) and divides(d, b)
    g = g.normalized()
    assert gcd(a * g, b * g) == (d * g).normalized()


@settings(max_examples=200, deadline=None)
@given(poly_st, poly_st, st.tuples(*[st.integers(-4, 4)] * 3))
def test_evaluate_is_homomorphism(a, b, point):
    pt = dict(zip(R.names, point))
    assert evaluate(a * b, pt) == evaluate(a, pt) * evaluate(b, pt)
    assert evaluate(a + b, pt) == evaluate(a, pt) + evaluate(b, pt)


@settings(max_examples=200, deadline=None)
@given(poly_st)
def test_render_parse_round_trip(a):
    assert R.parse(str(a)) == a


def test_arith_examples():
    q = Q.var("q")
    assert str(arith(q + 1, q - 1, "mul")) == "q^2 - 1"
    assert str((q + 1) * (2 * q ** 2 - q + 2)) == "2*q^3 + q^2 + q + 2"
    S = Ring(("alpha", "beta", "q"))
    al, be, qq = S.gens()
    assert (al * be + al * be * qq).terms == {(1, 1, 0): 1, (1, 1, 1): 1}


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        R.var("a") + Q.var("q")


def test_exact_div_examples():
    p = Q.parse("2*q^3 + q^2 + q + 2")
    assert str(exact_div(p, Q.parse("q + 1"))) == "2*q^2 - q + 2"
    assert exact_div(p, Q.one) == p
    with pytest.raises(NotDivisibleError):
        exact_div(Q.parse("q^2 - 1"), Q.parse("q + 2"))


def test_gcd_examples():
    a, b = Q.parse("2*q^3 + q^2 + q + 2"), Q.parse("q^3 + q^2 + 2*q + 2")
    assert str(gcd(a, b)) == "q + 1"
    assert gcd(Q.parse("4*q + 2"), Q.zero) == Q.parse("2*q + 1")
    assert str(gcd(Q.parse("q^2 - 1"), Q.parse("q^2 + 2*q + 1"))) == "q + 1"
    with pytest.raises(ArithmeticError):
        gcd(Q.zero, Q.zero)
    assert gcd_all([Q.parse("q^2 - 1"), Q.parse("q^2 + 2*q + 1"), Q.parse("q + 1")]) == Q.parse("q + 1")


def test_evaluate_examples():
    S = Ring(("alpha", "beta", "q"))
    z2 = S.parse("alpha^2 + alpha^2*beta + alpha*beta^2 + alpha*beta*q + alpha*beta + beta^2")
    one = {"alpha": 1, "beta": 1, "q": 1}
    assert evaluate(z2, one) == 6
    assert evaluate(S.zero, one) == 0
    assert evaluate(S.parse("alpha"), {"alpha": Fraction(1, 3)}) == Fraction(1, 3)
    with pytest.raises(MissingVariableError):
        evaluate(S.parse("alpha*q"), {"alpha": 1})


def test_rendering_format():
    p = Q.parse("2*q^3 + q^2 + q + 2")
    assert str(p) == "2*q^3 + q^2 + q + 2"
    assert str(R.parse("-a*b^2 + 3")) == "-a*b^2 + 3"
    assert str(R.zero) == "0"
    with pytest.raises(ParseError):
        R.parse("a + + b")
    with pytest.raises(MissingVariableError):
        R.parse("z")


def test_left_kernel_examples():
    S = Ring(("alpha", "beta"))
    al, be = S.gens()
    m = PolyMatrix(S, [[-al, al], [be, -be]])
    assert left_kernel(m) == [be, al]
    one = S.one
    cyc = PolyMatrix(S, [[-one, one, S.zero], [S.zero, -one, one], [one, S.zero, -one]])
    assert left_kernel(cyc) == [one, one, one]


def test_left_kernel_dimension_error():
    z = Q.zero
    with pytest.raises(KernelDimensionError) as info:
        left_kernel(PolyMatrix(Q, [[z, z], [z, z]]))
    assert info.value.rank == 0


def test_left_kernel_is_kernel_with_unit_content():
    q = Q.var("q")
    one = Q.one
    m = PolyMatrix(Q, [[-(one + q), one, q], [q, -(q + 2), one * 2], [one, q, -(one + q)]])
    k = left_kernel(m)
    for j in range(3):
        assert sum((k[i] * m[i, j] for i in range(3)), Q.zero).is_zero()
    g = 0
    for v in k:
        g = igcd(g, v.content())
    assert g == 1


def test_determinant_matches_cofactor_expansion():
    a, b, c = R.gens()
    m = PolyMatrix(R, [[a, b, c], [b, c, a], [c, a, b]])
    want = a * (c * b - a * a) - b * (b * b - a * c) + c * (b * a - c * c)
    assert determinant(m) == want
    assert int_determinant([[2, 1], [7, 4]]) == 1
    assert int_determinant([[0, 1], [1, 0]]) == -1

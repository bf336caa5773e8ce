import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from rangesum.poly import (
    DegreeOverflowError, FpPoly, PolySyntaxError, ValueTable, affine_compose, eval_all,
    eval_poly, interpolate, parse_poly, poly_divmod, range_sum, range_sum_mod_check, scalar_mul,
)
from oracles import horner_table, lagrange_coeffs

PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31]
EXAMPLES = {
    5: "x*(x-1)*(x-2)",
    7: "x*(x-1)*(x-2)*(x-3)",
    11: "2 x*(x-1)*(x-3)*(x-5)*(x-7)*(x-9)",
    13: "x*(2-x)*(4-x)*(6-x)*(7-x)*(8-x)*(10-x)",
}


def legendre_poly(p):
    return FpPoly.monomial(p, (p - 1) // 2) + FpPoly.constant(p, 1)


def test_eval_examples():
    assert eval_poly(FpPoly.zero(5), 3).value == 0
    f = parse_poly("x*(x-1)*(x-2)", 5)
    assert eval_poly(f, 3).value == 1
    assert eval_poly(legendre_poly(7), 3).value == 0


def test_eval_all_examples():
    assert eval_all(FpPoly.constant(5, 1)).values == (1, 1, 1, 1, 1)
    assert eval_all(parse_poly("x*(x-1)*(x-2)", 5)).values == (0, 0, 0, 1, 4)
    # residues mod 7 are {1, 2, 4}
    assert eval_all(legendre_poly(7)).values == (1, 2, 2, 0, 2, 0, 0)


def test_interpolate_examples():
    assert interpolate(ValueTable.of(5, [0] * 5)).degree is None
    assert interpolate(ValueTable.of(5, [0, 0, 0, 1, 4])).coeffs == (0, 2, 2, 1, 0)
    assert interpolate(ValueTable.of(5, [0, 1, 1, 1, 1])) == FpPoly.monomial(5, 4)


def test_range_sum_examples():
    assert range_sum(eval_all(legendre_poly(7))) == 7
    assert range_sum(eval_all(parse_poly("x*(x-1)*(x-2)", 5))) == 5
    assert range_sum(ValueTable.of(5, [0] * 5)) == 0


def test_mod_check_examples():
    assert range_sum_mod_check(FpPoly.monomial(7, 6))
    assert range_sum(eval_all(FpPoly.monomial(7, 6))) == 6
    assert range_sum_mod_check(FpPoly.constant(5, 1))


def test_affine_compose_examples():
    f = parse_poly("x^3 + 4x + 1", 7)
    assert affine_compose(f, 1, 0) == f
    assert affine_compose(FpPoly.monomial(5, 2), 1, 1).coeffs == (1, 2, 1, 0, 0)
    with pytest.raises(ValueError):
        affine_compose(f, 0, 1)


def test_scalar_mul_examples():
    f = scalar_mul(legendre_poly(13), 7)
    assert range_sum(eval_all(f)) == 13
    g = legendre_poly(13)
    assert scalar_mul(g, 1) == g
    assert scalar_mul(g, 0).degree is None


def test_parse_examples():
    assert parse_poly("x*(x-1)*(x-2)", 5).coeffs == (0, 2, 2, 1, 0)
    f11 = parse_poly(EXAMPLES[11], 11)
    assert f11.degree == 6 and f11.leading == 2
    assert parse_poly(EXAMPLES[13], 13).degree == 7


@pytest.mark.parametrize("p", [5, 7, 11])
def test_examples_have_range_sum_p(p):
    f = parse_poly(EXAMPLES[p], p)
    assert f.degree == (p + 1) // 2
    assert range_sum(eval_all(f)) == p


def test_p13_example_range_sum_as_printed():
    # Seven factors with roots {0,2,4,6,7,8,10}: degree 7 but range sum 2p.
    f = parse_poly(EXAMPLES[13], 13)
    assert eval_all(f).values == (0, 2, 0, 1, 0, 8, 0, 0, 0, 8, 0, 6, 1)
    assert range_sum(eval_all(f)) == 26


@pytest.mark.parametrize("text,pos", [("x*(x-1", 6), ("x+*2", 2), ("3 $", 2), ("", 0)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(PolySyntaxError) as err:
        parse_poly(text, 7)
    assert err.value.pos == pos


def test_parse_grammar_details():
    p = 7
    assert parse_poly("-x + 1", p) == parse_poly("1 - x", p)
    assert parse_poly("(2-x)", p) == parse_poly("2 + 6x", p)
    assert parse_poly("2 x^3", p) == parse_poly("2*x^3", p)
    assert parse_poly("x^2(x+1)", p) == parse_poly("x^3 + x^2", p)


def test_degree_overflow_and_frobenius():
    with pytest.raises(DegreeOverflowError):
        parse_poly("x^5", 5)
    with pytest.raises(DegreeOverflowError):
        parse_poly("x*x^4", 5)
    assert parse_poly("x^5", 5, reduce_frobenius=True) == FpPoly.monomial(5, 1)
    f = parse_poly("x^9 + x^4*x^3", 5, reduce_frobenius=True)
    assert eval_all(f).values == tuple((x ** 9 + x ** 7) % 5 for x in range(5))


def test_json_round_trip():
    f = parse_poly(EXAMPLES[11], 11)
    assert f.to_json() == {"p": 11, "coeffs": [0, 2, 1, 3, 9, 5, 2]}
    assert FpPoly.from_json(f.to_json()) == f


def test_round_trip_exhaustive_p3():
    for vals in product(range(3), repeat=3):
        v = ValueTable.of(3, vals)
        f = interpolate(v)
        assert eval_all(f) == v
        assert list(f.coeffs) == lagrange_coeffs(list(vals), 3)


def test_round_trip_exhaustive_p5_against_lagrange():
    for vals in product(range(5), repeat=5):
        f = interpolate(ValueTable.of(5, vals))
        assert list(f.coeffs) == lagrange_coeffs(list(vals), 5)


@pytest.mark.parametrize("p", PRIMES)
def test_round_trip_randomized(p):
    rng = random.Random(p)
    n = 10_000 if p <= 13 else 2_000
    for _ in range(n):
        vals = [rng.randrange(p) for _ in range(p)]
        v = ValueTable.of(p, vals)
        assert eval_all(interpolate(v)) == v


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 23, 31, 47, 61, 97])
def test_mod_check_random(p):
    rng = random.Random(1000 + p)
    for _ in range(1000 if p < 50 else 200):
        f = FpPoly.from_coeffs(p, [rng.randrange(p) for _ in range(p)])
        assert range_sum_mod_check(f)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PRIMES), st.data())
def test_affine_compose_preserves_values_and_degree(p, data):
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=p, max_size=p))
    a = data.draw(st.integers(1, p - 1))
    b = data.draw(st.integers(0, p - 1))
    f = FpPoly.from_coeffs(p, coeffs)
    g = affine_compose(f, a, b)
    fv = eval_all(f).values
    assert eval_all(g).values == tuple(fv[(a * x + b) % p] for x in range(p))
    assert g.degree == f.degree
    assert sorted(eval_all(g).values) == sorted(fv)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_affine_compose_examples__keep_range_sum(p):
    f = parse_poly(EXAMPLES[p], p)
    rng = random.Random(p)
    for _ in range(20):
        g = affine_compose(f, rng.randrange(1, p), rng.randrange(p))
        assert range_sum(eval_all(g)) == p


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PRIMES), st.data())
def test_eval_all_matches_horner_oracle(p, data):
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=p, max_size=p))
    assert list(eval_all(FpPoly.from_coeffs(p, coeffs)).values) == horner_table(coeffs, p)


def test_divmod():
    f = parse_poly("(x^3 - 1)*(x+2)", 7)
    q, r = poly_divmod(f, [-1, 0, 0, 1])
    assert r == [] and q == [2, 1]
    _, r = poly_divmod(parse_poly("x^2 + 1", 7), [0, 1])
    assert r == [1]

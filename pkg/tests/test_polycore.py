import itertools
import random

import pytest
from hypothesis import given, strategies as st

from qpkit.polycore import (IntPolynomial, LaurentExpr, exact_divide, format_polynomial, long_divide,
                            newton_vertex_filter, parse_polynomial, tropical_add, tropical_eval, tropical_mul)


def P(text, n=2):
    return parse_polynomial(text, n)


def brute_trop(F, assignment):
    # componentwise minimum over all terms of the substituted exponent vectors
    vals = []
    for e, _ in F.items():
        v = [0] * len(assignment[0])
        for x, m in zip(e, assignment):
            for i, y in enumerate(m):
                v[i] += x * y
        vals.append(v)
    return tuple(min(col) for col in zip(*vals))


def polys(n=2, max_deg=3, max_terms=5, lo=-4, hi=4):
    exps = st.tuples(*[st.integers(0, max_deg)] * n)
    return st.dictionaries(exps, st.integers(lo, hi), max_size=max_terms).map(lambda d: IntPolynomial(n, d))


monos = st.lists(st.integers(-5, 5), min_size=3, max_size=3).map(tuple)


class TestTropical:
    def test_examples(self):
        assert tropical_add((2,), (3,)) == (2,)
        assert tropical_add((-1, 1), (0, -1)) == (-1, -1)
        assert tropical_add((4, -2), (4, -2)) == (4, -2)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            tropical_add((1,), (1, 2))

    @given(monos, monos, monos)
    def test_semifield_laws(self, a, b, c):
        assert tropical_add(a, b) == tropical_add(b, a)
        assert tropical_add(a, tropical_add(b, c)) == tropical_add(tropical_add(a, b), c)
        assert tropical_add(a, a) == a
        assert tropical_mul(a, tropical_add(b, c)) == tropical_add(tropical_mul(a, b), tropical_mul(a, c))

    def test_eval_examples(self):
        assign = [(-1, 1), (0, -1)]
        assert tropical_eval(P("u1*u2+u1+1"), assign) == (-1, 0)
        assert tropical_eval(P("u2+1"), assign) == (0, -1)
        assert tropical_eval(IntPolynomial.one(2), [(3, 1), (2, 2)]) == (0, 0)

    def test_eval_zero_rejected(self):
        with pytest.raises(ValueError):
            tropical_eval(IntPolynomial.zero(2), [(0,), (0,)])

    @given(polys(lo=1), polys(lo=1), st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=2, max_size=2))
    def test_eval_multiplicative(self, F, G, assign):
        if F.is_zero() or G.is_zero():
            return
        lhs = tropical_eval(F * G, assign)
        rhs = tropical_mul(tropical_eval(F, assign), tropical_eval(G, assign))
        assert lhs == rhs
        assert lhs == brute_trop(F * G, assign)


class TestNewton:
    def test_examples(self):
        F = P("u1*u2+u1+1")
        assert newton_vertex_filter(F) == F
        assert newton_vertex_filter(P("u1^2+2*u1+1", 1)) == P("u1^2+1", 1)
        assert newton_vertex_filter(P("7*u1*u2^3")) == P("u1*u2^3")

    def test_square_interior(self):
        # (1+u1)^2 (1+u2)^2 has the four corners as vertices
        F = P("u1+1") ** 2 * P("u2+1") ** 2
        assert newton_vertex_filter(F) == P("u1^2*u2^2+u1^2+u2^2+1")

    @given(polys(lo=1, max_terms=6), st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=2, max_size=2))
    def test_filter_preserves_tropical_value(self, F, assign):
        if F.is_zero():
            return
        G = newton_vertex_filter(F)
        assert newton_vertex_filter(G) == G
        assert tropical_eval(F, assign) == tropical_eval(G, assign)


class TestDivision:
    def test_examples(self):
        assert exact_divide(P("u2+1") * P("u1+1"), P("u2+1")) == P("u1+1")
        F = P("u1*u2+u1+1")
        assert exact_divide(F, IntPolynomial.one(2)) == F
        assert exact_divide(P("u1*u2+u1+u2+1"), P("u1+1")) == P("u2+1")

    def test_inexact(self):
        with pytest.raises(ArithmeticError):
            exact_divide(P("u1+u2"), P("u1+1"))
        with pytest.raises(ZeroDivisionError):
            exact_divide(P("u1"), IntPolynomial.zero(2))

    @given(polys(n=3), polys(n=3))
    def test_divide_product(self, a, b):
        if b.is_zero():
            return
        assert exact_divide(a * b, b) == a
        assert long_divide(a * b, b) == a

    def test_large_products_use_same_answer(self):
        rng = random.Random(5)
        a = IntPolynomial(3, {tuple(rng.randrange(4) for _ in range(3)): rng.randint(1, 9) for _ in range(30)})
        b = IntPolynomial(3, {tuple(rng.randrange(4) for _ in range(3)): rng.randint(1, 9) for _ in range(30)})
        prod = a * b
        # schoolbook product as oracle
        naive = {}
        for (e, c), (f, d) in itertools.product(a.items(), b.items()):
            k = tuple(x + y for x, y in zip(e, f))
            naive[k] = naive.get(k, 0) + c * d
        assert prod == IntPolynomial(3, naive)
        assert exact_divide(prod, a) == b
        assert long_divide(prod, a) == b


class TestPolynomial:
    def test_no_zero_terms(self):
        F = IntPolynomial(2, {(1, 0): 0, (0, 0): 3})
        assert F.items() and len(F) == 1

    def test_power_matches_repeated_product(self):
        F = P("u1+u2+2")
        assert F ** 4 == F * F * F * F
        assert F ** 0 == IntPolynomial.one(2)

    @given(polys(n=3, lo=-20, hi=20, max_terms=6))
    def test_text_round_trip(self, F):
        assert parse_polynomial(format_polynomial(F), 3) == F

    def test_format(self):
        assert format_polynomial(P("1+u1+u1*u2")) == "u1*u2+u1+1"
        assert format_polynomial(P("3*u1^2-u2")) == "3*u1^2-u2"
        assert format_polynomial(IntPolynomial.zero(2)) == "0"

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            parse_polynomial("u3", 2)
        with pytest.raises(ValueError):
            parse_polynomial("x1+1", 2)

    def test_permute(self):
        assert P("u1^2*u2+1").permute_variables((1, 0)) == P("u1*u2^2+1")

    @given(polys(n=2), polys(n=2), polys(n=2))
    def test_ring_axioms(self, a, b, c):
        assert a * (b + c) == a * b + a * c
        assert (a - b) + b == a
        assert a * b == b * a


class TestLaurent:
    def test_reduction(self):
        x = LaurentExpr.from_laurent_terms(2, {(-1, -1): 1, (0, -1): 1, (-1, 0): 1})
        assert x.denominator == (1, 1)
        assert x.numerator == P("u1+u2+1")
        assert str(x) == "(x1+x2+1)/(x1*x2)"
        assert x.denominator_vector() == (1, 1)

    def test_polynomial_has_no_denominator(self):
        x = LaurentExpr.from_laurent_terms(2, {(1, 0): 1})
        assert str(x) == "x1"
        assert x.denominator_vector() == (-1, 0)

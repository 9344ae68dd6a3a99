import random
from fractions import Fraction

import pytest

from src.algebra.expression_parser import parse_expr
from src.algebra.partial_fractions import (
    PartialFractionTerm,
    partial_fractions,
    recombine,
)
from src.algebra.rational_functions import from_rat
from src.errors import PreconditionError, UnsupportedPlaceError


def test_simple_poles(field_t):
    f = parse_expr("(3*t+1)/(t*(t+1))", field_t)
    parts = partial_fractions(f)
    assert not parts.polynomial
    assert parts.terms == [
        PartialFractionTerm(Fraction(-1), 1, Fraction(2)),
        PartialFractionTerm(Fraction(0), 1, Fraction(1)),
    ]


def test_polynomial_only(field_t):
    parts = partial_fractions(parse_expr("t^2", field_t))
    assert parts.polynomial == parse_expr("t^2", field_t).numer
    assert parts.terms == []


def test_double_pole(field_t):
    parts = partial_fractions(parse_expr("1/(t-1)^2", field_t))
    assert parts.terms == [PartialFractionTerm(Fraction(1), 2, Fraction(1))]
    assert parts.coefficient(Fraction(1), 1) == 0


def test_improper_fraction_with_rational_roots(field_t):
    f = parse_expr("(t^3 + 1)/(2*t - 1)", field_t)
    parts = partial_fractions(f)
    assert recombine(parts, field_t) == f
    assert [term.root for term in parts.terms] == [Fraction(1, 2)]


def test_irreducible_quadratic_is_unsupported(field_t):
    with pytest.raises(UnsupportedPlaceError):
        partial_fractions(parse_expr("1/(t^2+1)", field_t))


def test_needs_one_variable(field_tu):
    with pytest.raises(PreconditionError):
        partial_fractions(parse_expr("1/(t-u)", field_tu))


def test_random_recombination(field_t):
    rng = random.Random(31)
    t = parse_expr("t", field_t)
    for _ in range(25):
        numer = field_t.zero
        for k in range(rng.randint(0, 4)):
            numer += rng.randint(-4, 4) * t**k
        denom = field_t.one
        for _ in range(rng.randint(0, 4)):
            denom *= t - from_rat(Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
        f = numer / denom
        parts = partial_fractions(f)
        assert recombine(parts, field_t) == f
        orders = [(term.root, term.order) for term in parts.terms]
        assert orders == sorted(orders)


def test_zero_function(field_t):
    parts = partial_fractions(field_t.zero)
    assert not parts.polynomial
    assert parts.terms == []
    assert recombine(parts, field_t) == field_t.zero

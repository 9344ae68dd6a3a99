"""
Partial fraction decomposition of univariate rational functions whose denominator
splits into linear factors over QQ.

The denominator is factored with sympy (`PolyElement.factor_list`); every factor must
be linear, otherwise the decomposition would need an algebraic extension and an
UnsupportedPlaceError is raised. For a root c of multiplicity m the coefficients are
the Taylor coefficients at c of r(t)/g(t), where g is the denominator with (t - c)^m
removed.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from math import factorial

from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from ..errors import PreconditionError, UnsupportedPlaceError
from .rational_functions import canonical_parts, evaluate_univariate, from_rat, to_rat

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartialFractionTerm:
    """coefficient / (t - root)^order"""

    root: Fraction
    order: int
    coefficient: Fraction


@dataclass(frozen=True)
class PartialFractions:
    polynomial: PolyElement
    terms: list[PartialFractionTerm] = dataclass_field(default_factory=list)

    def coefficient(self, root: Fraction, order: int = 1) -> Fraction:
        """Coefficient of 1/(t - root)^order, zero when absent."""
        for term in self.terms:
            if term.root == root and term.order == order:
                return term.coefficient
        return Fraction(0)


def linear_root(factor: PolyElement) -> Fraction:
    """
    Root of a univariate factor of degree one.

    Raises:
        UnsupportedPlaceError: If the factor has degree greater than one.
    """
    if factor.degree() != 1:
        raise UnsupportedPlaceError(
            f"factor {factor.as_expr()} of degree {factor.degree()} has no rational root"
        )
    coefficients = {monom[0]: to_rat(coeff) for monom, coeff in factor.terms()}
    return -coefficients.get(0, Fraction(0)) / coefficients[1]


def denominator_roots(f: FracElement) -> list[tuple[Fraction, int]]:
    """Rational roots of the denominator of f with multiplicities, sorted by root."""
    _, denom = canonical_parts(f)
    _, factors = denom.factor_list()
    return sorted((linear_root(factor), multiplicity) for factor, multiplicity in factors)


def partial_fractions(f: FracElement) -> PartialFractions:
    """
    Decomposes f = polynomial + sum of coefficient/(t - root)^order.

    Args:
        f (FracElement): A rational function of a one-variable field.

    Returns:
        PartialFractions: The polynomial part and the nonzero terms sorted by
            (root, order).

    Raises:
        PreconditionError: If f's field does not have exactly one variable.
        UnsupportedPlaceError: If the denominator has an irreducible factor of degree > 1.
    """
    if f.field.ngens != 1:
        raise PreconditionError("partial fractions need a field in one variable")
    numer, denom = canonical_parts(f)
    quotient, remainder = numer.div(denom)
    ring = denom.ring
    t = ring.gens[0]
    terms = []
    for root, multiplicity in denominator_roots(f):
        linear = t - from_rat(root)
        cofactor = denom.exquo(linear**multiplicity)
        h = f.field.new(remainder, cofactor)
        for j in range(multiplicity):
            value = _value_at(h, root) / factorial(j)
            if value:
                terms.append(PartialFractionTerm(root, multiplicity - j, value))
            h = h.diff(f.field.gens[0])
    terms.sort(key=lambda term: (term.root, term.order))
    logger.debug("Partial fractions: %d terms", len(terms))
    return PartialFractions(quotient, terms)


def _value_at(h: FracElement, c: Fraction) -> Fraction:
    return evaluate_univariate(h.numer, c) / evaluate_univariate(h.denom, c)


def recombine(parts: PartialFractions, f_field) -> FracElement:
    """Sums the decomposition back into a rational function of f_field."""
    t = f_field.gens[0]
    total = f_field.new(parts.polynomial.set_ring(f_field.ring))
    for term in parts.terms:
        total += from_rat(term.coefficient) / (t - from_rat(term.root)) ** term.order
    return total

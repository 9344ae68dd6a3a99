"""
Exact scalars of the kernel: rationals, sparse multivariate polynomials over QQ and
reduced fractions of them.

The heavy lifting is done by sympy's sparse polynomial rings and rational function
fields (`sympy.polys.rings`, `sympy.polys.fields`); every element is kept reduced by
sympy, and this module adds the kernel's canonical form (denominator with leading
coefficient 1 under the fixed monomial order), printing, substitution and formal
partial derivatives.

Functions:
    function_field(names): The rational function field QQ(names), cached per name tuple.
    polynomial_ring(names, domain): The polynomial ring domain[names].
    coerce(field, value): Turns an int, Fraction or rational function into a field element.
    lift(f, field): Moves a rational function into a field with more variables.
    canonical_parts(f): Numerator and monic denominator of f.
    rational_value(f): The Fraction value of a constant rational function, else None.
    partial_derivative(f, v): Formal partial derivative by the quotient rule.
    substitute(f, values, target): Substitutes rational functions for variables.
    evaluate_univariate(p, c): Value of a univariate polynomial at a rational point.
    format_poly(p), format_ratfunc(f): Printing compatible with the expression grammar.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from sympy import QQ
from sympy.polys.fields import FracElement, FracField
from sympy.polys.polyerrors import CoercionFailed, GeneratorsError
from sympy.polys.rings import PolyElement, PolyRing

from ..errors import ForeignElementError, UnknownVariableError
from ..settings import MONOMIAL_ORDER

logger = logging.getLogger(__name__)

Rat = Fraction
RatFunc = FracElement
MPoly = PolyElement
Scalar = Union[int, Fraction, FracElement]


@lru_cache(maxsize=None)
def function_field(names: tuple[str, ...], order=MONOMIAL_ORDER) -> FracField:
    """
    Returns the rational function field QQ(names) with the given monomial order.

    Args:
        names (tuple[str, ...]): Variable names in declaration order (may be empty).
        order: A sympy monomial order, grevlex unless stated otherwise.

    Returns:
        FracField: The cached field object.
    """
    return FracField(",".join(names), QQ, order)


@lru_cache(maxsize=None)
def polynomial_ring(names: tuple[str, ...], domain=QQ, order=MONOMIAL_ORDER) -> PolyRing:
    """Returns the polynomial ring domain[names]."""
    return PolyRing(",".join(names), domain, order)


def variable_names(structure) -> tuple[str, ...]:
    """Names of the variables of a sympy ring or field."""
    return tuple(str(symbol) for symbol in structure.symbols)


def to_rat(value) -> Fraction:
    """Converts a sympy QQ/ZZ element (or int) to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.numerator), int(value.denominator))


def from_rat(value) -> object:
    """Converts an int or Fraction to a sympy QQ element."""
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def generator(field: FracField, name: str) -> FracElement:
    """Returns the generator of field named name."""
    names = variable_names(field)
    if name not in names:
        raise UnknownVariableError(f"unknown variable {name}")
    return field.gens[names.index(name)]


def coerce(field: FracField, value: Scalar) -> FracElement:
    """
    Turns a scalar into an element of field.

    Args:
        field (FracField): The target field.
        value (int | Fraction | FracElement): The value; rational functions are lifted.

    Returns:
        FracElement: The element of field.

    Raises:
        ForeignElementError: If value uses variables unknown to field.
    """
    if isinstance(value, FracElement):
        return lift(value, field)
    if isinstance(value, PolyElement):
        return lift(value.ring.to_field().new(value), field)
    try:
        return field.ground_new(from_rat(value))
    except (TypeError, ValueError, CoercionFailed) as e:
        raise ForeignElementError(f"cannot use {value!r} as a scalar") from e


def lift(f: FracElement, field: FracField) -> FracElement:
    """Moves f into field, which must contain every variable f actually uses."""
    if f.field == field:
        return f
    try:
        return f.set_field(field)
    except GeneratorsError as e:
        raise ForeignElementError(
            f"{format_ratfunc(f)} uses variables outside {variable_names(field)}"
        ) from e


def canonical_parts(f: FracElement) -> tuple[PolyElement, PolyElement]:
    """
    Returns the canonical numerator and denominator of f: coprime, denominator with
    leading coefficient 1 under the field's monomial order.
    """
    lc = f.denom.LC
    return f.numer.quo_ground(lc), f.denom.quo_ground(lc)


def rational_value(f: FracElement) -> Fraction | None:
    """Returns f as a Fraction when f is a constant rational function, else None."""
    if not (f.numer.is_ground and f.denom.is_ground):
        return None
    return to_rat(f.numer.LC) / to_rat(f.denom.LC)


def partial_derivative(f: FracElement, v: str) -> FracElement:
    """
    Formal partial derivative of f with respect to the variable named v.

    Raises:
        UnknownVariableError: If v is not a variable of f's field.
    """
    return f.diff(generator(f.field, v))


def substitute(
    f: FracElement, values: Mapping[str, FracElement], target: FracField
) -> FracElement:
    """
    Substitutes values[name] for each named variable of f; the remaining variables are
    mapped to the generators of target with the same names.

    Raises:
        ZeroDivisionError: If the denominator of f vanishes under the substitution.
        UnknownVariableError: If a remaining variable is missing from target.
    """
    images = []
    for name in variable_names(f.field):
        if name in values:
            images.append(coerce(target, values[name]))
        else:
            images.append(generator(target, name))
    numer = _substitute_poly(f.numer, images, target)
    denom = _substitute_poly(f.denom, images, target)
    if not denom:
        raise ZeroDivisionError(f"{format_ratfunc(f)} has a pole at the substituted point")
    return numer / denom


def _substitute_poly(p: PolyElement, images: list, target: FracField) -> FracElement:
    total = target.zero
    powers: dict[tuple[int, int], FracElement] = {}
    for monom, coeff in p.terms():
        term = target.ground_new(coeff)
        for index, exponent in enumerate(monom):
            if exponent:
                key = (index, exponent)
                if key not in powers:
                    powers[key] = images[index] ** exponent
                term = term * powers[key]
        total = total + term
    return total


def evaluate_univariate(p: PolyElement, c: Fraction) -> Fraction:
    """Value of a univariate polynomial p at the rational point c."""
    return sum((to_rat(coeff) * c ** monom[0] for monom, coeff in p.terms()), Fraction(0))


def format_poly(p: PolyElement) -> str:
    """
    Prints p with terms in decreasing monomial order, e.g. "t^2*u - 1/2*t + 3".
    The output parses back to p under the expression grammar.
    """
    if not p:
        return "0"
    names = variable_names(p.ring)
    pieces = []
    for position, (monom, coeff) in enumerate(p.terms()):
        c = to_rat(coeff)
        negative = c < 0
        c = abs(c)
        factors = [
            name if exponent == 1 else f"{name}^{exponent}"
            for name, exponent in zip(names, monom)
            if exponent
        ]
        if not factors:
            body = str(c)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(c), *factors])
        if position == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def format_ratfunc(f: FracElement) -> str:
    """Prints the canonical form of f, e.g. "(t - 1)/(t^2 + 2*t + 1)"."""
    numer, denom = canonical_parts(f)
    numer_text = format_poly(numer)
    if denom == denom.ring.one:
        return numer_text
    if len(numer) > 1:
        numer_text = f"({numer_text})"
    denom_text = format_poly(denom)
    if len(denom) > 1 or sum(1 for exponent in denom.LM if exponent) > 1:
        denom_text = f"({denom_text})"
    return f"{numer_text}/{denom_text}"

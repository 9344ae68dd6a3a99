"""
Orders and residues at the places of a rational function field QQ(t).

Only rational places t = c and the place at infinity are supported; a zero or pole at
an irreducible factor of higher degree raises UnsupportedPlaceError. A 1-form is
f * dt with f in QQ(t).

Functions:
    ord_place(e, p): Valuation of e at p.
    residue_at(omega, p): Residue of a 1-form at p.
    residue_at_infinity(omega, method): By substitution t = 1/s or by the residue sum.
    dlog_residue_check(e, p): res_p(de/e) = ord_p(e) and res_p(de) = 0.
    order_balance_check(bs, c, nu): Orders of the b_i balance at every place.
    places_of(e), residue_sum(omega): Zeros/poles and the global residue sum.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from ..algebra.partial_fractions import linear_root, partial_fractions
from ..algebra.rational_functions import (
    Scalar,
    canonical_parts,
    coerce,
    evaluate_univariate,
    format_ratfunc,
    from_rat,
    function_field,
    substitute,
    variable_names,
)
from ..errors import (
    IdentityFailedError,
    KernelAssertionError,
    PreconditionError,
    ZeroElementError,
)

logger = logging.getLogger(__name__)

INFINITE_ORDER = math.inf

SUBSTITUTION = "substitution"
SUM = "sum"


@dataclass(frozen=True)
class Place:
    """The rational place t = root, or the place at infinity when root is None."""

    root: Fraction | None = None

    @classmethod
    def at(cls, c: int | Fraction) -> "Place":
        return cls(Fraction(c))

    @property
    def finite(self) -> bool:
        return self.root is not None

    @property
    def infinity(self) -> bool:
        return self.root is None

    def sort_key(self) -> tuple:
        return (1, Fraction(0)) if self.infinity else (0, self.root)

    def label(self, variable: str = "t") -> str:
        return "inf" if self.infinity else f"{variable}={self.root}"


INFINITY = Place()


def univariate(f: Scalar, variable: str | None = None) -> FracElement:
    """
    Moves f into QQ(variable).

    Raises:
        PreconditionError: If variable is omitted and f's field has several variables.
        ForeignElementError: If f uses another variable.
    """
    if variable is None:
        if not isinstance(f, FracElement):
            raise PreconditionError("name the variable of a constant")
        names = variable_names(f.field)
        if len(names) != 1:
            raise PreconditionError(f"name the variable among {names}")
        return f
    return coerce(function_field((variable,)), f)


@dataclass(frozen=True)
class RatForm1:
    """The 1-form coefficient * dt on QQ(t)."""

    coefficient: FracElement

    def __post_init__(self):
        if self.coefficient.field.ngens != 1:
            raise PreconditionError("a 1-form needs a field in one variable")

    @property
    def variable(self) -> str:
        return variable_names(self.coefficient.field)[0]

    def __add__(self, other: "RatForm1") -> "RatForm1":
        return RatForm1(self.coefficient + other.coefficient)

    def scale(self, c: int | Fraction) -> "RatForm1":
        return RatForm1(self.coefficient * from_rat(c))

    def __str__(self):
        text = format_ratfunc(self.coefficient)
        if text == "1":
            return f"d({self.variable})"
        return f"({text})*d({self.variable})"


def rat_form(f: Scalar, variable: str | None = None) -> RatForm1:
    return RatForm1(univariate(f, variable))


def exact_form(e: FracElement) -> RatForm1:
    """de = e' dt."""
    return RatForm1(e.diff(e.field.gens[0]))


def log_form(e: FracElement) -> RatForm1:
    """
    de / e.

    Raises:
        ZeroElementError: If e is zero.
    """
    if not e:
        raise ZeroElementError("dlog of zero is undefined")
    return RatForm1(e.diff(e.field.gens[0]) / e)


def _multiplicity(p: PolyElement, c: Fraction) -> int:
    t = p.ring.gens[0]
    linear = t - from_rat(c)
    count = 0
    while p and not evaluate_univariate(p, c):
        p = p.exquo(linear)
        count += 1
    return count


def ord_place(e: FracElement, p: Place) -> int | float:
    """
    Order of e at p: multiplicity of t - c in the numerator minus that in the
    denominator, or deg(denominator) - deg(numerator) at infinity. The zero function has
    order INFINITE_ORDER everywhere.
    """
    if not e:
        return INFINITE_ORDER
    numer, denom = canonical_parts(e)
    if p.infinity:
        return denom.degree() - numer.degree()
    return _multiplicity(numer, p.root) - _multiplicity(denom, p.root)


def _linear_roots(poly: PolyElement) -> list[Fraction]:
    if poly.is_ground:
        return []
    _, factors = poly.factor_list()
    return [linear_root(factor) for factor, _ in factors]


def places_of(e: FracElement) -> list[Place]:
    """
    Zeros and poles of e: its rational roots, then infinity when ord at infinity is
    nonzero.

    Raises:
        UnsupportedPlaceError: If a zero or pole is not rational.
        ZeroElementError: If e is zero.
    """
    if not e:
        raise ZeroElementError("the zero function has no divisor")
    numer, denom = canonical_parts(e)
    roots = sorted(set(_linear_roots(numer)) | set(_linear_roots(denom)))
    places = [Place(root) for root in roots]
    if ord_place(e, INFINITY):
        places.append(INFINITY)
    return places


def residue_at_infinity(omega: RatForm1, method: str = SUBSTITUTION) -> Fraction:
    """
    Residue of f dt at infinity.

    "substitution" writes t = 1/s, so that f dt = -f(1/s)/s^2 ds, and takes the residue
    at s = 0; "sum" negates the sum of the finite residues.

    Raises:
        UnsupportedPlaceError: If a finite pole is not rational.
    """
    f = omega.coefficient
    if method == SUM:
        parts = partial_fractions(f)
        return -sum(
            (term.coefficient for term in parts.terms if term.order == 1), Fraction(0)
        )
    if method != SUBSTITUTION:
        raise PreconditionError(f"unknown residue method {method!r}")
    t = f.field.gens[0]
    g = -substitute(f, {omega.variable: 1 / t}, f.field) / t**2
    return partial_fractions(g).coefficient(Fraction(0), 1)


def residue_at(omega: RatForm1, p: Place) -> Fraction:
    """
    Residue of omega at p. At a finite place it is the coefficient of 1/(t - c) in the
    partial fraction expansion; at infinity both methods are computed and must agree.

    Raises:
        UnsupportedPlaceError: If a pole of omega is not rational.
    """
    if p.finite:
        return partial_fractions(omega.coefficient).coefficient(p.root, 1)
    by_substitution = residue_at_infinity(omega, SUBSTITUTION)
    by_sum = residue_at_infinity(omega, SUM)
    if by_substitution != by_sum:
        raise KernelAssertionError(
            f"residues at infinity of {omega} disagree: {by_substitution} and {by_sum}"
        )
    return by_substitution


def residue_sum(omega: RatForm1) -> Fraction:
    """Sum of the residues at every place; zero by the residue theorem."""
    parts = partial_fractions(omega.coefficient)
    finite = sum((term.coefficient for term in parts.terms if term.order == 1), Fraction(0))
    return finite + residue_at_infinity(omega, SUBSTITUTION)


def dlog_residue_check(e: FracElement, p: Place) -> bool:
    """
    Whether res_p(de/e) = ord_p(e) and res_p(de) = 0.

    Raises:
        ZeroElementError: If e is zero.
        UnsupportedPlaceError: If a zero or pole of e is not rational.
    """
    return residue_at(log_form(e), p) == ord_place(e, p) and not residue_at(
        exact_form(e), p
    )


@dataclass(frozen=True)
class PlaceBalance:
    """Orders of the b_i at a place and sum c_i * ord_p(b_i)."""

    place: Place
    orders: tuple[int, ...]
    total: Fraction

    @property
    def ok(self) -> bool:
        return self.total == 0


def order_balance_check(
    bs: Sequence[Scalar],
    c: Sequence[int | Fraction],
    nu: Scalar,
    variable: str | None = None,
) -> list[PlaceBalance]:
    """
    Compares residues of both sides of sum c_i db_i/b_i = d(nu) at each zero or pole
    of the b_i. The right side has no residues, so sum c_i ord_p(b_i) must vanish.

    Args:
        bs (Sequence): Nonzero rational functions b_i of one variable.
        c (Sequence): Rational coefficients, one per b_i.
        nu (Scalar): The function whose differential the combination equals.
        variable (str | None): The variable name; optional when the inputs already
            live in a one-variable field.

    Returns:
        list[PlaceBalance]: One entry per place, finite places by root then infinity.

    Raises:
        IdentityFailedError: If sum c_i db_i/b_i differs from d(nu).
        UnsupportedPlaceError: If a zero or pole is not rational.
    """
    if len(bs) != len(c):
        raise PreconditionError("one coefficient per b is needed")
    if variable is None:
        sample = next((x for x in [*bs, nu] if isinstance(x, FracElement)), None)
        if sample is None:
            raise PreconditionError("name the variable of constant inputs")
        variable = variable_names(sample.field)[0]
    field = function_field((variable,))
    values = [univariate(b, variable) for b in bs]
    nu = univariate(nu, variable)
    combination = field.zero
    for c_i, b in zip(c, values):
        combination += log_form(b).coefficient * from_rat(c_i)
    if combination != exact_form(nu).coefficient:
        raise IdentityFailedError(
            f"sum c_i db_i/b_i = ({format_ratfunc(combination)}) d{variable} is not d(nu)"
        )
    places = sorted({p for b in values for p in places_of(b)}, key=Place.sort_key)
    balances = []
    for p in places:
        orders = tuple(ord_place(b, p) for b in values)
        total = sum((Fraction(c_i) * o for c_i, o in zip(c, orders)), Fraction(0))
        balances.append(PlaceBalance(p, orders, total))
    logger.debug("Checked %d places", len(balances))
    return balances

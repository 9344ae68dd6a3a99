"""
Affine rational D-varieties (X, s) over a differential field K.

X is cut out of affine n-space by polynomials in the coordinates with coefficients in
K, and s is a rational section of the shifted tangent bundle. The section induces a
derivation on the function field K(X), extending the one of K; at sharp points
(points whose derivative is the value of s) it induces a semilinear operator on the
cotangent space.

Elements are handled in two rings:
    * the ambient field QQ(K generators, coordinates), where differentiation happens;
    * the coordinate ring K[coordinates] (coefficients in the fraction field of K),
      where normal forms modulo the ideal are taken.

Functions:
    shifted_tangent_ideal(X): Equations of the shifted tangent bundle.
    check_section(base, coordinates, ideal, section): Section validation with certificate.
    validate_section(X): check_section for a constructed variety.
    induced_derivation(X, f): The derivation of K(X) induced by the section.
    point(X, coords), is_sharp_point(X, alpha): Points and the sharpness test.
    generic_sharp_point_check(X): Coordinate functions form a sharp point of X over K(X).
    tangent_space(X, alpha), cotangent_class(X, alpha, f): Tangent and cotangent spaces.
    cotangent_flow(X, alpha), cotangent_flow_apply(X, alpha, v): The induced operator.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

from sympy import QQ
from sympy.polys.fields import FracElement, FracField
from sympy.polys.rings import PolyElement, PolyRing

from ..algebra.expression_parser import parse_expr
from ..algebra.groebner import groebner_basis, normal_form
from ..algebra.linear_algebra import linear_kernel, matrix_rank
from ..algebra.rational_functions import (
    Scalar,
    coerce,
    format_ratfunc,
    function_field,
    lift,
    substitute,
)
from ..errors import (
    EmptyVarietyError,
    InvalidSectionError,
    NotOnVarietyError,
    NotSharpPointError,
    PreconditionError,
    SectionUndefinedError,
    UndefinedFunctionError,
)
from ..settings import MONOMIAL_ORDER, TANGENT_PREFIX
from .diff_field import DiffFieldPresentation, check_generator_names, derive

logger = logging.getLogger(__name__)

Element = Union[Scalar, str]


class CoordinateRing:
    """
    Converts between the ambient field QQ(K generators, coordinates) and the polynomial
    ring K[coordinates].
    """

    def __init__(self, base: DiffFieldPresentation, coordinates: tuple[str, ...]):
        self.base = base
        self.coordinates = coordinates
        self.k = len(base.generators)
        self.ambient: FracField = function_field(base.generators + coordinates)
        self.scalars: FracField = base.field
        domain = self.scalars.to_domain() if self.k else QQ
        self.ring: PolyRing = PolyRing(",".join(coordinates), domain, MONOMIAL_ORDER)

    def scalar(self, coeff, base_monom: tuple[int, ...]):
        """coeff * (K generators)^base_monom as a coefficient of self.ring."""
        if not self.k:
            return coeff
        return self.scalars.new(self.scalars.ring({base_monom: coeff}))

    def to_ring(self, p: PolyElement) -> PolyElement:
        """A polynomial of the ambient ring as an element of K[coordinates]."""
        terms: dict[tuple[int, ...], object] = {}
        for monom, coeff in p.items():
            key = monom[self.k :]
            value = self.scalar(coeff, monom[: self.k])
            terms[key] = terms[key] + value if key in terms else value
        return self.ring.from_dict(terms)

    def polynomial(self, f: FracElement) -> PolyElement:
        """
        An ambient element whose denominator involves no coordinate, as an element of
        K[coordinates].

        Raises:
            PreconditionError: If the denominator involves a coordinate.
        """
        if any(any(monom[self.k :]) for monom in f.denom.keys()):
            raise PreconditionError(
                f"{format_ratfunc(f)} is not a polynomial in {', '.join(self.coordinates)}"
            )
        denominator = self.to_ring(f.denom).LC
        return self.to_ring(f.numer).quo_ground(denominator)

    def from_ring(self, p: PolyElement) -> FracElement:
        """An element of K[coordinates] as an element of the ambient field."""
        total = self.ambient.zero
        coords = self.ambient.gens[self.k :]
        for monom, coeff in p.items():
            term = lift(coeff, self.ambient) if self.k else self.ambient.ground_new(coeff)
            for gen, exponent in zip(coords, monom):
                if exponent:
                    term *= gen**exponent
            total += term
        return total


@dataclass(frozen=True)
class SectionCheck:
    """
    Outcome of section validation. When invalid, generator is the ideal generator whose
    shifted tangent equation fails and residue is the nonzero normal form.
    """

    valid: bool
    generator: FracElement | None = None
    residue: FracElement | None = None

    def describe(self) -> str:
        if self.valid:
            return "section satisfies the shifted tangent equations"
        return (
            f"generator {format_ratfunc(self.generator)} leaves residue "
            f"{format_ratfunc(self.residue)}"
        )


def _ambient_elements(field: FracField, values: Sequence[Element]) -> tuple[FracElement, ...]:
    return tuple(
        parse_expr(v, field) if isinstance(v, str) else coerce(field, v) for v in values
    )


def _tangent_equation(
    base: DiffFieldPresentation,
    ambient: FracField,
    P: FracElement,
    directions: Sequence[FracElement],
) -> FracElement:
    """sum_i (dP/dx_i) * directions[i] + P^d, where P^d differentiates coefficients."""
    k = len(base.generators)
    total = ambient.zero
    for gen, direction in zip(ambient.gens[k:], directions):
        total += P.diff(gen) * direction
    for gen, image in zip(ambient.gens[:k], base.images):
        if image:
            total += P.diff(gen) * lift(image, ambient)
    return total


def check_section(
    base: DiffFieldPresentation,
    coordinates: Sequence[str],
    ideal: Sequence[Element],
    section: Sequence[Element],
) -> SectionCheck:
    """
    Checks that section is a rational section of the shifted tangent bundle of
    V(ideal): every sum_i (dP/dx_i) * s_i + P^d must vanish on X.

    Raises:
        SectionUndefinedError: If a section denominator lies in the ideal.
        EmptyVarietyError: If the ideal is the unit ideal.
    """
    coordinates = tuple(coordinates)
    check_generator_names(base.generators + coordinates)
    ring = CoordinateRing(base, coordinates)
    gens = _ambient_elements(ring.ambient, ideal)
    s = _ambient_elements(ring.ambient, section)
    basis = groebner_basis([ring.polynomial(P) for P in gens])
    if basis == [ring.ring.one]:
        raise EmptyVarietyError("the ideal is the unit ideal")
    for i, s_i in enumerate(s):
        if not normal_form(ring.to_ring(s_i.denom), basis):
            raise SectionUndefinedError(
                f"section component for {coordinates[i]} has a denominator in the ideal"
            )
    for P in gens:
        equation = _tangent_equation(base, ring.ambient, P, s)
        residue = normal_form(ring.to_ring(equation.numer), basis)
        if residue:
            check = SectionCheck(False, P, ring.from_ring(residue))
            logger.debug("Section check failed: %s", check.describe())
            return check
    return SectionCheck(True)


class AffineDVariety:
    """
    A rational D-variety: V(ideal) in affine space with coordinates, over base, with
    section s. Construction validates the section.

    Raises:
        InvalidSectionError: If the section fails the shifted tangent equations; the
            error carries the SectionCheck.
    """

    def __init__(
        self,
        base: DiffFieldPresentation,
        coordinates: Sequence[str],
        ideal: Sequence[Element],
        section: Sequence[Element],
    ):
        coordinates = tuple(coordinates)
        if not coordinates:
            raise PreconditionError("a D-variety needs at least one coordinate")
        if len(section) != len(coordinates):
            raise PreconditionError("the section needs one component per coordinate")
        check_generator_names(base.generators + coordinates)
        ambient = function_field(base.generators + coordinates)
        self.base = base
        self.coordinates = coordinates
        self.ideal = _ambient_elements(ambient, ideal)
        self.section = _ambient_elements(ambient, section)
        check = check_section(base, coordinates, self.ideal, self.section)
        if not check.valid:
            raise InvalidSectionError(f"invalid section: {check.describe()}", check)
        self.basis = groebner_basis(
            [self.coordinate_ring.polynomial(P) for P in self.ideal]
        )
        logger.debug(
            "D-variety in %d coordinates, Groebner basis of %d elements",
            len(coordinates),
            len(self.basis),
        )

    @cached_property
    def coordinate_ring(self) -> CoordinateRing:
        return CoordinateRing(self.base, self.coordinates)

    @property
    def ambient(self) -> FracField:
        return self.coordinate_ring.ambient

    @property
    def scalars(self) -> FracField:
        return self.base.field

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    @cached_property
    def ambient_presentation(self) -> DiffFieldPresentation:
        """The derivation d' on QQ(K generators, coordinates): dg as in K, dx_i = s_i."""
        return DiffFieldPresentation(
            self.base.generators + self.coordinates,
            tuple(lift(image, self.ambient) for image in self.base.images) + self.section,
        )

    def reduce(self, p: PolyElement) -> PolyElement:
        return normal_form(p, self.basis)

    def function(self, value: Element) -> "FunctionOnX":
        """
        The class of value in K(X).

        Raises:
            UndefinedFunctionError: If the denominator of value lies in the ideal.
        """
        if isinstance(value, FunctionOnX):
            return value
        value = _ambient_elements(self.ambient, [value])[0]
        ring = self.coordinate_ring
        denominator = self.reduce(ring.to_ring(value.denom))
        if not denominator:
            raise UndefinedFunctionError(
                f"{format_ratfunc(value)} has its denominator in the ideal"
            )
        return FunctionOnX(self, self.reduce(ring.to_ring(value.numer)), denominator)

    def coordinate_function(self, name: str) -> "FunctionOnX":
        if name not in self.coordinates:
            raise PreconditionError(f"unknown coordinate {name}")
        return self.function(self.ambient.gens[len(self.base.generators) + self.coordinates.index(name)])


@dataclass(frozen=True, eq=False)
class FunctionOnX:
    """
    An element of K(X), stored as numerator and denominator in normal form. Two
    functions are equal when num1*den2 - num2*den1 lies in the ideal.
    """

    home: AffineDVariety
    numerator: PolyElement
    denominator: PolyElement

    @property
    def value(self) -> FracElement:
        ring = self.home.coordinate_ring
        return ring.from_ring(self.numerator) / ring.from_ring(self.denominator)

    def _other(self, other) -> "FunctionOnX":
        if isinstance(other, FunctionOnX):
            if other.home is not self.home:
                raise PreconditionError("functions live on different varieties")
            return other
        return self.home.function(other)

    def __eq__(self, other):
        try:
            other = self._other(other)
        except (PreconditionError, TypeError):
            return NotImplemented
        cross = self.numerator * other.denominator - other.numerator * self.denominator
        return not self.home.reduce(cross)

    __hash__ = None

    def __add__(self, other):
        other = self._other(other)
        return self.home.function(self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        return self.home.function(self.value - other.value)

    def __neg__(self):
        return FunctionOnX(self.home, -self.numerator, self.denominator)

    def __mul__(self, other):
        other = self._other(other)
        return self.home.function(self.value * other.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        if not other.numerator:
            raise UndefinedFunctionError("division by the zero function")
        return self.home.function(self.value / other.value)

    def __bool__(self):
        return bool(self.numerator)

    def __str__(self):
        return format_ratfunc(self.value)


@dataclass(frozen=True)
class PointOnX:
    """A K-rational point of X: coords are elements of the base field."""

    home: AffineDVariety
    coords: tuple[FracElement, ...]

    def values(self) -> dict[str, FracElement]:
        return dict(zip(self.home.coordinates, self.coords))

    def __str__(self):
        return "(" + ", ".join(format_ratfunc(c) for c in self.coords) + ")"


def point(X: AffineDVariety, coords: Sequence[Element]) -> PointOnX:
    """
    Builds the point of X with the given coordinates in K.

    Raises:
        NotOnVarietyError: If an ideal generator does not vanish there.
    """
    if len(coords) != X.dimension:
        raise PreconditionError(f"a point of X needs {X.dimension} coordinates")
    values = tuple(
        parse_expr(c, X.scalars) if isinstance(c, str) else coerce(X.scalars, c)
        for c in coords
    )
    alpha = PointOnX(X, values)
    for P in X.ideal:
        if _evaluate(P, alpha, NotOnVarietyError):
            raise NotOnVarietyError(f"{format_ratfunc(P)} does not vanish at {alpha}")
    return alpha


def _evaluate(f: FracElement, alpha: PointOnX, error=UndefinedFunctionError) -> FracElement:
    try:
        return substitute(f, alpha.values(), alpha.home.scalars)
    except ZeroDivisionError as e:
        raise error(f"{format_ratfunc(f)} is undefined at {alpha}") from e


def _as_point(X: AffineDVariety, alpha) -> PointOnX:
    if isinstance(alpha, PointOnX):
        if alpha.home is not X:
            raise PreconditionError("the point belongs to another variety")
        return alpha
    return point(X, alpha)


def shifted_tangent_ideal(X: AffineDVariety) -> list[FracElement]:
    """
    Generators of the ideal of the shifted tangent bundle, in the coordinates x and the
    tangent coordinates u_x: every P together with sum_i (dP/dx_i) u_i + P^d.
    """
    tangent_names = tuple(TANGENT_PREFIX + name for name in X.coordinates)
    names = X.base.generators + X.coordinates + tangent_names
    check_generator_names(names)
    field = function_field(names)
    directions = field.gens[len(X.base.generators) + X.dimension :]
    equations = []
    for P in X.ideal:
        lifted = lift(P, field)
        equations.append(lifted)
        equations.append(_tangent_equation(X.base, field, lifted, directions))
    return equations


def validate_section(X: AffineDVariety) -> SectionCheck:
    return check_section(X.base, X.coordinates, X.ideal, X.section)


def induced_derivation(X: AffineDVariety, f: Element) -> FunctionOnX:
    """
    d'(f) = sum_i (df/dx_i) s_i + f^d, the derivation of K(X) induced by the section.
    """
    f = X.function(f)
    return X.function(derive(X.ambient_presentation, f.value))


def value_at(X: AffineDVariety, f: Element, alpha) -> FracElement:
    """
    The value f(alpha) in K.

    Raises:
        UndefinedFunctionError: If the denominator of f vanishes at alpha.
    """
    alpha = _as_point(X, alpha)
    return _evaluate(X.function(f).value, alpha)


def section_at(X: AffineDVariety, alpha) -> tuple[FracElement, ...]:
    """s(alpha), raising SectionUndefinedError when a component has a pole there."""
    alpha = _as_point(X, alpha)
    return tuple(_evaluate(s, alpha, SectionUndefinedError) for s in X.section)


def is_sharp_point(X: AffineDVariety, alpha) -> bool:
    """
    Whether d(alpha_i) = s_i(alpha) for every coordinate.

    Raises:
        SectionUndefinedError: If the section is undefined at alpha.
    """
    alpha = _as_point(X, alpha)
    values = section_at(X, alpha)
    return all(derive(X.base, c) == v for c, v in zip(alpha.coords, values))


def generic_sharp_point_check(X: AffineDVariety) -> bool:
    """
    Checks that the coordinate functions are a sharp point over K(X):
    d'(x_i) = s_i modulo the ideal for every coordinate.

    Raises:
        PreconditionError: If the section is not valid for X.
    """
    check = validate_section(X)
    if not check.valid:
        raise PreconditionError(f"invalid section: {check.describe()}")
    return all(
        induced_derivation(X, X.coordinate_function(name)) == X.function(s)
        for name, s in zip(X.coordinates, X.section)
    )


def jacobian_at(X: AffineDVariety, alpha) -> list[list[FracElement]]:
    """Rows (dP/dx_1, ..., dP/dx_n)(alpha) for the ideal generators P."""
    alpha = _as_point(X, alpha)
    k = len(X.base.generators)
    coords = X.ambient.gens[k:]
    return [[_evaluate(P.diff(x), alpha) for x in coords] for P in X.ideal]


def tangent_space(X: AffineDVariety, alpha) -> list[tuple[FracElement, ...]]:
    """Basis of the kernel of the Jacobian at alpha, a subspace of K^n."""
    return linear_kernel(jacobian_at(X, alpha), columns=X.dimension, field=X.scalars)


def cotangent_dimension(X: AffineDVariety, alpha) -> int:
    """Dimension of the cotangent space at alpha: n minus the rank of the Jacobian."""
    return X.dimension - matrix_rank(
        jacobian_at(X, alpha), columns=X.dimension, field=X.scalars
    )


@dataclass(frozen=True, eq=False)
class CotangentClass:
    """
    A class in the cotangent space at a point: a row vector in K^n modulo the row space
    of the Jacobian there.
    """

    at: PointOnX
    rep: tuple[FracElement, ...]

    def _jacobian(self):
        return jacobian_at(self.at.home, self.at)

    def _check(self, other: "CotangentClass"):
        if not isinstance(other, CotangentClass) or other.at != self.at:
            raise PreconditionError("cotangent classes at different points")

    def is_zero(self) -> bool:
        rows = self._jacobian()
        field = self.at.home.scalars
        n = len(self.rep)
        return matrix_rank(rows, n, field) == matrix_rank(rows + [list(self.rep)], n, field)

    def __eq__(self, other):
        if not isinstance(other, CotangentClass):
            return NotImplemented
        if other.at != self.at:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __add__(self, other: "CotangentClass") -> "CotangentClass":
        self._check(other)
        return CotangentClass(self.at, tuple(a + b for a, b in zip(self.rep, other.rep)))

    def __sub__(self, other: "CotangentClass") -> "CotangentClass":
        self._check(other)
        return CotangentClass(self.at, tuple(a - b for a, b in zip(self.rep, other.rep)))

    def scale(self, c: Element) -> "CotangentClass":
        if isinstance(c, str):
            c = parse_expr(c, self.at.home.scalars)
        c = coerce(self.at.home.scalars, c)
        return CotangentClass(self.at, tuple(a * c for a in self.rep))

    def __str__(self):
        return "[" + ", ".join(format_ratfunc(a) for a in self.rep) + "]"


def cotangent_class(X: AffineDVariety, alpha, f: Element) -> CotangentClass:
    """
    The differential df at alpha: the gradient of f evaluated at alpha.

    Raises:
        UndefinedFunctionError: If f has a pole at alpha.
    """
    alpha = _as_point(X, alpha)
    value = X.function(f).value
    _evaluate(value, alpha)
    k = len(X.base.generators)
    gradient = tuple(_evaluate(value.diff(x), alpha) for x in X.ambient.gens[k:])
    return CotangentClass(alpha, gradient)


@dataclass(frozen=True)
class CotangentFlow:
    """The operator on the cotangent space at a sharp point; row i is d(s_i) at alpha."""

    at: PointOnX
    coordinate_images: tuple[CotangentClass, ...]


def cotangent_flow(X: AffineDVariety, alpha) -> CotangentFlow:
    """
    Raises:
        NotSharpPointError: If alpha is not a sharp point.
    """
    alpha = _as_point(X, alpha)
    if not is_sharp_point(X, alpha):
        raise NotSharpPointError(f"{alpha} is not a sharp point")
    images = tuple(cotangent_class(X, alpha, s) for s in X.section)
    return CotangentFlow(alpha, images)


def cotangent_flow_apply(X: AffineDVariety, alpha, v: CotangentClass) -> CotangentClass:
    """
    Applies the operator to v = sum_i c_i dx_i: the result is
    sum_i (dc_i) dx_i + c_i d(s_i) at alpha. It sends the class of df to the class of
    d(d'f).

    Raises:
        NotSharpPointError: If alpha is not a sharp point.
    """
    flow = cotangent_flow(X, alpha)
    if v.at != flow.at:
        raise PreconditionError("the class lives at another point")
    result = [derive(X.base, c) for c in v.rep]
    for c, image in zip(v.rep, flow.coordinate_images):
        result = [r + c * e for r, e in zip(result, image.rep)]
    return CotangentClass(flow.at, tuple(result))

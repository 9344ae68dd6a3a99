"""
Differential fields presented as QQ(g1, ..., gk) with a derivation table dgi in the
same field.

The derivation of an arbitrary element is the chain rule over the table, so it is
additive and Leibniz by construction. The constant field is taken to be QQ; the
kernel never tries to detect further constants.

Functions:
    presentation(table): Builds a presentation from generator -> derivative text.
    derive(F, f): The derivation applied to f.
    is_constant(F, f): Whether the derivative of f vanishes.
    q_linear_relations(F, elems): QQ-linear relations among field elements.
    q_relations_mod_constants(F, elems): QQ-relations among elements modulo constants.
    prolong(F, elems, order): Iterated derivatives, row by row.
    extend(F, table): Adjoins fresh generators with given derivatives.
    adjoin_exponential(F, name, a), adjoin_logarithm(F, name, b): Common extensions.
"""

import logging
import re
from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Sequence, Union

from sympy.polys.fields import FracElement, FracField

from ..algebra.expression_parser import DIFFERENTIAL, parse_expr
from ..algebra.linear_algebra import integer_kernel
from ..algebra.rational_functions import (
    Scalar,
    coerce,
    format_ratfunc,
    function_field,
    to_rat,
)
from ..errors import PreconditionError, ZeroElementError

logger = logging.getLogger(__name__)

IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

Element = Union[Scalar, str]


def check_generator_names(names: Sequence[str]) -> None:
    """Raises PreconditionError on duplicate or malformed generator names."""
    if len(set(names)) != len(names):
        raise PreconditionError(f"duplicate generator in {tuple(names)}")
    for name in names:
        if not IDENTIFIER.match(name) or name == DIFFERENTIAL:
            raise PreconditionError(f"{name!r} cannot be used as a generator name")


@dataclass(frozen=True)
class DiffFieldPresentation:
    """
    QQ(generators) with the derivation generators[i] -> images[i].

    Attributes:
        generators (tuple[str, ...]): Generator names in declaration order.
        images (tuple[FracElement, ...]): Derivatives of the generators, in self.field.
    """

    generators: tuple[str, ...]
    images: tuple[FracElement, ...]

    def __post_init__(self):
        if len(self.generators) != len(self.images):
            raise PreconditionError("every generator needs exactly one derivative")
        check_generator_names(self.generators)
        field = self.field
        # images may come from a smaller field; store them in this one
        object.__setattr__(
            self, "images", tuple(coerce(field, image) for image in self.images)
        )

    @property
    def field(self) -> FracField:
        return function_field(self.generators)

    @property
    def table(self) -> dict[str, FracElement]:
        return dict(zip(self.generators, self.images))

    def element(self, value: Element) -> FracElement:
        """
        Turns an expression string or scalar into an element of this field.

        Raises:
            ForeignElementError: If value uses variables that are not generators.
        """
        if isinstance(value, str):
            return parse_expr(value, self.field)
        return coerce(self.field, value)

    def describe(self) -> str:
        return ", ".join(
            f"d{name} = {format_ratfunc(image)}"
            for name, image in zip(self.generators, self.images)
        )


def presentation(table: Mapping[str, Element]) -> DiffFieldPresentation:
    """
    Builds a presentation from an ordered mapping generator -> derivative.

    Args:
        table (Mapping[str, str | Scalar]): Derivatives as expression strings over the
            generators, or as scalars.

    Returns:
        DiffFieldPresentation: The presentation.

    Example:
        >>> F = presentation({"t": "1", "u": "u"})
    """
    generators = tuple(table)
    check_generator_names(generators)
    field = function_field(generators)
    images = tuple(
        parse_expr(value, field) if isinstance(value, str) else coerce(field, value)
        for value in table.values()
    )
    return DiffFieldPresentation(generators, images)


def member(F: DiffFieldPresentation, f: Element) -> FracElement:
    """Returns f as an element of F, raising ForeignElementError otherwise."""
    return F.element(f)


def derive(F: DiffFieldPresentation, f: Element) -> FracElement:
    """
    Applies the derivation of F to f by the chain rule:
    df = sum over generators g of (partial f / partial g) * dg.
    """
    f = member(F, f)
    result = F.field.zero
    for gen, image in zip(F.field.gens, F.images):
        if image:
            result += f.diff(gen) * image
    return result


def is_constant(F: DiffFieldPresentation, f: Element) -> bool:
    """Whether f is a constant of F, i.e. derive(F, f) = 0."""
    return not derive(F, f)


def q_linear_relations(
    F: DiffFieldPresentation, elems: Sequence[Element]
) -> list[tuple[int, ...]]:
    """
    Computes a basis of {q in QQ^n : sum q_i * elems[i] = 0}.

    The elements are written over a common denominator; a rational relation among them
    is a relation among the numerators, i.e. a kernel vector of the matrix whose rows
    are indexed by monomials and whose columns hold the numerators' coefficients.

    Returns:
        list[tuple[int, ...]]: Primitive integer vectors with positive leading entry.
    """
    values = [member(F, e) for e in elems]
    if not values:
        return []
    common = reduce(lambda acc, v: acc.lcm(v.denom), values[1:], values[0].denom)
    numerators = [v.numer * common.exquo(v.denom) for v in values]
    monomials = sorted({monom for p in numerators for monom in p.keys()})
    rows = [[to_rat(p.get(monom, 0)) for p in numerators] for monom in monomials]
    relations = integer_kernel(rows, columns=len(values))
    logger.debug("%d rational relations among %d elements", len(relations), len(values))
    return relations


def q_relations_mod_constants(
    F: DiffFieldPresentation, elems: Sequence[Element]
) -> list[tuple[int, ...]]:
    """
    Basis of {q in QQ^n : sum q_i * elems[i] is a constant}, computed as the rational
    relations among the derivatives. An empty basis certifies that the elements are
    QQ-linearly independent modulo constants.
    """
    return q_linear_relations(F, [derive(F, e) for e in elems])


def prolong(F: DiffFieldPresentation, elems: Sequence[Element], order: int) -> list[FracElement]:
    """
    Lists the derivatives of elems up to the given order, row by row:
    elems, then their first derivatives, and so on.

    Raises:
        PreconditionError: If order is negative.
    """
    if order < 0:
        raise PreconditionError("prolongation order must be nonnegative")
    row = [member(F, e) for e in elems]
    result = list(row)
    for _ in range(order):
        row = [derive(F, e) for e in row]
        result.extend(row)
    return result


def extend(F: DiffFieldPresentation, table: Mapping[str, Element]) -> DiffFieldPresentation:
    """
    Adjoins fresh generators to F. Derivatives in table may use both the old and the new
    generators.

    Raises:
        PreconditionError: If a new name clashes with an existing generator.
    """
    clash = [name for name in table if name in F.generators]
    if clash:
        raise PreconditionError(f"generators {clash} already exist")
    generators = F.generators + tuple(table)
    check_generator_names(generators)
    field = function_field(generators)
    images = tuple(coerce(field, image) for image in F.images) + tuple(
        parse_expr(value, field) if isinstance(value, str) else coerce(field, value)
        for value in table.values()
    )
    return DiffFieldPresentation(generators, images)


def adjoin_exponential(
    F: DiffFieldPresentation, name: str, a: Element
) -> DiffFieldPresentation:
    """Adjoins u = exp(a), i.e. a new generator u with du = u * da."""
    field = function_field(F.generators + (name,))
    u = field.gens[-1]
    return extend(F, {name: u * coerce(field, derive(F, a))})


def adjoin_logarithm(
    F: DiffFieldPresentation, name: str, b: Element
) -> DiffFieldPresentation:
    """
    Adjoins a = log(b), i.e. a new generator a with da = db / b.

    Raises:
        ZeroElementError: If b is zero.
    """
    b = member(F, b)
    if not b:
        raise ZeroElementError("the logarithm of zero is undefined")
    return extend(F, {name: derive(F, b) / b})

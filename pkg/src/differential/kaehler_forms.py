"""
Kaehler differentials of a presented differential field F = QQ(g1, ..., gk).

Omega(F/QQ) is free on dg1, ..., dgk, so a form is its coefficient vector. On top of
the universal derivation d this module provides the Lie derivative D1 (the derivation
of F extended to forms), the pairing with the derivation, ranks and transcendence
degrees, and the extraction of constant-coefficient dependencies among flat forms.

Functions:
    d(F, f), dlog(F, f), d_relative(F, f, constants): Differentials of elements.
    lie_D1(F, omega): The Lie derivative; flat_check(F, omega) tests D1(omega) = 0.
    pair_partial(F, omega): Contraction with the derivation, so that <df> = df/dt.
    rank_forms(F, forms), trdeg(F, elems): Ranks over F.
    constant_dependence(F, flats): Rational dependency among flat forms.
    parse_form(F, text), format_form(omega): Text form "c1*d(g1) + ...".
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy.polys.fields import FracElement

from ..algebra.expression_parser import (
    Differential,
    Integer,
    Neg,
    Node,
    Power,
    Variable,
    parse_ast,
)
from ..algebra.linear_algebra import linear_kernel, matrix_rank
from ..algebra.rational_functions import (
    canonical_parts,
    format_ratfunc,
    rational_value,
    variable_names,
)
from ..errors import (
    DependencyNotConstantError,
    ExpressionSyntaxError,
    HiddenConstantError,
    NonFlatFormError,
    PreconditionError,
    UnknownSymbolError,
    ZeroDivisionInExpression,
    ZeroElementError,
)
from .diff_field import DiffFieldPresentation, Element, derive, is_constant, member

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiffForm:
    """omega = sum_i coeffs[i] * d(home.generators[i])."""

    home: DiffFieldPresentation
    coeffs: tuple[FracElement, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(self.home.generators):
            raise PreconditionError("a form needs one coefficient per generator")

    @classmethod
    def zero(cls, F: DiffFieldPresentation) -> "DiffForm":
        return cls(F, tuple(F.field.zero for _ in F.generators))

    def _check(self, other: "DiffForm"):
        if not isinstance(other, DiffForm) or other.home != self.home:
            raise PreconditionError("forms over different presentations")

    def __add__(self, other: "DiffForm") -> "DiffForm":
        self._check(other)
        return DiffForm(self.home, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        self._check(other)
        return DiffForm(self.home, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DiffForm":
        return DiffForm(self.home, tuple(-a for a in self.coeffs))

    def __mul__(self, c: Element) -> "DiffForm":
        c = member(self.home, c)
        return DiffForm(self.home, tuple(a * c for a in self.coeffs))

    # only reached for ints and Fractions; a FracElement on the left never defers here
    __rmul__ = __mul__

    def __truediv__(self, c: Element) -> "DiffForm":
        c = member(self.home, c)
        if not c:
            raise ZeroElementError("division of a form by zero")
        return DiffForm(self.home, tuple(a / c for a in self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __str__(self):
        return format_form(self)


def format_form(omega: DiffForm) -> str:
    """Prints omega, e.g. "d(t) - (1/u)*d(u)"; the zero form prints as "0"."""
    pieces = []
    for name, c in zip(omega.home.generators, omega.coeffs):
        if not c:
            continue
        numer, _ = canonical_parts(c)
        negative = numer.LC < 0
        text = format_ratfunc(-c if negative else c)
        if text == "1":
            body = f"d({name})"
        elif " " in text or "/" in text:
            body = f"({text})*d({name})"
        else:
            body = f"{text}*d({name})"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces) or "0"


def d(F: DiffFieldPresentation, f: Element) -> DiffForm:
    """The universal derivation: df = sum_i (df/dg_i) dg_i."""
    f = member(F, f)
    return DiffForm(F, tuple(f.diff(g) for g in F.field.gens))


def d_relative(
    F: DiffFieldPresentation, f: Element, constants: Sequence[str]
) -> DiffForm:
    """
    df in Omega(F / QQ(constants)): the components along the named generators are
    dropped, so those generators behave as constants.

    Raises:
        PreconditionError: If a name is not a generator of F.
    """
    unknown = [name for name in constants if name not in F.generators]
    if unknown:
        raise PreconditionError(f"{unknown} are not generators")
    full = d(F, f)
    return DiffForm(
        F,
        tuple(
            F.field.zero if name in constants else c
            for name, c in zip(F.generators, full.coeffs)
        ),
    )


def dlog(F: DiffFieldPresentation, f: Element) -> DiffForm:
    """
    df / f.

    Raises:
        ZeroElementError: If f is zero.
    """
    f = member(F, f)
    if not f:
        raise ZeroElementError("dlog of zero is undefined")
    return d(F, f) / f


def lie_D1(F: DiffFieldPresentation, omega: DiffForm) -> DiffForm:
    """
    D1(sum c_i dg_i) = sum (dc_i) dg_i + c_i d(dg_i), where dc_i is the derivation of F.
    It satisfies D1(df) = d(derive f) and D1(f omega) = (derive f) omega + f D1(omega).
    """
    if omega.home != F:
        raise PreconditionError("the form lives over another presentation")
    result = DiffForm(F, tuple(derive(F, c) for c in omega.coeffs))
    for c, image in zip(omega.coeffs, F.images):
        if c:
            result = result + d(F, image) * c
    return result


def flat_check(F: DiffFieldPresentation, omega: DiffForm) -> bool:
    """Whether omega is a solution of D1 = 0."""
    return not lie_D1(F, omega)


def pair_partial(F: DiffFieldPresentation, omega: DiffForm) -> FracElement:
    """Contraction with the derivation: sum c_i * (derivative of g_i)."""
    if omega.home != F:
        raise PreconditionError("the form lives over another presentation")
    total = F.field.zero
    for c, image in zip(omega.coeffs, F.images):
        total += c * image
    return total


def rank_forms(F: DiffFieldPresentation, forms: Sequence[DiffForm]) -> int:
    """Rank over F of the coefficient matrix of forms."""
    rows = [list(omega.coeffs) for omega in forms]
    return matrix_rank(rows, columns=len(F.generators), field=F.field)


def trdeg(F: DiffFieldPresentation, elems: Sequence[Element]) -> int:
    """
    Transcendence degree over QQ of the field generated by elems, as the rank of their
    differentials.
    """
    return rank_forms(F, [d(F, e) for e in elems])


def _circuit(F: DiffFieldPresentation, forms: Sequence[DiffForm]) -> list[int] | None:
    """Indices of a minimal dependent subfamily, or None when forms are independent."""
    k = len(F.generators)

    def rank(indices):
        return matrix_rank([list(forms[i].coeffs) for i in indices], k, F.field)

    prefix = None
    for j in range(1, len(forms) + 1):
        if rank(range(j)) < j:
            prefix = list(range(j))
            break
    if prefix is None:
        return None
    # the last element of the prefix is in every dependency inside the prefix
    circuit = list(prefix)
    for i in prefix[:-1]:
        trial = [j for j in circuit if j != i]
        if rank(trial) < len(trial):
            circuit = trial
    return circuit


def constant_dependence(
    F: DiffFieldPresentation, flats: Sequence[DiffForm]
) -> tuple[Fraction, ...] | None:
    """
    Finds rational c, not all zero, with sum c_i * flats[i] = 0, or None when the forms
    are linearly independent over F.

    A minimal F-linear dependency among flat forms, normalized so that its first nonzero
    coefficient is 1, has constant coefficients; this is checked, not assumed.

    Raises:
        NonFlatFormError: If an input form is not flat.
        DependencyNotConstantError: If the minimal dependency has a non-constant
            coefficient.
        HiddenConstantError: If a coefficient is a constant of F outside QQ.
    """
    for i, omega in enumerate(flats):
        if not flat_check(F, omega):
            raise NonFlatFormError(f"form {i + 1} ({format_form(omega)}) is not flat")
    circuit = _circuit(F, flats)
    if circuit is None:
        logger.debug("%d flat forms are independent", len(flats))
        return None
    rows = [[flats[i].coeffs[g] for i in circuit] for g in range(len(F.generators))]
    (vector,) = linear_kernel(rows, columns=len(circuit), field=F.field)
    coefficients = [Fraction(0)] * len(flats)
    for i, c in zip(circuit, vector):
        if not is_constant(F, c):
            raise DependencyNotConstantError(
                f"minimal dependency has non-constant coefficient {format_ratfunc(c)}"
            )
        value = rational_value(c)
        if value is None:
            raise HiddenConstantError(
                f"coefficient {format_ratfunc(c)} is a constant outside QQ"
            )
        coefficients[i] = value
    logger.debug("Constant dependency %s among %d flat forms", coefficients, len(flats))
    return tuple(coefficients)


def parse_form(F: DiffFieldPresentation, text: str) -> DiffForm:
    """
    Parses a form such as "d(t) - 1/u*d(u)" or "t*d(t^2)". Products may have at most
    one form factor and forms may only be divided by functions.

    Raises:
        ExpressionSyntaxError: On malformed text or an ill-typed combination.
    """
    value = _evaluate_form(parse_ast(text, allow_differentials=True), F)
    if isinstance(value, DiffForm):
        return value
    if not value:
        return DiffForm.zero(F)
    raise ExpressionSyntaxError("expected a differential form", 0)


def _evaluate_form(node: Node, F: DiffFieldPresentation):
    if isinstance(node, Integer):
        return F.field.ground_new(node.value)
    if isinstance(node, Variable):
        if node.name not in variable_names(F.field):
            raise UnknownSymbolError(f"unknown identifier {node.name!r}", node.position)
        return F.element(node.name)
    if isinstance(node, Differential):
        operand = _evaluate_form(node.operand, F)
        if isinstance(operand, DiffForm):
            raise ExpressionSyntaxError("d of a form is not supported", node.position)
        return d(F, operand)
    if isinstance(node, Neg):
        return -_evaluate_form(node.operand, F)
    if isinstance(node, Power):
        base = _evaluate_form(node.base, F)
        if isinstance(base, DiffForm):
            raise ExpressionSyntaxError("cannot raise a form to a power", node.position)
        return base**node.exponent
    left = _evaluate_form(node.left, F)
    right = _evaluate_form(node.right, F)
    left_form = isinstance(left, DiffForm)
    right_form = isinstance(right, DiffForm)
    if node.op in "+-":
        # the zero function doubles as the zero form
        if left_form and not right_form and not right:
            right, right_form = DiffForm.zero(F), True
        elif right_form and not left_form and not left:
            left, left_form = DiffForm.zero(F), True
        if left_form != right_form:
            raise ExpressionSyntaxError(
                "cannot add a function and a form", node.position
            )
        return left + right if node.op == "+" else left - right
    if node.op == "*":
        if left_form and right_form:
            raise ExpressionSyntaxError("cannot multiply two forms", node.position)
        return right * left if right_form else left * right
    if right_form:
        raise ExpressionSyntaxError("cannot divide by a form", node.position)
    if not right:
        raise ZeroDivisionInExpression("division by the zero function", node.position)
    return left / right

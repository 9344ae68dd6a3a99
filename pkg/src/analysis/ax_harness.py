"""
Executable check of the Ax-Schanuel inequality for the exponential map on concrete
scenarios.

Given a1..an, b1..bn in a presented differential field with da_i = db_i/b_i, the b_i
nonzero and the a_i linearly independent over QQ modulo constants, the transcendence
degree of QQ(a, b) is at least n + 1. The harness evaluates the hypotheses, builds the
logarithmic forms omega_i = da_i - db_i/b_i, checks that they pair to zero with the
derivation and are flat, computes the transcendence degree and, when it is at most n,
follows the chain that leads to a contradiction: a constant dependency among the
omega_i, an integer monomial relation among the b_i and a rational relation among
the a_i.

Functions:
    check_hypotheses(sc): HypothesisReport for a scenario.
    build_forms(sc): The forms omega_i.
    verify_claims(sc): AxVerdict with every intermediate result.
    monomial_relation(sc, c): Integer d with prod b_i^d_i constant.
    log_derivative_hom(F, c, beta): sum c_i (dx_i - dy_i/y_i) on a group point.
    homomorphism_check(n, c), invariance_check(n, c): Symbolic group identities.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from functools import reduce
from typing import Sequence

from sympy.polys.fields import FracElement

from ..algebra.linear_algebra import primitive_integer_vector
from ..algebra.rational_functions import format_ratfunc, from_rat
from ..differential.diff_field import (
    DiffFieldPresentation,
    Element,
    derive,
    is_constant,
    member,
    presentation,
    q_linear_relations,
    q_relations_mod_constants,
)
from ..differential.kaehler_forms import (
    DiffForm,
    constant_dependence,
    d,
    d_relative,
    dlog,
    flat_check,
    pair_partial,
    rank_forms,
    trdeg,
)
from ..errors import (
    KernelAssertionError,
    PreconditionError,
    TheoremViolationError,
    ZeroElementError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AxScenario:
    """Elements a1..an and b1..bn of a presented differential field."""

    field: DiffFieldPresentation
    a: tuple[FracElement, ...]
    b: tuple[FracElement, ...]

    def __post_init__(self):
        if len(self.a) != len(self.b) or not self.a:
            raise PreconditionError("a and b must be nonempty lists of the same length")
        object.__setattr__(self, "a", tuple(member(self.field, e) for e in self.a))
        object.__setattr__(self, "b", tuple(member(self.field, e) for e in self.b))

    @property
    def n(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class HypothesisReport:
    logderiv_ok: tuple[bool, ...]
    b_nonzero: tuple[bool, ...]
    q_relations: list[tuple[int, ...]]

    @property
    def q_indep_mod_C(self) -> bool:
        return not self.q_relations

    @property
    def all_hold(self) -> bool:
        return all(self.logderiv_ok) and all(self.b_nonzero) and self.q_indep_mod_C


@dataclass(frozen=True)
class AxVerdict:
    """
    Attributes:
        dependency: Constant dependency among the forms, scaled to a primitive integer
            vector; only computed when trdeg_value <= n.
        nu: sum c_i a_i for that dependency.
        monomial_relation: Integer d with prod b_i^d_i constant.
        a_relation: d again when sum d_i a_i is constant, the relation that contradicts
            QQ-independence of the a_i modulo constants.
    """

    hypotheses: HypothesisReport
    n: int
    trdeg_value: int
    bound: int
    satisfied: bool
    forms_flat: bool
    pairing_zero: bool
    onto_witness: int | None = None
    forms_rank: int | None = None
    dependency: tuple[int, ...] | None = None
    nu: FracElement | None = None
    monomial_relation: tuple[int, ...] | None = None
    a_relation: tuple[int, ...] | None = None
    forms: list[DiffForm] = dataclass_field(default_factory=list, repr=False)


def scenario(F: DiffFieldPresentation, a: Sequence[Element], b: Sequence[Element]) -> AxScenario:
    return AxScenario(F, tuple(a), tuple(b))


def check_hypotheses(sc: AxScenario) -> HypothesisReport:
    """Evaluates the hypotheses; failures are report content, never errors."""
    F = sc.field
    b_nonzero = tuple(bool(b) for b in sc.b)
    logderiv_ok = tuple(
        bool(b) and derive(F, a) == derive(F, b) / b for a, b in zip(sc.a, sc.b)
    )
    relations = q_relations_mod_constants(F, sc.a)
    report = HypothesisReport(logderiv_ok, b_nonzero, relations)
    logger.debug("Hypotheses: %s", report)
    return report


def build_forms(sc: AxScenario) -> list[DiffForm]:
    """
    omega_i = d(a_i) - db_i/b_i.

    Raises:
        ZeroElementError: If some b_i is zero.
    """
    return [d(sc.field, a) - dlog(sc.field, b) for a, b in zip(sc.a, sc.b)]


def _combination(values: Sequence, coefficients: Sequence, zero):
    """sum c_i * values[i] for rational c; values are all elements or all forms."""
    total = zero
    for c, v in zip(coefficients, values):
        if c:
            total = total + v * (c if isinstance(v, DiffForm) else from_rat(c))
    return total


def monomial_relation(sc: AxScenario, c: Sequence) -> tuple[int, ...] | None:
    """
    Finds integers d, not all zero, with prod b_i^d_i a constant, from the rational
    relations among the db_i/b_i.

    Args:
        sc (AxScenario): The scenario.
        c (Sequence): A constant dependency among the forms omega_i.

    Returns:
        tuple[int, ...] | None: d, or None when the db_i/b_i are independent.

    Raises:
        PreconditionError: If sum c_i omega_i is not zero.
    """
    F = sc.field
    forms = build_forms(sc)
    if len(c) != sc.n or _combination(forms, c, DiffForm.zero(F)):
        raise PreconditionError("the coefficients are not a dependency among the forms")
    relations = q_linear_relations(F, [derive(F, b) / b for b in sc.b])
    if not relations:
        return None
    relation = relations[0]
    monomial = reduce(lambda acc, pair: acc * pair[0] ** pair[1], zip(sc.b, relation), F.field.one)
    if not is_constant(F, monomial):
        raise KernelAssertionError(
            f"monomial {format_ratfunc(monomial)} with exponents {relation} is not constant"
        )
    logger.debug("Monomial relation %s", relation)
    return relation


def verify_claims(sc: AxScenario) -> AxVerdict:
    """
    Runs the whole chain of checks on sc.

    Raises:
        TheoremViolationError: If every hypothesis holds and the transcendence degree is
            at most n.
        KernelAssertionError: If the transcendence degree is at most n, the forms pair
            to zero and some a_i is not constant, yet the forms have rank n or, being
            flat, admit no constant dependency.
    """
    F = sc.field
    n = sc.n
    hypotheses = check_hypotheses(sc)
    trdeg_value = trdeg(F, list(sc.a) + list(sc.b))
    satisfied = trdeg_value >= n + 1
    onto_witness = next((i for i, a in enumerate(sc.a) if derive(F, a)), None)

    forms: list[DiffForm] = []
    forms_flat = pairing_zero = False
    forms_rank = dependency = nu = monomial = a_relation = None
    if all(hypotheses.b_nonzero):
        forms = build_forms(sc)
        pairing_zero = all(not pair_partial(F, omega) for omega in forms)
        forms_flat = all(flat_check(F, omega) for omega in forms)
        if trdeg_value <= n:
            forms_rank = rank_forms(F, forms)
            # the forms lie in the kernel of a nonzero functional on a space of dim <= n
            forced = pairing_zero and onto_witness is not None
            if forced and forms_rank >= n:
                raise KernelAssertionError(
                    f"forms pair to zero but have rank {forms_rank} >= {n} "
                    f"with transcendence degree {trdeg_value}"
                )
            if forms_flat:
                c = constant_dependence(F, forms)
                if c is None and forced:
                    raise KernelAssertionError(
                        f"no constant dependency among {n} flat forms of rank {forms_rank}"
                    )
                if c is not None:
                    dependency = primitive_integer_vector(c)
                    nu = _combination(sc.a, dependency, F.field.zero)
                    monomial = monomial_relation(sc, dependency)
                    if monomial is not None:
                        combined = _combination(sc.a, monomial, F.field.zero)
                        if is_constant(F, combined):
                            a_relation = monomial

    verdict = AxVerdict(
        hypotheses=hypotheses,
        n=n,
        trdeg_value=trdeg_value,
        bound=n + 1,
        satisfied=satisfied,
        forms_flat=forms_flat,
        pairing_zero=pairing_zero,
        onto_witness=onto_witness,
        forms_rank=forms_rank,
        dependency=dependency,
        nu=nu,
        monomial_relation=monomial,
        a_relation=a_relation,
        forms=forms,
    )
    logger.info(
        "Transcendence degree %d against bound %d (%s)",
        trdeg_value,
        n + 1,
        "satisfied" if satisfied else "not satisfied",
    )
    if hypotheses.all_hold and not satisfied:
        raise TheoremViolationError(
            f"hypotheses hold but the transcendence degree is {trdeg_value} <= {n}"
        )
    return verdict


@dataclass(frozen=True)
class GroupPoint:
    """A point of Ga^n x Gm^n: additive part x, multiplicative part y."""

    x: tuple[FracElement, ...]
    y: tuple[FracElement, ...]

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise PreconditionError("both parts of a group point need the same length")
        if not all(self.y):
            raise ZeroElementError("multiplicative coordinates must be nonzero")

    def __mul__(self, other: "GroupPoint") -> "GroupPoint":
        return GroupPoint(
            tuple(a + b for a, b in zip(self.x, other.x)),
            tuple(a * b for a, b in zip(self.y, other.y)),
        )

    def inverse(self) -> "GroupPoint":
        return GroupPoint(tuple(-a for a in self.x), tuple(1 / b for b in self.y))


def group_point(F: DiffFieldPresentation, x: Sequence[Element], y: Sequence[Element]) -> GroupPoint:
    return GroupPoint(tuple(member(F, e) for e in x), tuple(member(F, e) for e in y))


def identity_point(F: DiffFieldPresentation, n: int) -> GroupPoint:
    return GroupPoint(tuple(F.field.zero for _ in range(n)), tuple(F.field.one for _ in range(n)))


def log_derivative_hom(
    F: DiffFieldPresentation, c: Sequence, beta: GroupPoint
) -> FracElement:
    """sum c_i (dx_i - dy_i / y_i); its kernel is a subgroup containing G(QQ)."""
    if len(c) != len(beta.x):
        raise PreconditionError("one coefficient per coordinate is needed")
    total = F.field.zero
    for c_i, x, y in zip(c, beta.x, beta.y):
        total += (derive(F, x) - derive(F, y) / y) * from_rat(c_i)
    return total


def _fresh_points(n: int) -> tuple[DiffFieldPresentation, GroupPoint, GroupPoint]:
    """Two generic group points whose coordinates have independent generic derivatives."""
    table = {}
    for point_name in ("b", "g"):
        for part in ("x", "y"):
            for i in range(1, n + 1):
                name = f"{point_name}{part}{i}"
                table[name] = f"{name}_d"
                table[f"{name}_d"] = "0"
    F = presentation(table)
    points = []
    for point_name in ("b", "g"):
        points.append(
            group_point(
                F,
                [f"{point_name}x{i}" for i in range(1, n + 1)],
                [f"{point_name}y{i}" for i in range(1, n + 1)],
            )
        )
    return F, points[0], points[1]


def homomorphism_check(n: int, c: Sequence) -> bool:
    """
    Checks, over fresh generators, that l(beta * gamma) = l(beta) + l(gamma), that l
    vanishes at the identity and on a constant point of G(QQ).
    """
    F, beta, gamma = _fresh_points(n)
    additive = log_derivative_hom(F, c, beta * gamma) == (
        log_derivative_hom(F, c, beta) + log_derivative_hom(F, c, gamma)
    )
    identity = not log_derivative_hom(F, c, identity_point(F, n))
    constant = group_point(F, list(range(1, n + 1)), list(range(2, n + 2)))
    return additive and identity and not log_derivative_hom(F, c, constant)


def invariance_check(n: int, c: Sequence) -> bool:
    """
    Checks that omega = sum c_i (dx_i - dy_i/y_i) is invariant under the translation
    (x, y) -> (x + p, q y), differentials taken relative to the translator p, q.
    """
    names = [f"{part}{i}" for part in ("x", "y", "p", "q") for i in range(1, n + 1)]
    F = presentation({name: "0" for name in names})
    constants = [f"{part}{i}" for part in ("p", "q") for i in range(1, n + 1)]

    def omega(xs, ys) -> DiffForm:
        total = DiffForm.zero(F)
        for c_i, x, y in zip(c, xs, ys):
            term = d_relative(F, x, constants) - d_relative(F, y, constants) / y
            total = total + term * c_i
        return total

    xs = [F.element(f"x{i}") for i in range(1, n + 1)]
    ys = [F.element(f"y{i}") for i in range(1, n + 1)]
    ps = [F.element(f"p{i}") for i in range(1, n + 1)]
    qs = [F.element(f"q{i}") for i in range(1, n + 1)]
    translated = omega([x + p for x, p in zip(xs, ps)], [q * y for q, y in zip(qs, ys)])
    return translated == omega(xs, ys)

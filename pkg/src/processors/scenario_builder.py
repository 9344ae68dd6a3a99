"""
Turns a validated ScenarioDoc into kernel objects.

Construction errors are re-raised as ScenarioError located at the header of the
section that caused them.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from sympy.polys.fields import FracElement

from ..algebra.rational_functions import function_field, rational_value
from ..analysis.ax_harness import AxScenario, scenario
from ..algebra.expression_parser import parse_expr
from ..differential.d_variety import AffineDVariety
from ..differential.diff_field import DiffFieldPresentation, presentation
from ..errors import KernelError, ScenarioError
from .scenario_parser import ScenarioDoc

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResidueInput:
    """b_i, c_i and nu of a residue section, as elements of QQ(variable)."""

    variable: str
    bs: tuple[FracElement, ...]
    c: tuple[Fraction, ...]
    nu: FracElement


@dataclass(frozen=True)
class ScenarioObjects:
    field: DiffFieldPresentation
    variety: AffineDVariety | None = None
    ax: AxScenario | None = None
    residue: ResidueInput | None = None


def _located(doc: ScenarioDoc, section: str, error: KernelError) -> ScenarioError:
    return ScenarioError(f"[{section}] {error}", doc.line_of(section), 1 if doc.line_of(section) else 0)


def build_field(doc: ScenarioDoc) -> DiffFieldPresentation:
    try:
        return presentation(doc.field.derivations)
    except KernelError as e:
        raise _located(doc, "field", e) from e


def build_variety(doc: ScenarioDoc, F: DiffFieldPresentation) -> AffineDVariety | None:
    """
    Unlike the other builders this raises the kernel error itself. The check command
    turns it into a failed section row; build_objects relocates it as a ScenarioError
    at the [dvariety] header.

    Raises:
        InvalidSectionError: If the section fails the shifted tangent equations.
        KernelError: If the ambient or ideal is otherwise malformed.
    """
    if doc.dvariety is None:
        return None
    part = doc.dvariety
    return AffineDVariety(F, part.ambient, list(part.ideal), list(part.section.values()))


def build_ax(doc: ScenarioDoc, F: DiffFieldPresentation) -> AxScenario | None:
    if doc.ax is None:
        return None
    try:
        return scenario(F, doc.ax.a, doc.ax.b)
    except KernelError as e:
        raise _located(doc, "ax", e) from e


def build_residue(doc: ScenarioDoc) -> ResidueInput | None:
    if doc.residue is None:
        return None
    part = doc.residue
    field = function_field((part.variable,))
    constants = function_field(())
    try:
        return ResidueInput(
            variable=part.variable,
            bs=tuple(parse_expr(b, field) for b in part.b),
            c=tuple(rational_value(parse_expr(c, constants)) for c in part.c),
            nu=parse_expr(part.nu, field),
        )
    except KernelError as e:
        raise _located(doc, "residue", e) from e


def build_objects(doc: ScenarioDoc) -> ScenarioObjects:
    """
    Builds every object the document describes.

    Raises:
        ScenarioError: If a construction check fails, located at its section.
    """
    F = build_field(doc)
    try:
        variety = build_variety(doc, F)
    except KernelError as e:
        raise _located(doc, "dvariety", e) from e
    objects = ScenarioObjects(F, variety, build_ax(doc, F), build_residue(doc))
    logger.debug("Built scenario objects over %s", F.describe())
    return objects

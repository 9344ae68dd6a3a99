"""
Exact linear algebra over QQ and over rational function fields.

Matrices are given as row lists of ints, Fractions or rational functions and handed to
sympy's `DomainMatrix`, which row-reduces over the fraction field without any
floating point.

Functions:
    linear_kernel(rows, columns, field): Normalized basis of the right kernel.
    matrix_rank(rows, columns, field): Rank over the field.
    integer_kernel(rows, columns): Kernel basis as primitive integer vectors.
    primitive_integer_vector(vector): Scales a rational vector to coprime integers.
"""

import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from sympy import QQ
from sympy.polys.fields import FracElement, FracField
from sympy.polys.matrices import DomainMatrix

from ..errors import PreconditionError
from .rational_functions import (
    coerce,
    from_rat,
    function_field,
    rational_value,
)

logger = logging.getLogger(__name__)


def _shape(rows: Sequence[Sequence], columns: int | None) -> tuple[int, int]:
    if columns is None:
        if not rows:
            raise PreconditionError("the column count of an empty matrix must be given")
        columns = len(rows[0])
    if any(len(row) != columns for row in rows):
        raise PreconditionError("matrix rows have different lengths")
    return len(rows), columns


def _field_of(rows: Sequence[Sequence], field: FracField | None) -> FracField:
    if field is not None:
        return field
    for row in rows:
        for entry in row:
            if isinstance(entry, FracElement):
                return entry.field
    return function_field(())


def _domain_matrix(rows, shape, field: FracField) -> DomainMatrix:
    if field.ngens == 0:
        domain = QQ
        elements = [[from_rat(rational_value(coerce(field, e))) for e in row] for row in rows]
    else:
        domain = field.to_domain()
        elements = [[coerce(field, e) for e in row] for row in rows]
    return DomainMatrix(elements, shape, domain)


def _to_field(value, field: FracField) -> FracElement:
    if field.ngens == 0:
        return field.ground_new(value)
    return value


def linear_kernel(
    rows: Sequence[Sequence],
    columns: int | None = None,
    field: FracField | None = None,
) -> list[tuple[FracElement, ...]]:
    """
    Computes a basis of the right kernel {v : M v = 0} over the fraction field.

    Each basis vector is scaled so that its first nonzero entry is 1, and the basis is
    the reduced one read off the row echelon form, so the output is deterministic.

    Args:
        rows (Sequence[Sequence]): The matrix rows (ints, Fractions or rational functions).
        columns (int | None): Column count, required when rows is empty.
        field (FracField | None): The field to work over; inferred from the entries.

    Returns:
        list[tuple[FracElement, ...]]: The basis, empty when M is injective.
    """
    shape = _shape(rows, columns)
    field = _field_of(rows, field)
    m, n = shape
    if n == 0:
        return []
    if m == 0:
        return [
            tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)
        ]
    null = _domain_matrix(rows, shape, field).nullspace().to_list()
    basis = []
    for vector in null:
        entries = [_to_field(e, field) for e in vector]
        pivot = next(e for e in entries if e)
        basis.append(tuple(e / pivot for e in entries))
    logger.debug("Kernel of a %dx%d matrix has dimension %d", m, n, len(basis))
    return basis


def matrix_rank(
    rows: Sequence[Sequence],
    columns: int | None = None,
    field: FracField | None = None,
) -> int:
    """Rank of the matrix over the fraction field."""
    shape = _shape(rows, columns)
    if 0 in shape:
        return 0
    field = _field_of(rows, field)
    return _domain_matrix(rows, shape, field).rank()


def primitive_integer_vector(vector: Sequence[Fraction]) -> tuple[int, ...]:
    """
    Scales a nonzero rational vector to coprime integers with positive first nonzero
    entry, e.g. (1, -1/2) -> (2, -1).
    """
    values = [Fraction(v) for v in vector]
    if not any(values):
        raise PreconditionError("cannot normalize the zero vector")
    common = lcm(*(v.denominator for v in values))
    integers = [int(v * common) for v in values]
    divisor = gcd(*integers)
    integers = [i // divisor for i in integers]
    if next(i for i in integers if i) < 0:
        integers = [-i for i in integers]
    return tuple(integers)


def integer_kernel(
    rows: Sequence[Sequence], columns: int | None = None
) -> list[tuple[int, ...]]:
    """
    Computes a basis of the rational kernel of a rational matrix, each vector scaled to
    a primitive integer vector with positive leading entry.

    Example:
        [[1, 2]] -> [(2, -1)]; [[1/2, 1/3]] -> [(2, -3)].
    """
    field = function_field(())
    basis = linear_kernel(rows, columns, field)
    return [primitive_integer_vector([rational_value(e) for e in v]) for v in basis]


def rational_entries(vector: Sequence[FracElement]) -> tuple[Fraction, ...] | None:
    """Returns the entries as Fractions when all are constants, else None."""
    values = tuple(rational_value(e) for e in vector)
    if any(v is None for v in values):
        return None
    return values


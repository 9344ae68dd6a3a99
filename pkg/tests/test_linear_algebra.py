import random
from fractions import Fraction

import pytest

from src.algebra.expression_parser import parse_expr
from src.algebra.linear_algebra import (
    integer_kernel,
    linear_kernel,
    matrix_rank,
    primitive_integer_vector,
    rational_entries,
)
from src.algebra.rational_functions import function_field
from src.errors import PreconditionError


def _apply(rows, vector):
    return [sum((a * b for a, b in zip(row, vector)), 0 * vector[0]) for row in rows]


def test_kernel_of_single_row():
    basis = linear_kernel([[1, 2]])
    assert len(basis) == 1
    assert rational_entries(basis[0]) == (Fraction(1), Fraction(-1, 2))


def test_identity_is_injective():
    assert linear_kernel([[1, 0], [0, 1]]) == []


def test_kernel_over_function_field(field_t):
    t = parse_expr("t", field_t)
    (vector,) = linear_kernel([[t, t**2]])
    assert vector == (field_t.one, -1 / t)
    assert all(not entry for entry in _apply([[t, t**2]], vector))


def test_empty_matrices():
    field = function_field(("t",))
    basis = linear_kernel([], columns=2, field=field)
    assert basis == [(field.one, field.zero), (field.zero, field.one)]
    assert linear_kernel([[], []]) == []
    with pytest.raises(PreconditionError):
        linear_kernel([])


def test_random_kernels_annihilate(field_tu):
    rng = random.Random(17)
    for _ in range(15):
        rows = [
            [parse_expr(f"{rng.randint(-2, 2)}*t + {rng.randint(-2, 2)}*u", field_tu)
             for _ in range(3)]
            for _ in range(2)
        ]
        for vector in linear_kernel(rows):
            assert next(e for e in vector if e) == field_tu.one
            assert all(not entry for entry in _apply(rows, vector))
        assert matrix_rank(rows) + len(linear_kernel(rows)) == 3


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 2]], [(2, -1)]),
        ([[1, 0], [0, 1]], []),
        ([[Fraction(1, 2), Fraction(1, 3)]], [(2, -3)]),
        ([[1, 1, 1]], [(1, -1, 0), (1, 0, -1)]),
    ],
)
def test_integer_kernel(rows, expected):
    assert integer_kernel(rows) == expected


def test_primitive_integer_vector():
    assert primitive_integer_vector([Fraction(-1, 2), Fraction(1, 3)]) == (3, -2)
    assert primitive_integer_vector([0, 4, -6]) == (0, 2, -3)
    with pytest.raises(PreconditionError):
        primitive_integer_vector([0, 0])


def test_rank():
    assert matrix_rank([[1, 2], [2, 4]]) == 1
    assert matrix_rank([], columns=3) == 0

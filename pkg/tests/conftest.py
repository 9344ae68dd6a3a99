from pathlib import Path

import pytest

from src.algebra.expression_parser import parse_expr
from src.algebra.rational_functions import function_field

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def field_t():
    return function_field(("t",))


@pytest.fixture
def field_tu():
    return function_field(("t", "u"))


@pytest.fixture
def parse():
    """parse(text, field) shortcut for building elements in tests."""

    def _parse(text, field):
        return parse_expr(text, field)

    return _parse


def random_ratfunc(rng, field, max_degree=2, max_coeff=3):
    """A random nonzero rational function with small integer coefficients."""
    gens = field.gens

    def poly():
        total = field.zero
        for _ in range(rng.randint(1, 3)):
            term = field.ground_new(rng.randint(-max_coeff, max_coeff) or 1)
            for g in gens:
                term *= g ** rng.randint(0, max_degree)
            total += term
        return total or field.one

    return poly() / poly()

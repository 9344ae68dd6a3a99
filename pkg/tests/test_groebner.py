import random

from sympy import QQ
from sympy.polys.groebnertools import groebner as reference_groebner
from sympy.polys.orderings import lex
from sympy.polys.rings import ring

from src.algebra.groebner import groebner_basis, ideal_contains, normal_form, spoly
from src.algebra.rational_functions import polynomial_ring


def test_already_a_basis():
    R, y, x = ring("y,x", QQ, lex)
    assert groebner_basis([y - x**2]) == [y - x**2]


def test_coordinate_ideal():
    R, x, y = ring("x,y", QQ, lex)
    assert groebner_basis([x, y]) == [x, y]


def test_unit_ideal():
    R = polynomial_ring(("x", "y"))
    x, y = R.gens
    assert groebner_basis([x * y - 1, x**2]) == [R.one]
    # membership certificate: 1 = y^2*x^2 - (x*y + 1)*(x*y - 1)
    assert y**2 * x**2 - (x * y + 1) * (x * y - 1) == R.one


def test_empty_and_zero_generators():
    R = polynomial_ring(("x",))
    assert groebner_basis([]) == []
    assert groebner_basis([R.zero]) == []


def test_lex_per_call():
    R = polynomial_ring(("x", "y", "z"))
    x, y, z = R.gens
    basis = groebner_basis([-x**2 + y, -x**3 + z], order="lex")
    Rlex, X, Y, Z = ring("x,y,z", QQ, lex)
    assert basis == [X**2 - Y, X * Y - Z, X * Z - Y**2, Y**3 - Z**2]


def test_spoly():
    R, x, y = ring("x,y", QQ, lex)
    assert spoly(x**2 - y, x * y - 1) == -y**2 + x


def test_normal_form_examples():
    R, y, x = ring("y,x", QQ, lex)
    basis = groebner_basis([y - x**2])
    assert normal_form(y**2, basis) == x**4
    assert normal_form(R.zero, basis) == R.zero
    S, x2, y2 = ring("x,y", QQ, lex)
    assert normal_form(x2, [y2]) == x2


def test_matches_reference_implementation():
    rng = random.Random(23)
    R = polynomial_ring(("x", "y", "z"))
    gens = R.gens

    def random_poly():
        p = R.zero
        for _ in range(rng.randint(1, 3)):
            term = R(rng.randint(-3, 3) or 1)
            for g in gens:
                term *= g ** rng.randint(0, 2)
            p += term
        return p

    for _ in range(12):
        F = [random_poly() for _ in range(rng.randint(1, 3))]
        F = [f for f in F if f]
        if not F:
            continue
        assert groebner_basis(F) == reference_groebner(F, R)


def test_membership_against_cofactor_certificates():
    rng = random.Random(29)
    R = polynomial_ring(("x", "y"))
    x, y = R.gens
    gens = [x**2 - y, x * y - 1]
    basis = groebner_basis(gens)
    for _ in range(20):
        cofactors = [
            R(rng.randint(-2, 2)) * x ** rng.randint(0, 2) * y ** rng.randint(0, 2)
            for _ in gens
        ]
        member = sum((c * g for c, g in zip(cofactors, gens)), R.zero)
        assert ideal_contains(member, basis)
        assert not ideal_contains(member + x, basis)

import random
from fractions import Fraction

import pytest

from src.algebra.rational_functions import from_rat
from src.analysis.places_residues import (
    INFINITE_ORDER,
    INFINITY,
    SUBSTITUTION,
    SUM,
    Place,
    order_balance_check,
    dlog_residue_check,
    exact_form,
    log_form,
    ord_place,
    places_of,
    rat_form,
    residue_at,
    residue_at_infinity,
    residue_sum,
)
from src.errors import IdentityFailedError, UnsupportedPlaceError, ZeroElementError


@pytest.fixture
def e(parse, field_t):
    return parse("(t-1)/(t+1)^2", field_t)


def test_orders(parse, field_t, e):
    assert ord_place(e, Place.at(1)) == 1
    assert ord_place(e, Place.at(-1)) == -2
    assert ord_place(e, INFINITY) == 1
    assert ord_place(parse("1/t^3", field_t), Place.at(0)) == -3
    assert ord_place(parse("5", field_t), Place.at(2)) == 0
    assert ord_place(field_t.zero, INFINITY) == INFINITE_ORDER


def test_residue_examples(parse, field_t, e):
    assert residue_at(rat_form(parse("1/t", field_t)), Place.at(0)) == 1
    assert residue_at(log_form(e), Place.at(-1)) == -2
    assert residue_at(rat_form(field_t.one), Place.at(3)) == 0
    assert residue_at(rat_form(parse("1/t", field_t)), INFINITY) == -1


def test_residue_needs_rational_poles(parse, field_t):
    with pytest.raises(UnsupportedPlaceError):
        residue_at(rat_form(parse("1/(t^2+1)", field_t)), Place.at(0))


def test_dlog_residue_examples(parse, field_t, e):
    assert dlog_residue_check(e, Place.at(1))
    assert dlog_residue_check(parse("t", field_t), INFINITY)
    five = parse("5", field_t)
    assert dlog_residue_check(five, Place.at(0))
    assert dlog_residue_check(five, INFINITY)
    with pytest.raises(ZeroElementError):
        dlog_residue_check(field_t.zero, INFINITY)


def test_places_of(parse, field_t, e):
    assert places_of(e) == [Place.at(-1), Place.at(1), INFINITY]
    assert places_of(parse("t^2 - 1", field_t)) == [Place.at(-1), Place.at(1), INFINITY]
    assert places_of(parse("(t-2)/(t-3)", field_t)) == [Place.at(2), Place.at(3)]
    assert places_of(parse("7", field_t)) == []


def random_split_function(rng, field_t):
    t = field_t.gens[0]
    e = field_t.one * rng.choice([1, -2, 3])
    for _ in range(rng.randint(1, 4)):
        root = from_rat(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        e *= (t - root) ** rng.choice([-2, -1, 1, 2, 3])
    return e


@pytest.mark.parametrize("seed", range(4))
def test_log_residues_equal_orders(field_t, seed):
    rng = random.Random(2 + 10 * seed)
    for _ in range(50):
        e = random_split_function(rng, field_t)
        for p in places_of(e) + [Place.at(Fraction(7, 5))]:
            assert residue_at(log_form(e), p) == ord_place(e, p)
            assert dlog_residue_check(e, p)


@pytest.mark.parametrize("seed", range(2))
def test_residue_theorem_on_random_forms(field_t, seed):
    rng = random.Random(8 + 10 * seed)
    for _ in range(50):
        f = random_split_function(rng, field_t) * random_split_function(rng, field_t)
        omega = rat_form(f)
        assert residue_sum(omega) == 0
        assert residue_at_infinity(omega, SUBSTITUTION) == residue_at_infinity(omega, SUM)


def test_residue_is_linear(parse, field_t):
    omega = rat_form(parse("1/t + 3/(t-1)^2 + 2/(t-1)", field_t))
    eta = rat_form(parse("t/(t-1)", field_t))
    for p in (Place.at(0), Place.at(1), INFINITY):
        combined = residue_at(omega.scale(2) + eta.scale(Fraction(-1, 3)), p)
        assert combined == 2 * residue_at(omega, p) - Fraction(1, 3) * residue_at(eta, p)


def test_exact_forms_have_no_residues(parse, field_t):
    nu = parse("(t^3 + 1)/((t-2)^2*t)", field_t)
    for p in (Place.at(0), Place.at(2), INFINITY):
        assert residue_at(exact_form(nu), p) == 0


def test_order_balance_balances(parse, field_t):
    balances = order_balance_check(
        [parse("t", field_t), parse("1/t", field_t)], [1, 1], field_t.zero
    )
    assert [b.place for b in balances] == [Place.at(0), INFINITY]
    assert balances[0].orders == (1, -1)
    assert all(b.ok for b in balances)


def test_order_balance_identity_must_hold(parse, field_t):
    with pytest.raises(IdentityFailedError):
        order_balance_check([parse("t", field_t)], [1], field_t.zero)


def test_order_balance_constant_b_is_vacuous(parse, field_t):
    assert order_balance_check([parse("2", field_t)], [1], parse("0", field_t)) == []


def test_order_balance_with_named_variable(parse, field_tu):
    balances = order_balance_check(
        [parse("t^2", field_tu), parse("t", field_tu)], [1, -2], 0, variable="t"
    )
    assert [b.total for b in balances] == [0, 0]


@pytest.mark.parametrize("p", [Place.at(0), Place.at(Fraction(-3, 2)), INFINITY])
def test_zero_form_has_no_residues(field_t, p):
    assert residue_at(rat_form(field_t.zero), p) == 0
    assert residue_sum(rat_form(field_t.zero)) == 0


@pytest.mark.parametrize("p", [Place.at(0), Place.at(2), INFINITY])
def test_constants_have_no_log_residues(parse, field_t, p):
    five = parse("5", field_t)
    assert residue_at(exact_form(five), p) == 0
    assert residue_at(log_form(five), p) == ord_place(five, p) == 0

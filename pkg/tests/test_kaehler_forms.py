import random
from fractions import Fraction

import pytest

from src.differential.diff_field import adjoin_logarithm, derive, presentation
from src.differential.kaehler_forms import (
    DiffForm,
    constant_dependence,
    d,
    d_relative,
    dlog,
    flat_check,
    format_form,
    lie_D1,
    pair_partial,
    parse_form,
    rank_forms,
    trdeg,
)
from src.errors import (
    ExpressionSyntaxError,
    NonFlatFormError,
    PreconditionError,
    ZeroElementError,
)
from tests.conftest import random_ratfunc


@pytest.fixture
def F():
    return presentation({"t": "1", "u": "u"})


def form(F, *coeffs):
    return DiffForm(F, tuple(F.element(c) for c in coeffs))


def test_d_examples(F):
    assert d(F, "t*u") == form(F, "u", "t")
    assert not d(F, Fraction(7, 3))
    assert d(F, "u/t") == form(F, "-u/t^2", "1/t")


def test_d_relations_on_random_elements(F):
    rng = random.Random(3)
    for _ in range(40):
        f = random_ratfunc(rng, F.field)
        g = random_ratfunc(rng, F.field)
        assert d(F, f + g) == d(F, f) + d(F, g)
        assert d(F, f * g) == d(F, g) * f + d(F, f) * g


def test_dlog_examples(F):
    assert dlog(F, "u") == form(F, "0", "1/u")
    assert dlog(F, "u^2") == dlog(F, "u") * 2
    assert dlog(F, "t*u") == dlog(F, "t") + dlog(F, "u")
    with pytest.raises(ZeroElementError):
        dlog(F, 0)


def test_lie_derivative_examples(F):
    omega = parse_form(F, "d(t) - (1/u)*d(u)")
    assert not lie_D1(F, omega)
    assert not lie_D1(F, d(F, Fraction(2, 3)))
    assert lie_D1(F, parse_form(F, "t*d(t)")) == d(F, "t")


@pytest.mark.parametrize("seed", range(5))
def test_lie_derivative_laws(F, seed):
    rng = random.Random(seed)
    for _ in range(100):
        f = random_ratfunc(rng, F.field, max_degree=1)
        g = random_ratfunc(rng, F.field, max_degree=1)
        omega = d(F, random_ratfunc(rng, F.field, max_degree=1)) * g
        assert lie_D1(F, d(F, f)) == d(F, derive(F, f))
        assert lie_D1(F, omega * f) == omega * derive(F, f) + lie_D1(F, omega) * f


def test_lie_derivative_of_product_expands_both_ways(F):
    rng = random.Random(17)
    for _ in range(100):
        f = random_ratfunc(rng, F.field, max_degree=1)
        g = random_ratfunc(rng, F.field, max_degree=1)
        # D1(d(fg)) expanded through g*df + f*dg
        left = d(F, f) * derive(F, g) + lie_D1(F, d(F, f)) * g
        right = d(F, g) * derive(F, f) + lie_D1(F, d(F, g)) * f
        assert lie_D1(F, d(F, f * g)) == left + right


def test_pairing(F):
    assert pair_partial(F, d(F, "t")) == F.field.one
    assert not pair_partial(F, parse_form(F, "d(t) - 1/u*d(u)"))
    assert not pair_partial(F, DiffForm.zero(F))
    rng = random.Random(23)
    for _ in range(20):
        f = random_ratfunc(rng, F.field)
        g = random_ratfunc(rng, F.field)
        assert pair_partial(F, d(F, f)) == derive(F, f)
        assert pair_partial(F, d(F, f) * g) == pair_partial(F, d(F, f)) * g


def test_rank_forms(F):
    assert rank_forms(F, [d(F, "t"), d(F, "u")]) == 2
    omega = parse_form(F, "d(t) - d(u)/u")
    assert rank_forms(F, [omega, omega * 2]) == 1
    assert rank_forms(F, []) == 0


@pytest.mark.parametrize(
    "elems, expected",
    [(["t", "u"], 2), (["t", "t^2"], 1), (["u", "u^2", "t"], 2), ([], 0), (["3"], 0)],
)
def test_trdeg(F, elems, expected):
    assert trdeg(F, elems) == expected


def test_flat_check(F):
    assert flat_check(F, parse_form(F, "d(t) - (1/u)*d(u)"))
    assert not flat_check(F, parse_form(F, "t*d(t)"))
    assert flat_check(F, DiffForm.zero(F))


@pytest.mark.parametrize("seed", range(5))
def test_logarithmic_forms_are_flat(seed):
    rng = random.Random(29 + seed)
    base = presentation({"t": "1", "u": "u", "v": "t*v"})
    for _ in range(10):
        b = random_ratfunc(rng, base.field, max_degree=1)
        G = adjoin_logarithm(base, "a", b)
        assert flat_check(G, d(G, "a") - dlog(G, b))


def test_constant_dependence(F):
    omega = parse_form(F, "d(t) - (1/u)*d(u)")
    assert constant_dependence(F, [omega, omega * 2]) == (Fraction(1), Fraction(-1, 2))
    assert constant_dependence(F, [omega]) is None
    assert constant_dependence(F, [DiffForm.zero(F)]) == (Fraction(1),)


def flat_basis(G):
    """Forms in G = QQ(t, u, v), du = u, dv = 2tv, independent over G and flat."""
    return [d(G, "t"), dlog(G, "u"), dlog(G, "v") - d(G, "t^2")]


def combination(G, coefficients, forms):
    total = DiffForm.zero(G)
    for c, omega in zip(coefficients, forms):
        total = total + omega * c
    return total


@pytest.mark.parametrize("seed", range(5))
def test_constant_dependence_recovers_planted_relations(seed):
    G = presentation({"t": "1", "u": "u", "v": "2*t*v"})
    basis = flat_basis(G)
    assert all(flat_check(G, omega) for omega in basis)
    rng = random.Random(41 + seed)
    for _ in range(10):
        family = [
            combination(G, [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in basis], basis)
            for _ in range(rng.randint(1, 3))
        ]
        c = [rng.randint(-5, 5) for _ in family]
        c[rng.randrange(len(c))] = rng.choice([-2, -1, 1, 2])
        family.insert(rng.randint(0, len(family)), combination(G, c, family))
        dependency = constant_dependence(G, family)
        assert dependency is not None
        assert all(isinstance(c_i, Fraction) for c_i in dependency)
        assert any(dependency)
        assert not combination(G, dependency, family)


def test_constant_dependence_requires_flat_forms(F):
    with pytest.raises(NonFlatFormError):
        constant_dependence(F, [parse_form(F, "t*d(t)")])


def test_d_relative_drops_constant_directions():
    G = presentation({"x": "0", "p": "0"})
    assert d_relative(G, "x*p", ["p"]) == DiffForm(G, (G.element("p"), G.field.zero))
    with pytest.raises(PreconditionError):
        d_relative(G, "x", ["q"])


@pytest.mark.parametrize(
    "text, expected",
    [
        ("d(t) - (1/u)*d(u)", "d(t) - (1/u)*d(u)"),
        ("t*d(t)", "t*d(t)"),
        ("d(t^2)", "2*t*d(t)"),
        ("0", "0"),
        ("0 + d(t)", "d(t)"),
        ("d(t) - 0", "d(t)"),
        ("(t - t) + t*d(t)", "t*d(t)"),
        ("-d(u)/u", "-(1/u)*d(u)"),
    ],
)
def test_parse_and_format(F, text, expected):
    assert format_form(parse_form(F, text)) == expected


@pytest.mark.parametrize(
    "text",
    ["d(t) + t", "d(t)*d(u)", "t/d(u)", "d(d(t))", "d(t)^2", "t", "d(t"],
)
def test_parse_form_errors(F, text):
    with pytest.raises(ExpressionSyntaxError):
        parse_form(F, text)

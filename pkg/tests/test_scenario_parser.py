from fractions import Fraction

import pytest

from src.differential.diff_field import derive
from src.errors import InvalidSectionError, ScenarioError
from src.processors.scenario_builder import build_field, build_objects, build_variety
from src.processors.scenario_parser import (
    ScenarioDoc,
    load_scenario,
    read_scenario,
    render_scenario,
    split_items,
)

EXP = """
[field]
generators: t u
d t = 1
d u = u

[ax]
a: t
b: u
"""


def test_load_exp_scenario(fixtures_dir):
    doc = read_scenario(fixtures_dir / "exp.scn")
    assert doc.field.generators == ("t", "u")
    assert doc.field.derivations == {"t": "1", "u": "u"}
    assert doc.ax.a == ("t",)
    assert doc.ax.b == ("u",)
    assert doc.dvariety.ambient == ("x",)
    assert doc.dvariety.ideal == ()
    assert doc.dvariety.section == {"x": "x"}
    assert doc.dvariety.sharp == ("u",)
    assert doc.residue.variable == "t"
    assert doc.residue.b == ("t", "1/t")
    assert doc.residue.c == ("1", "1")
    assert doc.residue.nu == "0"


def test_expressions_are_canonicalized():
    doc = load_scenario(
        "[field]\ngenerators: t\nd t = (t+1)^2 - t^2\n[ax]\na: (2*t/2)\nb: (t*t/t)\n"
    )
    assert doc.field.derivations == {"t": "2*t + 1"}
    assert doc.ax.a == ("t",)
    assert doc.ax.b == ("t",)


def test_section_lines_are_recorded():
    doc = load_scenario(EXP)
    assert doc.line_of("field") == 2
    assert doc.line_of("ax") == 7
    assert doc.line_of("residue") == 0


def test_undeclared_symbol(fixtures_dir):
    with pytest.raises(ScenarioError, match="undeclared symbol v") as info:
        read_scenario(fixtures_dir / "undeclared.scn")
    assert info.value.line == 4
    assert info.value.column == 7


@pytest.mark.parametrize("text", ["", "\n\n", "# only a comment\n"])
def test_empty_scenario(text):
    with pytest.raises(ScenarioError, match="empty"):
        load_scenario(text)


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("[ax]\na: t\nb: u\n", 1, "missing [field]"),
        ("[field]\ngenerators: t\nd t = 1\n[field]\n", 4, "duplicate section"),
        ("[field]\ngenerators: t\nd t = 1\n[extra]\n", 4, "unknown section"),
        ("generators: t\n", 1, "before the first section"),
        ("[field]\ngenerators: t\ncolour: red\n", 3, "unknown key"),
        ("[field]\ngenerators: t u\nd t = 1\n", 1, "no derivation given for u"),
        ("[field]\ngenerators: t\nd t = 1\n[ax]\na: t\nb: (t\n", 6, "unbalanced"),
        ("[field]\ngenerators: t\nd t = 1 +\n", 3, "unexpected end of input"),
        ("[field]\ngenerators: t\nd t = 1\n[ax]\na: t t\nb: t\n", 4, "same length"),
    ],
)
def test_errors_are_located(text, line, fragment):
    with pytest.raises(ScenarioError) as info:
        load_scenario(text)
    assert info.value.line == line
    assert fragment in info.value.message


def test_dvariety_coordinates_must_be_fresh():
    text = "[field]\ngenerators: t\nd t = 1\n[dvariety]\nambient: t\nsection t = 1\n"
    with pytest.raises(ScenarioError) as info:
        load_scenario(text)
    assert info.value.line == 5


def test_residue_variable_must_be_a_generator():
    text = "[field]\ngenerators: t\nd t = 1\n[residue]\nvariable: s\nb: s\nc: 1\nnu: s\n"
    with pytest.raises(ScenarioError, match="not a generator") as info:
        load_scenario(text)
    assert info.value.line == 5


def test_split_items_respects_parentheses():
    items = split_items("t (1/t) ((t - 1)*(t + 1))", 3, 4)
    assert [item.text for item in items] == ["t", "(1/t)", "((t - 1)*(t + 1))"]
    assert [item.column for item in items] == [4, 6, 12]


@pytest.mark.parametrize(
    "name", ["exp.scn", "two_exp.scn", "fail_hypothesis.scn", "irrational.scn", "field_only.scn"]
)
def test_render_round_trip(fixtures_dir, name):
    doc = read_scenario(fixtures_dir / name)
    text = render_scenario(doc)
    again = load_scenario(text)
    assert again.model_dump() == doc.model_dump()
    assert render_scenario(again) == text


def test_rendered_lists_parenthesize_compound_items(fixtures_dir):
    text = render_scenario(read_scenario(fixtures_dir / "irrational.scn"))
    assert "b: (t^2 + 1)" in text
    assert "variable: t" in text


def test_build_exp_objects(fixtures_dir):
    objects = build_objects(read_scenario(fixtures_dir / "exp.scn"))
    F = objects.field
    assert F.generators == ("t", "u")
    assert derive(F, "u") == F.element("u")
    assert objects.ax.n == 1
    assert objects.variety.coordinates == ("x",)
    assert objects.residue.c == (Fraction(1), Fraction(1))
    assert objects.residue.variable == "t"


def test_build_field_only(fixtures_dir):
    objects = build_objects(read_scenario(fixtures_dir / "field_only.scn"))
    assert objects.field.generators == ("t",)
    assert objects.variety is None
    assert objects.ax is None
    assert objects.residue is None


def test_build_reports_invalid_section_location(fixtures_dir):
    doc = read_scenario(fixtures_dir / "invalid_section.scn")
    with pytest.raises(ScenarioError, match=r"\[dvariety\] invalid section") as info:
        build_objects(doc)
    assert info.value.line == 5


def test_documents_built_in_code_have_no_lines():
    doc = ScenarioDoc.model_validate(
        {"field": {"generators": ("t",), "derivations": {"t": "1"}}}
    )
    assert doc.line_of("field") == 0
    assert render_scenario(doc) == "[field]\ngenerators: t\nd t = 1\n"


def test_build_variety_raises_the_kernel_error(fixtures_dir):
    doc = read_scenario(fixtures_dir / "invalid_section.scn")
    with pytest.raises(InvalidSectionError):
        build_variety(doc, build_field(doc))

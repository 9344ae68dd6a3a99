"""
Reads and writes scenario files.

A scenario is a UTF-8 text file made of sections. '#' starts a comment, blank lines
are ignored, lists are whitespace separated and compound expressions in lists must be
parenthesized:

    [field]
    generators: t u
    d t = 1
    d u = u

    [ax]
    a: t
    b: u

    [dvariety]
    ambient: x
    ideal:
    section x = x
    sharp: u

    [residue]
    variable: t
    b: t (1/t)
    c: 1 1
    nu: 0

Every expression is parsed over the generators it may use and stored in canonical
form, so load -> render -> load is the identity. Errors carry the line and column of
the offending text.

Functions:
    load_scenario(text): Parses and validates a scenario into a ScenarioDoc.
    read_scenario(path): load_scenario on a file.
    render_scenario(doc): Canonical text of a ScenarioDoc.
"""

import logging
import re
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, PrivateAttr, ValidationError, model_validator

from ..algebra.expression_parser import parse_expr
from ..algebra.rational_functions import format_ratfunc, function_field
from ..differential.diff_field import IDENTIFIER, check_generator_names
from ..errors import (
    ExpressionError,
    KernelError,
    ScenarioError,
    UnknownSymbolError,
)

logger = logging.getLogger(__name__)

SECTIONS = ("field", "ax", "dvariety", "residue")
LIST_KEYS = {
    "field": ("generators",),
    "ax": ("a", "b"),
    "dvariety": ("ambient", "ideal", "sharp"),
    "residue": ("b", "c"),
}
SCALAR_KEYS = {"residue": ("variable", "nu")}
ASSIGNMENT_KEYWORDS = {"field": "d", "dvariety": "section"}

HEADER = re.compile(r"\[\s*(\w+)\s*\]\Z")
KEY_LINE = re.compile(r"([A-Za-z]+)\s*:(.*)\Z")
ASSIGNMENT_LINE = re.compile(r"(\w+)\s+([A-Za-z][A-Za-z0-9_]*)\s*=(.*)\Z")
NAME_AT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class FieldSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    generators: tuple[str, ...] = ()
    derivations: dict[str, str] = {}

    @model_validator(mode="after")
    def check_table(self):
        check_generator_names(self.generators)
        missing = [g for g in self.generators if g not in self.derivations]
        if missing:
            raise ValueError(f"no derivation given for {', '.join(missing)}")
        extra = [g for g in self.derivations if g not in self.generators]
        if extra:
            raise ValueError(f"derivation given for undeclared generator {', '.join(extra)}")
        return self


class AxSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: tuple[str, ...]
    b: tuple[str, ...]

    @model_validator(mode="after")
    def check_lengths(self):
        if not self.a or len(self.a) != len(self.b):
            raise ValueError("a and b must be nonempty lists of the same length")
        return self


class DVarietySection(BaseModel):
    model_config = ConfigDict(frozen=True)

    ambient: tuple[str, ...]
    ideal: tuple[str, ...] = ()
    section: dict[str, str]
    sharp: Optional[tuple[str, ...]] = None

    @model_validator(mode="after")
    def check_coordinates(self):
        if not self.ambient:
            raise ValueError("ambient needs at least one coordinate")
        if tuple(self.section) != self.ambient:
            raise ValueError("give one section line per ambient coordinate, in order")
        if self.sharp is not None and len(self.sharp) != len(self.ambient):
            raise ValueError("sharp needs one value per ambient coordinate")
        return self


class ResidueSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    variable: str
    b: tuple[str, ...] = ()
    c: tuple[str, ...] = ()
    nu: str = "0"

    @model_validator(mode="after")
    def check_lengths(self):
        if len(self.b) != len(self.c):
            raise ValueError("b and c must have the same length")
        return self


class ScenarioDoc(BaseModel):
    """A validated scenario; every expression is stored in canonical form."""

    model_config = ConfigDict(frozen=True)

    field: FieldSection
    ax: Optional[AxSection] = None
    dvariety: Optional[DVarietySection] = None
    residue: Optional[ResidueSection] = None

    _lines: dict[str, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def check_names(self):
        generators = self.field.generators
        if self.dvariety is not None:
            check_generator_names(generators + self.dvariety.ambient)
        if self.residue is not None and self.residue.variable not in generators:
            raise ValueError(f"residue variable {self.residue.variable} is not a generator")
        return self

    def line_of(self, section: str) -> int:
        """Line of the section header, 0 when the document was not read from text."""
        return self._lines.get(section, 0)


@dataclass(frozen=True)
class Located:
    text: str
    line: int
    column: int


@dataclass
class RawSection:
    name: str
    line: int
    lists: dict[str, tuple[Located, list[Located]]] = dataclass_field(default_factory=dict)
    scalars: dict[str, Located] = dataclass_field(default_factory=dict)
    assignments: dict[str, tuple[Located, Located]] = dataclass_field(default_factory=dict)


def split_items(text: str, line: int, column: int) -> list[Located]:
    """
    Splits a list value at whitespace outside parentheses; column is the 1-based column
    of text[0].
    """
    items = []
    depth = 0
    start = None
    for i, char in enumerate(text + " "):
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                raise ScenarioError("unbalanced ')'", line, column + i)
        if char.isspace() and depth == 0:
            if start is not None:
                items.append(Located(text[start:i], line, column + start))
                start = None
        elif start is None:
            start = i
    if depth:
        raise ScenarioError("unbalanced '('", line, column + len(text))
    return items


def _strip_comment(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def _read_sections(text: str) -> dict[str, RawSection]:
    sections: dict[str, RawSection] = {}
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        content = _strip_comment(raw)
        if not content.strip():
            continue
        indent = len(content) - len(content.lstrip())
        body = content.strip()
        column = indent + 1
        header = HEADER.match(body)
        if header:
            name = header.group(1)
            if name not in SECTIONS:
                raise ScenarioError(f"unknown section [{name}]", number, column)
            if name in sections:
                raise ScenarioError(f"duplicate section [{name}]", number, column)
            current = sections[name] = RawSection(name, number)
            continue
        if current is None:
            raise ScenarioError("content before the first section", number, column)
        _read_entry(current, body, number, column)
    return sections


def _read_entry(section: RawSection, body: str, line: int, column: int) -> None:
    assignment = ASSIGNMENT_LINE.match(body)
    if assignment and ASSIGNMENT_KEYWORDS.get(section.name) == assignment.group(1):
        name = Located(assignment.group(2), line, column + assignment.start(2))
        if name.text in section.assignments:
            raise ScenarioError(f"{name.text} is assigned twice", line, name.column)
        value = assignment.group(3)
        offset = assignment.start(3) + len(value) - len(value.lstrip())
        section.assignments[name.text] = (name, Located(value.strip(), line, column + offset))
        return
    entry = KEY_LINE.match(body)
    if not entry:
        raise ScenarioError(f"cannot read line in [{section.name}]", line, column)
    key = entry.group(1)
    value = entry.group(2)
    value_column = column + entry.start(2)
    key_at = Located(key, line, column)
    if key in section.lists or key in section.scalars:
        raise ScenarioError(f"duplicate key {key}", line, column)
    if key in LIST_KEYS.get(section.name, ()):
        section.lists[key] = (key_at, split_items(value, line, value_column))
    elif key in SCALAR_KEYS.get(section.name, ()):
        offset = len(value) - len(value.lstrip())
        section.scalars[key] = Located(value.strip(), line, value_column + offset)
    else:
        raise ScenarioError(f"unknown key {key} in [{section.name}]", line, column)


def _canonical(item: Located, names: tuple[str, ...]) -> str:
    """Parses item over names and returns its canonical text."""
    try:
        return format_ratfunc(parse_expr(item.text, function_field(names)))
    except UnknownSymbolError as e:
        match = NAME_AT.match(item.text, e.position)
        symbol = match.group(0) if match else item.text
        raise ScenarioError(f"undeclared symbol {symbol}", item.line, item.column + e.position) from e
    except ExpressionError as e:
        raise ScenarioError(e.message, item.line, item.column + e.position) from e


def _names(items: list[Located]) -> tuple[str, ...]:
    for item in items:
        if not IDENTIFIER.match(item.text):
            raise ScenarioError(f"{item.text!r} is not a valid name", item.line, item.column)
    return tuple(item.text for item in items)


def _validated(model, payload: dict, line: int):
    try:
        return model.model_validate(payload)
    except ValidationError as e:
        message = e.errors()[0]["msg"].removeprefix("Value error, ")
        raise ScenarioError(message, line, 1) from e


def _list(section: RawSection, key: str) -> list[Located]:
    return section.lists.get(key, (None, []))[1]


def _load_field(raw: RawSection) -> FieldSection:
    generators = _names(_list(raw, "generators"))
    derivations = {name: value.text for name, (_, value) in raw.assignments.items()}
    _validated(FieldSection, {"generators": generators, "derivations": derivations}, raw.line)
    canonical = {g: _canonical(raw.assignments[g][1], generators) for g in generators}
    return FieldSection(generators=generators, derivations=canonical)


def _load_ax(raw: RawSection, generators: tuple[str, ...]) -> AxSection:
    a = tuple(_canonical(item, generators) for item in _list(raw, "a"))
    b = tuple(_canonical(item, generators) for item in _list(raw, "b"))
    return _validated(AxSection, {"a": a, "b": b}, raw.line)


def _load_dvariety(raw: RawSection, generators: tuple[str, ...]) -> DVarietySection:
    ambient_key, ambient_items = raw.lists.get("ambient", (None, []))
    ambient = _names(ambient_items)
    try:
        check_generator_names(generators + ambient)
    except KernelError as e:
        location = ambient_key or Located("", raw.line, 1)
        raise ScenarioError(str(e), location.line, location.column) from e
    names = generators + ambient
    for name, (name_at, _) in raw.assignments.items():
        if name not in ambient:
            raise ScenarioError(f"{name} is not an ambient coordinate", name_at.line, name_at.column)
    payload = {
        "ambient": ambient,
        "ideal": tuple(_canonical(item, names) for item in _list(raw, "ideal")),
        "section": {
            name: _canonical(raw.assignments[name][1], names)
            for name in ambient
            if name in raw.assignments
        },
    }
    if "sharp" in raw.lists:
        payload["sharp"] = tuple(_canonical(item, generators) for item in _list(raw, "sharp"))
    return _validated(DVarietySection, payload, raw.line)


def _load_residue(raw: RawSection, generators: tuple[str, ...]) -> ResidueSection:
    variable_at = raw.scalars.get("variable")
    if variable_at is not None:
        variable = variable_at.text
        if variable not in generators:
            raise ScenarioError(
                f"residue variable {variable} is not a generator",
                variable_at.line,
                variable_at.column,
            )
    elif generators:
        variable = generators[0]
    else:
        raise ScenarioError("[residue] needs a field with at least one generator", raw.line, 1)
    nu_at = raw.scalars.get("nu", Located("0", raw.line, 1))
    payload = {
        "variable": variable,
        "b": tuple(_canonical(item, (variable,)) for item in _list(raw, "b")),
        "c": tuple(_canonical(item, ()) for item in _list(raw, "c")),
        "nu": _canonical(nu_at, (variable,)),
    }
    return _validated(ResidueSection, payload, raw.line)


def load_scenario(text: str) -> ScenarioDoc:
    """
    Parses and validates a scenario.

    Args:
        text (str): The scenario file contents.

    Returns:
        ScenarioDoc: The document with canonical expressions.

    Raises:
        ScenarioError: On any syntax, naming or expression error, with its location.
    """
    sections = _read_sections(text)
    if not sections:
        raise ScenarioError("the scenario is empty", 1, 1)
    if "field" not in sections:
        first = min(section.line for section in sections.values())
        raise ScenarioError("missing [field] section", first, 1)
    field = _load_field(sections["field"])
    generators = field.generators
    loaders = {"ax": _load_ax, "dvariety": _load_dvariety, "residue": _load_residue}
    parts = {
        name: loader(sections[name], generators)
        for name, loader in loaders.items()
        if name in sections
    }
    doc = _validated(ScenarioDoc, {"field": field, **parts}, sections["field"].line)
    doc._lines.update({name: section.line for name, section in sections.items()})
    logger.debug("Loaded scenario with sections %s", sorted(sections))
    return doc


def read_scenario(path: str | Path) -> ScenarioDoc:
    """
    Raises:
        OSError: If the file cannot be read.
        ScenarioError: If its contents are invalid.
    """
    logger.info("Loading scenario %s", path)
    return load_scenario(Path(path).read_text(encoding="utf-8"))


def _render_list(values) -> str:
    return " ".join(f"({v})" if " " in v else v for v in values)


def _key(key: str, values) -> str:
    rendered = _render_list(values)
    return f"{key}: {rendered}" if rendered else f"{key}:"


def render_scenario(doc: ScenarioDoc) -> str:
    """Canonical text of doc; load_scenario(render_scenario(doc)) == doc."""
    lines = ["[field]", _key("generators", doc.field.generators)]
    lines += [f"d {name} = {value}" for name, value in doc.field.derivations.items()]
    if doc.ax is not None:
        lines += ["", "[ax]", _key("a", doc.ax.a), _key("b", doc.ax.b)]
    if doc.dvariety is not None:
        variety = doc.dvariety
        lines += ["", "[dvariety]", _key("ambient", variety.ambient), _key("ideal", variety.ideal)]
        lines += [f"section {name} = {value}" for name, value in variety.section.items()]
        if variety.sharp is not None:
            lines.append(_key("sharp", variety.sharp))
    if doc.residue is not None:
        residue = doc.residue
        lines += [
            "",
            "[residue]",
            f"variable: {residue.variable}",
            _key("b", residue.b),
            _key("c", residue.c),
            f"nu: {residue.nu}",
        ]
    return "\n".join(lines) + "\n"

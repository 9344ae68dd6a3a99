"""
Recursive-descent parser for the expression grammar used by scenarios and the CLI.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ['-'] atom ['^' integer]
    atom   := integer | identifier | '(' expr ')' | 'd' '(' expr ')'

The last atom form (a differential) is only accepted when the parser is created with
allow_differentials=True; forms are evaluated by the kaehler_forms module.

Functions:
    tokenize(text): Splits text into positioned tokens.
    parse_ast(text, allow_differentials): Parses text into an expression tree.
    evaluate(node, field): Evaluates a differential-free tree in a rational function field.
    parse_expr(text, variables): Parses text straight into a canonical rational function.
"""

import logging
import re
from dataclasses import dataclass
from typing import Sequence, Union

from sympy.polys.fields import FracElement, FracField

from ..errors import (
    ExpressionSyntaxError,
    UnknownSymbolError,
    ZeroDivisionInExpression,
)
from .rational_functions import function_field, generator, variable_names

logger = logging.getLogger(__name__)

DIFFERENTIAL = "d"

TOKEN_PATTERN = re.compile(
    r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


@dataclass(frozen=True)
class Integer:
    value: int
    position: int


@dataclass(frozen=True)
class Variable:
    name: str
    position: int


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    position: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    position: int


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int
    position: int


@dataclass(frozen=True)
class Differential:
    operand: "Node"
    position: int


Node = Union[Integer, Variable, Neg, BinOp, Power, Differential]


def tokenize(text: str) -> list[Token]:
    """
    Splits text into number, name and operator tokens, ending with an "end" token.

    Raises:
        ExpressionSyntaxError: On a character outside the grammar.
    """
    tokens = []
    position = 0
    stripped_end = len(text.rstrip())
    while position < stripped_end:
        match = TOKEN_PATTERN.match(text, position)
        if match is None:
            bad = position + len(text[position:]) - len(text[position:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    """Parses one expression; keeps the token cursor between grammar rules."""

    def __init__(self, text: str, allow_differentials: bool = False):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.allow_differentials = allow_differentials

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind == "end":
            raise ExpressionSyntaxError(
                f"expected {text!r}, found {self._describe(self.current)}",
                self.current.position,
            )
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(
                f"unexpected {self._describe(self.current)}", self.current.position
            )
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            token = self.advance()
            node = BinOp(token.text, node, self.term(), token.position)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.current.kind == "op" and self.current.text in "*/":
            token = self.advance()
            node = BinOp(token.text, node, self.factor(), token.position)
        return node

    def factor(self) -> Node:
        if self.current.kind == "op" and self.current.text == "-":
            token = self.advance()
            return Neg(self.powered(), token.position)
        return self.powered()

    def powered(self) -> Node:
        node = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            token = self.advance()
            if self.current.kind != "number":
                raise ExpressionSyntaxError(
                    "exponent must be a nonnegative integer", self.current.position
                )
            node = Power(node, int(self.advance().text), token.position)
        return node

    def atom(self) -> Node:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Integer(int(token.text), token.position)
        if token.kind == "name":
            self.advance()
            if (
                self.allow_differentials
                and token.text == DIFFERENTIAL
                and self.current.text == "("
            ):
                self.advance()
                operand = self.expr()
                self.expect(")")
                return Differential(operand, token.position)
            return Variable(token.text, token.position)
        if token.kind == "op" and token.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ExpressionSyntaxError(f"unexpected {self._describe(token)}", token.position)

    @staticmethod
    def _describe(token: Token) -> str:
        return "end of input" if token.kind == "end" else repr(token.text)


def parse_ast(text: str, allow_differentials: bool = False) -> Node:
    """
    Parses text into an expression tree.

    Args:
        text (str): The expression.
        allow_differentials (bool): Whether d(<expr>) atoms are accepted.

    Returns:
        Node: The root of the tree.

    Raises:
        ExpressionSyntaxError: If text does not follow the grammar.
    """
    return Parser(text, allow_differentials).parse()


def evaluate(node: Node, field: FracField) -> FracElement:
    """
    Evaluates a differential-free expression tree in field.

    Raises:
        UnknownSymbolError: If a variable is not a generator of field.
        ZeroDivisionInExpression: If a divisor evaluates to the zero function.
        ExpressionSyntaxError: If the tree contains a differential.
    """
    if isinstance(node, Integer):
        return field.ground_new(node.value)
    if isinstance(node, Variable):
        if node.name not in variable_names(field):
            raise UnknownSymbolError(f"unknown identifier {node.name!r}", node.position)
        return generator(field, node.name)
    if isinstance(node, Neg):
        return -evaluate(node.operand, field)
    if isinstance(node, Power):
        return evaluate(node.base, field) ** node.exponent
    if isinstance(node, Differential):
        raise ExpressionSyntaxError("differentials are not allowed here", node.position)
    left = evaluate(node.left, field)
    right = evaluate(node.right, field)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if not right:
        raise ZeroDivisionInExpression("division by the zero function", node.position)
    return left / right


def parse_expr(text: str, variables: Sequence[str] | FracField) -> FracElement:
    """
    Parses text into a canonical rational function over the given variables.

    Args:
        text (str): The expression, e.g. "(t^2-1)/(t-1)".
        variables (Sequence[str] | FracField): Declared variables, or a field.

    Returns:
        FracElement: The reduced rational function.

    Example:
        >>> format_ratfunc(parse_expr("(t^2-1)/(t-1)", ["t"]))
        't + 1'
    """
    field = variables if isinstance(variables, FracField) else function_field(tuple(variables))
    value = evaluate(parse_ast(text), field)
    logger.debug("Parsed %r over %s", text, variable_names(field))
    return value

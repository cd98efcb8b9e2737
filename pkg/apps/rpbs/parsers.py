"""Parsers for operator expressions and batch run configuration files."""

from __future__ import annotations

import json
from dataclasses import dataclass

import sympy
from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, UnexpectedToken
from pydantic import ValidationError

from apps.rpbs.exceptions import ArityError, ConfigError, ExprSyntaxError, LexicalError
from apps.rpbs.models import Generator, RunConfig
from apps.rpbs.services.algebra import (
    GENERATOR_ELEMENTS,
    P,
    FAElement,
    NamedOperator,
    anticommutator,
    commutator,
    named_operator,
)

EXPRESSION_GRAMMAR = r"""
    relation: expr ("=" expr)?

    ?expr: term
         | expr "+" term          -> add
         | expr "-" term          -> sub

    ?term: "-" term               -> neg
         | product

    ?product: power
            | product "*" power   -> mul
            | product power       -> mul
            | product SLASH divisor -> div

    ?power: atom
          | atom "^" INT          -> pow

    ?atom: INT                    -> number
         | SYMBOL_P               -> symbol
         | GENERATOR              -> generator
         | NAMED                  -> named
         | "(" expr ")"           -> group
         | LSQB operands "]"      -> commutator
         | LBRACE operands "}"    -> anticommutator

    operands: expr ("," expr)*

    divisor: INT | SYMBOL_P

    GENERATOR: /[bf][+-]/
    NAMED: /[RQ][+-]/ | "Nb" | "Nf" | "Ns" | "T"
    SYMBOL_P: "p"
    SLASH: "/"
    LSQB: "["
    LBRACE: "{"

    %import common.INT
    %import common.WS
    %ignore WS
"""

_PARSER = Lark(EXPRESSION_GRAMMAR, start=["expr", "relation"], parser="lalr", propagate_positions=True)


# AST nodes. Every node is immutable and compares structurally.


@dataclass(frozen=True)
class Number:
    value: int


@dataclass(frozen=True)
class Symbol:
    """The order p."""


@dataclass(frozen=True)
class GeneratorAtom:
    generator: Generator


@dataclass(frozen=True)
class NamedAtom:
    name: NamedOperator


@dataclass(frozen=True)
class Sum:
    left: ExprAST
    right: ExprAST


@dataclass(frozen=True)
class Difference:
    left: ExprAST
    right: ExprAST


@dataclass(frozen=True)
class Negation:
    operand: ExprAST


@dataclass(frozen=True)
class Product:
    left: ExprAST
    right: ExprAST


@dataclass(frozen=True)
class Quotient:
    """Division by a nonzero literal or by p."""

    left: ExprAST
    divisor: Number | Symbol


@dataclass(frozen=True)
class Power:
    base: ExprAST
    exponent: int


@dataclass(frozen=True)
class Commutator:
    left: ExprAST
    right: ExprAST


@dataclass(frozen=True)
class Anticommutator:
    left: ExprAST
    right: ExprAST


@dataclass(frozen=True)
class Group:
    inner: ExprAST


ExprAST = (
    Number | Symbol | GeneratorAtom | NamedAtom | Sum | Difference | Negation | Product | Quotient | Power | Commutator | Anticommutator | Group
)


def _byte_offset(text: str, position: int) -> int:
    return len(text[:position].encode("utf-8"))


def _run_parser(text: str, start: str) -> Tree[Token]:
    try:
        return _PARSER.parse(text, start=start)
    except UnexpectedCharacters as e:
        msg = f"Unknown token {text[e.pos_in_stream]!r}"
        raise LexicalError(msg, _byte_offset(text, e.pos_in_stream)) from e
    except UnexpectedToken as e:
        expected = ", ".join(sorted(e.expected))
        if e.token.type == "$END":
            msg = f"Unexpected end of input, expected one of: {expected}"
            raise ExprSyntaxError(msg, _byte_offset(text, len(text))) from e
        msg = f"Unexpected token {e.token.value!r}, expected one of: {expected}"
        raise ExprSyntaxError(msg, _byte_offset(text, e.token.start_pos or 0)) from e
    except UnexpectedInput as e:
        position = getattr(e, "pos_in_stream", None) or len(text)
        msg = "Malformed expression"
        raise ExprSyntaxError(msg, _byte_offset(text, position)) from e


def _build(node: Tree[Token] | Token, text: str) -> ExprAST:
    """Turn a lark parse tree into AST nodes, enforcing bracket arity and nonzero divisors."""
    if isinstance(node, Token):
        msg = f"Unexpected token {node.value!r}"
        raise ExprSyntaxError(msg, _byte_offset(text, node.start_pos or 0))
    children = node.children
    match node.data:
        case "number":
            return Number(int(children[0]))
        case "symbol":
            return Symbol()
        case "generator":
            return GeneratorAtom(Generator(str(children[0])))
        case "named":
            return NamedAtom(NamedOperator(str(children[0])))
        case "group":
            return Group(_build(children[0], text))
        case "neg":
            return Negation(_build(children[0], text))
        case "add":
            return Sum(_build(children[0], text), _build(children[1], text))
        case "sub":
            return Difference(_build(children[0], text), _build(children[1], text))
        case "mul":
            return Product(_build(children[0], text), _build(children[1], text))
        case "pow":
            return Power(_build(children[0], text), int(children[1]))
        case "div":
            slash, divisor = children[1], children[2]
            assert isinstance(slash, Token) and isinstance(divisor, Tree)
            token = divisor.children[0]
            assert isinstance(token, Token)
            if token.type == "SYMBOL_P":
                return Quotient(_build(children[0], text), Symbol())
            if int(token) == 0:
                msg = "Division by zero"
                raise ExprSyntaxError(msg, _byte_offset(text, slash.start_pos or 0))
            return Quotient(_build(children[0], text), Number(int(token)))
        case "commutator" | "anticommutator":
            opener, operands = children
            assert isinstance(opener, Token) and isinstance(operands, Tree)
            if len(operands.children) != 2:
                kind = "Commutator" if node.data == "commutator" else "Anticommutator"
                msg = f"{kind} takes exactly two operands, got {len(operands.children)}"
                raise ArityError(msg, _byte_offset(text, opener.start_pos or 0))
            left, right = (_build(child, text) for child in operands.children)
            if node.data == "commutator":
                return Commutator(left, right)
            return Anticommutator(left, right)
    msg = f"Unsupported grammar rule {node.data}"
    raise ExprSyntaxError(msg, 0)


def parse(text: str) -> ExprAST:
    """Parse an operator expression.

    Args:
        text: Expression such as "[{f-,b+},b-] + 2*f-"

    Returns:
        Expression tree

    Raises:
        LexicalError: On an unknown token
        ExprSyntaxError: On an unexpected or missing token
        ArityError: On a bracket without exactly two operands
    """
    return _build(_run_parser(text, "expr"), text)


def parse_relation(text: str) -> FAElement:
    """Parse `lhs = rhs` (or a bare expression meaning `expr = 0`) and lower it to lhs - rhs."""
    tree = _run_parser(text, "relation")
    sides = [lower(_build(child, text)) for child in tree.children]
    if len(sides) == 1:
        return sides[0]
    return sides[0] - sides[1]


def parse_expression(text: str) -> FAElement:
    """Parse and lower in one step."""
    return lower(parse(text))


def lower(ast: ExprAST) -> FAElement:
    """Expand an expression tree into a free-algebra element; named atoms expand to words."""
    match ast:
        case Number(value):
            return FAElement.scalar(value)
        case Symbol():
            return FAElement.scalar(P)
        case GeneratorAtom(generator):
            return GENERATOR_ELEMENTS[generator]
        case NamedAtom(name):
            return named_operator(name)
        case Group(inner):
            return lower(inner)
        case Negation(operand):
            return -lower(operand)
        case Sum(left, right):
            return lower(left) + lower(right)
        case Difference(left, right):
            return lower(left) - lower(right)
        case Product(left, right):
            return lower(left) * lower(right)
        case Quotient(left, Number(value)):
            return sympy.Rational(1, value) * lower(left)
        case Quotient(left, _):
            return (1 / P) * lower(left)
        case Power(base, exponent):
            return lower(base) ** exponent
        case Commutator(left, right):
            return commutator(lower(left), lower(right))
        case Anticommutator(left, right):
            return anticommutator(lower(left), lower(right))
    msg = f"Cannot lower {ast!r}"
    raise TypeError(msg)


# Binding strength used by the printer: sums < negation < products < powers < atoms.
_SUM, _NEG, _PRODUCT, _POWER, _ATOM = range(1, 6)


def _strength(ast: ExprAST) -> int:
    match ast:
        case Sum() | Difference():
            return _SUM
        case Negation():
            return _NEG
        case Product() | Quotient():
            return _PRODUCT
        case Power():
            return _POWER
    return _ATOM


def _wrap(ast: ExprAST, minimum: int) -> str:
    text = pretty(ast)
    if _strength(ast) < minimum:
        return f"({text})"
    return text


def pretty(ast: ExprAST) -> str:
    """Canonical spelling; parsing it back and printing again gives the same text."""
    match ast:
        case Number(value):
            return str(value)
        case Symbol():
            return "p"
        case GeneratorAtom(generator):
            return generator.value
        case NamedAtom(name):
            return name.value
        case Group(inner):
            return f"({pretty(inner)})"
        case Negation(operand):
            return f"-{_wrap(operand, _NEG)}"
        case Sum(left, right):
            return f"{_wrap(left, _SUM)} + {_wrap(right, _NEG)}"
        case Difference(left, right):
            return f"{_wrap(left, _SUM)} - {_wrap(right, _NEG)}"
        case Product(left, right):
            return f"{_wrap(left, _PRODUCT)}*{_wrap(right, _POWER)}"
        case Quotient(left, divisor):
            return f"{_wrap(left, _PRODUCT)}/{pretty(divisor)}"
        case Power(base, exponent):
            return f"{_wrap(base, _ATOM)}^{exponent}"
        case Commutator(left, right):
            return f"[{pretty(left)}, {pretty(right)}]"
        case Anticommutator(left, right):
            return f"{{{pretty(left)}, {pretty(right)}}}"
    msg = f"Cannot print {ast!r}"
    raise TypeError(msg)


class ConfigParser:
    """Parser for batch verification run files (JSON objects)."""

    @staticmethod
    def _load_json(config_text: str) -> dict[str, object]:
        """Decode the run file into a mapping.

        Args:
            config_text: File contents

        Returns:
            Decoded object

        Raises:
            ConfigError: If the text is not a JSON object
        """
        try:
            data = json.loads(config_text)
        except json.JSONDecodeError as e:
            msg = f"Line {e.lineno}: Invalid JSON ({e.msg}). Example: {{\"orders\": [1, 2, 3], \"window_m\": 8, \"guard\": 3}}"
            raise ConfigError(msg) from e
        if not isinstance(data, dict):
            msg = f"Run file must hold a JSON object, got {type(data).__name__}"
            raise ConfigError(msg)
        return data

    @staticmethod
    def parse_config(config_text: str, **overrides: object) -> RunConfig:
        """Parse a run configuration.

        Format: a JSON object with the RunConfig fields; `p` is accepted as a
        shorthand for a single-element `orders` list.
        Example:
            {"orders": [1, 2, 3, 4], "window_m": 8, "guard": 3, "checks": ["relations", "grading"]}

        Args:
            config_text: Configuration text
            **overrides: Values taking precedence over the file (typically CLI flags)

        Returns:
            Validated run configuration

        Raises:
            ConfigError: If the format is invalid or a value is out of range
        """
        data = ConfigParser._load_json(config_text) if config_text.strip() else {}
        if "p" in data:
            data["orders"] = [data.pop("p")]
        data.update({key: value for key, value in overrides.items() if value is not None})
        return ConfigParser.build(data)

    @staticmethod
    def build(data: dict[str, object]) -> RunConfig:
        """Validate a mapping into a RunConfig, flattening pydantic errors into one message.

        Raises:
            ConfigError: If validation fails
        """
        try:
            return RunConfig.model_validate(data)
        except ValidationError as e:
            problems = "; ".join(f"{'.'.join(str(part) for part in err['loc']) or 'config'}: {err['msg']}" for err in e.errors())
            msg = f"Invalid run configuration: {problems}"
            raise ConfigError(msg) from e

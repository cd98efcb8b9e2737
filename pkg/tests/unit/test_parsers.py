"""Unit tests for the operator-expression parser and the run-config parser."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apps.rpbs.exceptions import ArityError, ConfigError, ExpressionError, ExprSyntaxError, LexicalError
from apps.rpbs.models import CheckName, Generator
from apps.rpbs.parsers import (
    Anticommutator,
    Commutator,
    ConfigParser,
    Difference,
    ExprAST,
    GeneratorAtom,
    Negation,
    Number,
    Power,
    Product,
    Quotient,
    Symbol,
    Sum,
    lower,
    parse,
    parse_expression,
    parse_relation,
    pretty,
)
from apps.rpbs.services.algebra import B_MINUS, B_PLUS, F_MINUS, F_PLUS, P, NamedOperator, anticommutator, commutator, named_operator

B_PLUS_ATOM = GeneratorAtom(Generator.B_PLUS)
B_MINUS_ATOM = GeneratorAtom(Generator.B_MINUS)
F_PLUS_ATOM = GeneratorAtom(Generator.F_PLUS)


@pytest.mark.unit
class TestExpressionParser:
    """Test parsing and lowering of operator expressions."""

    def test_juxtaposition_is_product(self) -> None:
        """Test 'b+ b-' and 'b+*b-' parse to the same product."""
        assert parse("b+ b-") == Product(B_PLUS_ATOM, B_MINUS_ATOM)
        assert parse("b+*b-") == parse("b+ b-")

    def test_precedence(self) -> None:
        """Test ^ binds tighter than products, which bind tighter than sums."""
        assert parse("2 b+^2 + f+") == Sum(Product(Number(2), Power(B_PLUS_ATOM, 2)), F_PLUS_ATOM)

    def test_subtraction_is_left_associative(self) -> None:
        """Test a - b - c = (a - b) - c."""
        assert parse("b+ - b- - f+") == Difference(Difference(B_PLUS_ATOM, B_MINUS_ATOM), F_PLUS_ATOM)

    def test_unary_minus(self) -> None:
        """Test a leading minus negates the term."""
        assert parse("-2 f+") == Negation(Product(Number(2), F_PLUS_ATOM))

    def test_brackets(self) -> None:
        """Test commutator and anticommutator brackets nest."""
        ast = parse("[{f+, b-}, b+]")

        assert ast == Commutator(Anticommutator(F_PLUS_ATOM, B_MINUS_ATOM), B_PLUS_ATOM)

    def test_division(self) -> None:
        """Test division by a literal or by p."""
        assert parse("b+/2") == Quotient(B_PLUS_ATOM, Number(2))
        assert parse("b+/p") == Quotient(B_PLUS_ATOM, Symbol())

    def test_lower_bracket(self) -> None:
        """Test lowering expands brackets into words."""
        assert parse_expression("[{f+,b-},b+] - 2*f+") == commutator(anticommutator(F_PLUS, B_MINUS), B_PLUS) - 2 * F_PLUS

    def test_lower_named_and_symbolic(self) -> None:
        """Test named operators expand and p stays symbolic."""
        assert parse_expression("(R+)^2") == named_operator(NamedOperator.R_PLUS) ** 2
        assert parse_expression("p/2 f-") == P / 2 * F_MINUS
        assert parse_expression("f- /p") == F_MINUS * (1 / P)

    def test_relation(self) -> None:
        """Test 'lhs = rhs' lowers to lhs - rhs."""
        assert parse_relation("[R+,b-] = -f+") == commutator(named_operator(NamedOperator.R_PLUS), B_MINUS) + F_PLUS
        assert parse_relation("b+ b- = b+ b-").is_zero()
        assert parse_relation("b+") == B_PLUS

    @pytest.mark.parametrize(
        "text",
        ["[{f+,b-},b+] - 2*f+", "-(b+ + b-)^2", "2 f+/3 - p*T", "{R+, f-} - b+", "Nb Nf - Ns + Q+ Q-", "-[b+, -b-]"],
    )
    def test_pretty_is_stable(self, text: str) -> None:
        """Test printing then parsing gives back the same tree."""
        ast = parse(text)

        assert parse(pretty(ast)) == ast
        assert lower(parse(pretty(ast))) == lower(ast)


@pytest.mark.unit
class TestExpressionErrors:
    """Test the error classes and byte offsets of malformed expressions."""

    def test_unknown_token(self) -> None:
        """Test an unknown character is a lexical error at its offset."""
        with pytest.raises(LexicalError) as excinfo:
            parse("b+ $ b-")

        assert excinfo.value.position == 3

    def test_unknown_non_ascii_token(self) -> None:
        """Test a non-ASCII character is reported at its byte offset."""
        with pytest.raises(LexicalError) as excinfo:
            parse("b+ + α")

        assert excinfo.value.position == 5

    def test_missing_operand(self) -> None:
        """Test a dangling operator reports the end of input."""
        with pytest.raises(ExprSyntaxError) as excinfo:
            parse("b+ +")

        assert excinfo.value.position == 4

    def test_unbalanced_bracket(self) -> None:
        """Test a stray closing bracket is a syntax error."""
        with pytest.raises(ExprSyntaxError):
            parse("b+ )")

    @pytest.mark.parametrize(("text", "position"), [("[b+, b-, f+]", 0), ("b- {f+}", 3)])
    def test_bracket_arity(self, text: str, position: int) -> None:
        """Test brackets need exactly two operands; the offset points at the opener."""
        with pytest.raises(ArityError) as excinfo:
            parse(text)

        assert excinfo.value.position == position

    def test_division_by_zero(self) -> None:
        """Test a zero divisor is rejected."""
        with pytest.raises(ExprSyntaxError, match="Division by zero"):
            parse("b+/0")

    def test_division_by_generator(self) -> None:
        """Test only literals and p may divide."""
        with pytest.raises(ExpressionError):
            parse("b+/b-")

    @settings(max_examples=60, deadline=None)
    @given(text=st.text(alphabet="bf+-*^()[]{},=0123p RQTN ", max_size=12))
    def test_never_crashes(self, text: str) -> None:
        """Test arbitrary input either parses or raises an ExpressionError."""
        try:
            ast: ExprAST = parse(text)
        except ExpressionError:
            return
        assert pretty(ast)


@pytest.mark.unit
class TestConfigParser:
    """Test cases for ConfigParser."""

    def test_parse_minimal(self) -> None:
        """Test a run file with only the orders uses the defaults."""
        config = ConfigParser.parse_config('{"orders": [2]}')

        assert config.orders == [2]
        assert config.window_m == 8
        assert config.guard == 3
        assert config.checks == list(CheckName)

    def test_single_order_shorthand(self) -> None:
        """Test 'p' is accepted for a single order."""
        assert ConfigParser.parse_config('{"p": 3, "window_m": 6}').orders == [3]

    def test_orders_sorted_and_deduplicated(self) -> None:
        """Test orders are normalized."""
        assert ConfigParser.parse_config('{"orders": [3, 1, 3]}').orders == [1, 3]

    def test_overrides_win(self) -> None:
        """Test flag values replace file values and None leaves them alone."""
        config = ConfigParser.parse_config('{"orders": [1], "guard": 2}', orders=[4], guard=None, checks=["relations"])

        assert config.orders == [4]
        assert config.guard == 2
        assert config.checks == [CheckName.RELATIONS]

    def test_empty_text_with_overrides(self) -> None:
        """Test flags alone are enough."""
        assert ConfigParser.parse_config("", orders=[2], window_m=4, guard=1).window_m == 4

    def test_invalid_json(self) -> None:
        """Test malformed JSON names the line."""
        with pytest.raises(ConfigError, match="Line 2: Invalid JSON"):
            ConfigParser.parse_config('{"orders": [1],\n "window_m": }')

    def test_not_an_object(self) -> None:
        """Test a JSON list is rejected."""
        with pytest.raises(ConfigError, match="JSON object"):
            ConfigParser.parse_config("[1, 2]")

    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ('{"orders": [0]}', "out of range"),
            ('{"orders": []}', "orders"),
            ('{"orders": [2], "window_m": 2, "guard": 3}', "exceeds window_m"),
            ('{"orders": [2], "checks": ["nonsense"]}', "checks"),
            ("{}", "orders"),
        ],
    )
    def test_invalid_values(self, text: str, message: str) -> None:
        """Test validation failures become ConfigError with the field named."""
        with pytest.raises(ConfigError, match=message):
            ConfigParser.parse_config(text)

    def test_lowered_catalog_entry(self) -> None:
        """Test a catalog relation reads element = 0 after parsing."""
        element = parse_relation("{{b-,f+},f-} = 2 b-")

        assert element == anticommutator(anticommutator(B_MINUS, F_PLUS), F_MINUS) - 2 * B_MINUS

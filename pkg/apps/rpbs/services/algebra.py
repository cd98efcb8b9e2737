"""Free associative algebra on b+, b-, f+, f- with coefficients rational in the order p."""

from __future__ import annotations

from enum import StrEnum
from fractions import Fraction
from functools import cache
from typing import TYPE_CHECKING

import sympy
from loguru import logger
from pydantic import BaseModel

from apps.rpbs.models import BasisKet, Generator, RepParams, State
from apps.rpbs.services.exact import to_fraction, to_rational
from apps.rpbs.services.fock import Word, apply_word, enumerate_basis

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

P = sympy.Symbol("p", positive=True, integer=True)

Coefficient = sympy.Expr | Fraction | int


def _coerce(value: Coefficient) -> sympy.Expr:
    if isinstance(value, Fraction):
        return to_rational(value)
    return sympy.sympify(value)


class FAElement:
    """Element of the free algebra: a finite map from words to coefficients in Q(p).

    The empty word is the unit. Coefficients are kept in canonical cancelled
    form so that a zero coefficient is always detected and dropped.
    """

    __slots__ = ("_instances", "_terms")

    def __init__(self, terms: Mapping[Word, Coefficient] | None = None) -> None:
        cleaned: dict[Word, sympy.Expr] = {}
        if terms:
            for word_key, value in terms.items():
                coefficient = sympy.cancel(_coerce(value))
                if coefficient != 0:
                    cleaned[tuple(word_key)] = coefficient
        self._terms = cleaned
        self._instances: dict[int, dict[Word, Fraction]] = {}

    @classmethod
    def zero(cls) -> FAElement:
        return cls()

    @classmethod
    def unit(cls) -> FAElement:
        return cls({(): 1})

    @classmethod
    def scalar(cls, value: Coefficient) -> FAElement:
        return cls({(): value})

    @property
    def terms(self) -> dict[Word, sympy.Expr]:
        """Copy of the word -> coefficient map."""
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def words(self) -> list[Word]:
        """Words with nonzero coefficient, shortest first."""
        return sorted(self._terms, key=lambda w: (len(w), [g.value for g in w]))

    def max_word_length(self) -> int:
        """Length of the longest word (0 for scalars and the zero element)."""
        return max((len(w) for w in self._terms), default=0)

    def coefficient(self, word_key: Sequence[Generator]) -> sympy.Expr:
        return self._terms.get(tuple(word_key), sympy.Integer(0))

    def instantiate(self, p: int) -> dict[Word, Fraction]:
        """Coefficients evaluated at a concrete order p.

        Raises:
            ValueError: If a coefficient depends on a symbol other than p
        """
        cached = self._instances.get(p)
        if cached is None:
            cached = {}
            for word_key, coefficient in self._terms.items():
                value = to_fraction(coefficient.subs(P, p))
                if value != 0:
                    cached[word_key] = value
            self._instances[p] = cached
        return cached

    def dagger(self) -> FAElement:
        """Formal adjoint: reverse each word and swap raising with lowering generators."""
        return FAElement({tuple(g.adjoint for g in reversed(w)): c for w, c in self._terms.items()})

    def _combine(self, other: FAElement, sign: int) -> FAElement:
        acc: dict[Word, sympy.Expr] = dict(self._terms)
        for word_key, coefficient in other._terms.items():
            acc[word_key] = acc.get(word_key, sympy.Integer(0)) + sign * coefficient
        return FAElement(acc)

    def __add__(self, other: FAElement | Coefficient) -> FAElement:
        return self._combine(_as_element(other), 1)

    __radd__ = __add__

    def __sub__(self, other: FAElement | Coefficient) -> FAElement:
        return self._combine(_as_element(other), -1)

    def __rsub__(self, other: Coefficient) -> FAElement:
        return _as_element(other)._combine(self, -1)

    def __neg__(self) -> FAElement:
        return FAElement({w: -c for w, c in self._terms.items()})

    def __mul__(self, other: FAElement | Coefficient) -> FAElement:
        right = _as_element(other)
        acc: dict[Word, sympy.Expr] = {}
        for left_word, left_coefficient in self._terms.items():
            for right_word, right_coefficient in right._terms.items():
                key = left_word + right_word
                acc[key] = acc.get(key, sympy.Integer(0)) + left_coefficient * right_coefficient
        return FAElement(acc)

    def __rmul__(self, other: Coefficient) -> FAElement:
        return _as_element(other) * self

    def __pow__(self, exponent: int) -> FAElement:
        if exponent < 0:
            msg = f"Negative power {exponent} is not defined in the free algebra"
            raise ValueError(msg)
        result = FAElement.unit()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FAElement):
            return (self - other).is_zero()
        if isinstance(other, int | Fraction | sympy.Expr):
            return (self - FAElement.scalar(other)).is_zero()
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FAElement({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for index, word_key in enumerate(self.words()):
            coefficient = self._terms[word_key]
            negative = coefficient.could_extract_minus_sign()
            magnitude = -coefficient if negative else coefficient
            letters = " ".join(g.value for g in word_key)
            if not word_key:
                body = format_coefficient(magnitude)
            elif magnitude == 1:
                body = letters
            else:
                body = f"{format_coefficient(magnitude)} {letters}"
            if index == 0:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(parts)


def format_coefficient(value: sympy.Expr) -> str:
    """Coefficient spelled with ^ for powers; compound expressions are parenthesized."""
    text = sympy.sstr(value).replace("**", "^")
    if value.is_Atom:
        return text
    return f"({text})"


def _as_element(value: FAElement | Coefficient) -> FAElement:
    if isinstance(value, FAElement):
        return value
    return FAElement.scalar(value)


def word(generators: Iterable[Generator]) -> FAElement:
    """Monomial with coefficient 1; the empty sequence gives the unit."""
    return FAElement({tuple(generators): 1})


def commutator(x: FAElement, y: FAElement) -> FAElement:
    """[x, y] = xy - yx."""
    return x * y - y * x


def anticommutator(x: FAElement, y: FAElement) -> FAElement:
    """{x, y} = xy + yx."""
    return x * y + y * x


B_PLUS = word([Generator.B_PLUS])
B_MINUS = word([Generator.B_MINUS])
F_PLUS = word([Generator.F_PLUS])
F_MINUS = word([Generator.F_MINUS])

GENERATOR_ELEMENTS = {
    Generator.B_PLUS: B_PLUS,
    Generator.B_MINUS: B_MINUS,
    Generator.F_PLUS: F_PLUS,
    Generator.F_MINUS: F_MINUS,
}


class NamedOperator(StrEnum):
    """Derived operators with a fixed expansion in the generators."""

    R_PLUS = "R+"
    R_MINUS = "R-"
    Q_PLUS = "Q+"
    Q_MINUS = "Q-"
    N_B = "Nb"
    N_F = "Nf"
    N_S = "Ns"
    T = "T"


@cache
def named_operator(name: NamedOperator) -> FAElement:
    """Expansion of a derived operator into words, with coefficients rational in p.

    Args:
        name: Which operator

    Returns:
        Fully expanded element
    """
    half = sympy.Rational(1, 2)
    match name:
        case NamedOperator.R_PLUS:
            return half * anticommutator(B_PLUS, F_PLUS)
        case NamedOperator.R_MINUS:
            return half * anticommutator(B_MINUS, F_MINUS)
        case NamedOperator.Q_PLUS:
            return half * anticommutator(B_MINUS, F_PLUS)
        case NamedOperator.Q_MINUS:
            return half * anticommutator(B_PLUS, F_MINUS)
        case NamedOperator.N_B:
            return half * anticommutator(B_PLUS, B_MINUS) - P / 2
        case NamedOperator.N_F:
            return half * commutator(F_PLUS, F_MINUS) + P / 2
        case NamedOperator.N_S:
            n_f = named_operator(NamedOperator.N_F)
            return (1 / P) * (n_f * n_f - (P + 1) * n_f + F_PLUS * F_MINUS + P / 2)
        case NamedOperator.T:
            r_plus, r_minus = named_operator(NamedOperator.R_PLUS), named_operator(NamedOperator.R_MINUS)
            q_plus, q_minus = named_operator(NamedOperator.Q_PLUS), named_operator(NamedOperator.Q_MINUS)
            n_b, n_f = named_operator(NamedOperator.N_B), named_operator(NamedOperator.N_F)
            n_s = named_operator(NamedOperator.N_S)
            return (P / 2) * (r_plus * r_minus + q_plus * q_minus - n_b - P / 2) - 2 * (n_b + P / 2) * (n_f - P / 2) * n_s
    msg = f"Unknown operator {name}"
    raise ValueError(msg)


def evaluate(element: FAElement, state: State, params: RepParams) -> State:
    """Act with element on state; words act right to left.

    Args:
        element: Algebra element
        state: Canonical state
        params: Representation parameters

    Returns:
        Canonical image state

    Raises:
        WindowOverflow: If a word raises m past the window cutoff
    """
    instance = element.instantiate(params.p)
    return State.combine((coefficient, apply_word(word_key, state, params)) for word_key, coefficient in instance.items())


class IdentityReport(BaseModel):
    """Verdict of checking element == 0 on every in-guard basis ket."""

    holds: bool
    kets_checked: int
    counterexample_ket: str | None = None
    counterexample_image: str | None = None


def check_identity(element: FAElement, params: RepParams) -> IdentityReport:
    """Check that element annihilates every ket with m <= window_m - (longest word length).

    Args:
        element: Element written so that the identity reads element = 0
        params: Representation parameters

    Returns:
        Report with the first violating ket, if any. A window shorter than the longest word
        leaves nothing to check and is reported as not holding.
    """
    guard = element.max_word_length()
    if guard > params.window_m:
        logger.warning(f"Window {params.window_m} is shorter than the longest word ({guard}); nothing checked")
        return IdentityReport(holds=False, kets_checked=0)
    kets: list[BasisKet] = enumerate_basis(params, params.window_m - guard)
    for ket in kets:
        image = evaluate(element, State.ket(ket), params)
        if image:
            return IdentityReport(holds=False, kets_checked=len(kets), counterexample_ket=str(ket), counterexample_image=str(image))
    return IdentityReport(holds=True, kets_checked=len(kets))


def redundancy_identity() -> tuple[FAElement, FAElement]:
    """The two '= 2b+' anticommutator relations differ by exactly [[f-, f+], b+].

    Returns:
        (difference of the two normalized relations, [[f-, f+], b+])
    """
    first = anticommutator(anticommutator(F_PLUS, B_PLUS), F_MINUS) - 2 * B_PLUS
    second = anticommutator(anticommutator(B_PLUS, F_MINUS), F_PLUS) - 2 * B_PLUS
    return first - second, commutator(commutator(F_MINUS, F_PLUS), B_PLUS)

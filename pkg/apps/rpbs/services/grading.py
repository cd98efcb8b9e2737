"""Z2 x Z2 gradings of the algebra and of the Fock-like module."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from loguru import logger
from pydantic import BaseModel, ConfigDict

from apps.rpbs.models import BasisKet, Generator, RepParams, State
from apps.rpbs.services.fock import act, enumerate_basis

if TYPE_CHECKING:
    from apps.rpbs.services.algebra import FAElement
    from apps.rpbs.services.catalog import RelationEntry


@dataclass(frozen=True, order=True)
class Degree:
    """Element of Z2 x Z2, written additively."""

    first: int = 0
    second: int = 0

    def __post_init__(self) -> None:
        if self.first not in (0, 1) or self.second not in (0, 1):
            msg = f"Degree components must be 0 or 1, got ({self.first}, {self.second})"
            raise ValueError(msg)

    def __add__(self, other: Degree) -> Degree:
        return Degree((self.first + other.first) % 2, (self.second + other.second) % 2)

    def __str__(self) -> str:
        return f"({self.first},{self.second})"


ZERO_DEGREE = Degree()


class GradingAssignment(BaseModel):
    """Degrees of the generators; b+ and b- share a degree, as do f+ and f-."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    boson: Degree
    fermion: Degree

    def degree(self, generator: Generator) -> Degree:
        if generator.is_bosonic:
            return self.boson
        return self.fermion


MAIN = GradingAssignment(name="main", boson=Degree(1, 0), fermion=Degree(0, 1))
ALT = GradingAssignment(name="alt", boson=Degree(1, 0), fermion=Degree(1, 1))


@dataclass(frozen=True)
class NonHomogeneous:
    """Verdict for an element whose words do not share one degree."""

    degrees: dict[str, Degree]

    def __str__(self) -> str:
        listed = ", ".join(f"{word_text}: {degree}" for word_text, degree in self.degrees.items())
        return f"non-homogeneous ({listed})"


def degree_ket(ket: BasisKet) -> Degree:
    """(m mod 2, n mod 2); alpha and beta kets of one V_{m,n} share it."""
    return Degree(ket.m % 2, ket.n % 2)


def degree_word(word_key: tuple[Generator, ...], grading: GradingAssignment) -> Degree:
    result = ZERO_DEGREE
    for generator in word_key:
        result = result + grading.degree(generator)
    return result


def degree_element(element: FAElement, grading: GradingAssignment) -> Degree | NonHomogeneous:
    """Common degree of every word of element, or the conflicting words.

    Raises:
        ValueError: If element is zero (its degree is undefined)
    """
    if element.is_zero():
        msg = "The zero element has no degree"
        raise ValueError(msg)
    degrees = {" ".join(g.value for g in word_key) or "1": degree_word(word_key, grading) for word_key in element.words()}
    distinct = set(degrees.values())
    if len(distinct) == 1:
        return distinct.pop()
    return NonHomogeneous(degrees)


class GradingCounterexample(BaseModel):
    generator: str
    ket: str
    image_ket: str
    expected: str
    actual: str


class GradedModuleReport(BaseModel):
    """Outcome of checking A_g . V_h inside V_{g+h} generator by generator."""

    grading: str
    p: int
    graded: bool
    kets_checked: int
    counterexample: GradingCounterexample | None = None


def check_graded_module(grading: GradingAssignment, params: RepParams) -> GradedModuleReport:
    """Check that every generator shifts ket degrees by its own degree.

    Kets with m <= window_m - 1 are checked so that b+ stays inside the window.

    Args:
        grading: Degree assignment for the generators
        params: Representation parameters (window_m >= 1)

    Returns:
        Report with the first violation, if any

    Raises:
        ValueError: If the window is empty
    """
    if params.window_m < 1:
        msg = f"Graded-module check needs window_m >= 1, got {params.window_m}"
        raise ValueError(msg)
    kets = enumerate_basis(params, params.window_m - 1)
    for ket in kets:
        source = degree_ket(ket)
        for generator in Generator:
            expected = source + grading.degree(generator)
            for image_ket in act(generator, State.ket(ket), params).kets():
                actual = degree_ket(image_ket)
                if actual != expected:
                    logger.debug(f"Grading {grading.name}: {generator.value} on {ket} lands in {actual}, expected {expected}")
                    return GradedModuleReport(
                        grading=grading.name,
                        p=params.p,
                        graded=False,
                        kets_checked=len(kets),
                        counterexample=GradingCounterexample(
                            generator=generator.value, ket=str(ket), image_ket=str(image_ket), expected=str(expected), actual=str(actual)
                        ),
                    )
    return GradedModuleReport(grading=grading.name, p=params.p, graded=True, kets_checked=len(kets))


def relation_degrees(entries: list[RelationEntry]) -> list[dict[str, str]]:
    """Degree of each nonzero relation under both built-in assignments, for the report export."""
    rows: list[dict[str, str]] = []
    for entry in entries:
        if entry.element.is_zero():
            continue
        rows.append(
            {
                "name": entry.name,
                MAIN.name: str(degree_element(entry.element, MAIN)),
                ALT.name: str(degree_element(entry.element, ALT)),
            }
        )
    return rows

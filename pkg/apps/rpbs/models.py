"""Value types shared by the RPBS engine: generators, basis labels, states and parameters."""

from __future__ import annotations

from enum import StrEnum
from fractions import Fraction
from pathlib import Path
from types import MappingProxyType
from typing import TYPE_CHECKING, Literal, NamedTuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from apps.rpbs.constants import (
    DEFAULT_COUPLING,
    DEFAULT_FAMILY_BOUND,
    DEFAULT_OMEGA_B,
    DEFAULT_OMEGA_F,
    MAX_ORDER,
    MAX_WINDOW,
    MIN_ORDER,
)
from config.settings import get_settings

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping

Scalar = Fraction | int


class Generator(StrEnum):
    """The four generators of the algebra, spelled as in operator expressions."""

    B_PLUS = "b+"
    B_MINUS = "b-"
    F_PLUS = "f+"
    F_MINUS = "f-"

    @property
    def adjoint(self) -> Generator:
        """Return the generator paired by (b-)^dagger = b+ and (f-)^dagger = f+."""
        return _ADJOINTS[self]

    @property
    def is_bosonic(self) -> bool:
        """True for b+ and b-."""
        return self in (Generator.B_PLUS, Generator.B_MINUS)

    @property
    def is_raising(self) -> bool:
        """True for the creation operators b+ and f+."""
        return self in (Generator.B_PLUS, Generator.F_PLUS)


_ADJOINTS = {
    Generator.B_PLUS: Generator.B_MINUS,
    Generator.B_MINUS: Generator.B_PLUS,
    Generator.F_PLUS: Generator.F_MINUS,
    Generator.F_MINUS: Generator.F_PLUS,
}


class Tag(StrEnum):
    """Which of the two canonical vectors of V_{m,n} a label refers to."""

    ALPHA = "a"
    BETA = "b"

    @property
    def symbol(self) -> str:
        """Greek letter used when printing kets."""
        if self is Tag.ALPHA:
            return "α"
        return "β"


class BasisKet(NamedTuple):
    """Canonical basis label |m, n, tag>; tuple order is the export order."""

    m: int
    n: int
    tag: Tag = Tag.ALPHA

    @property
    def label(self) -> str:
        """Flag spelling `m,n,a|b` used by the CLI and the exports."""
        return f"{self.m},{self.n},{self.tag.value}"

    def __str__(self) -> str:
        return f"|{self.m},{self.n},{self.tag.symbol}⟩"


VACUUM = BasisKet(0, 0, Tag.ALPHA)


class State:
    """Finite linear combination of basis kets with exact rational coefficients.

    Zero coefficients are never stored, so two states are equal exactly when
    their term maps are equal. Instances are immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[BasisKet, Scalar] | None = None) -> None:
        cleaned: dict[BasisKet, Fraction] = {}
        if terms:
            for ket, coefficient in terms.items():
                if coefficient != 0:
                    cleaned[ket] = Fraction(coefficient)
        self._terms = cleaned

    @classmethod
    def zero(cls) -> State:
        """The zero vector."""
        return cls()

    @classmethod
    def ket(cls, ket: BasisKet, coefficient: Scalar = 1) -> State:
        """A single basis ket scaled by coefficient."""
        return cls({ket: coefficient})

    @classmethod
    def vacuum(cls) -> State:
        """The normalized vacuum |0>."""
        return cls.ket(VACUUM)

    @classmethod
    def combine(cls, parts: Iterable[tuple[Scalar, State]]) -> State:
        """Sum of coefficient * state over parts, accumulated in one pass."""
        acc: dict[BasisKet, Fraction] = {}
        for scale, state in parts:
            if scale == 0:
                continue
            for ket, coefficient in state._terms.items():
                acc[ket] = acc.get(ket, Fraction(0)) + scale * coefficient
        return cls(acc)

    @property
    def terms(self) -> Mapping[BasisKet, Fraction]:
        """Read-only view of the nonzero terms."""
        return MappingProxyType(self._terms)

    def coefficient(self, ket: BasisKet) -> Fraction:
        """Coefficient of ket (zero when absent)."""
        return self._terms.get(ket, Fraction(0))

    def kets(self) -> list[BasisKet]:
        """Kets with nonzero coefficient, in basis order."""
        return sorted(self._terms)

    def max_m(self) -> int:
        """Largest paraboson index present (-1 for the zero state)."""
        return max((ket.m for ket in self._terms), default=-1)

    def __iter__(self) -> Iterator[tuple[BasisKet, Fraction]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, State):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: State) -> State:
        return State.combine(((1, self), (1, other)))

    def __sub__(self, other: State) -> State:
        return State.combine(((1, self), (-1, other)))

    def __neg__(self) -> State:
        return State({ket: -c for ket, c in self._terms.items()})

    def __mul__(self, scale: Scalar) -> State:
        return State({ket: scale * c for ket, c in self._terms.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"State({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for index, (ket, coefficient) in enumerate(self):
            magnitude = abs(coefficient)
            if magnitude == 1:
                body = str(ket)
            else:
                body = f"{magnitude}{ket}"
            if index == 0:
                parts.append(body if coefficient > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coefficient > 0 else f"- {body}")
        return " ".join(parts)


class RepParams(BaseModel):
    """Order p of the representation plus the paraboson cutoff of the working window."""

    model_config = ConfigDict(frozen=True)

    p: int = Field(ge=MIN_ORDER)
    window_m: int = Field(ge=0)

    def with_window(self, window_m: int) -> RepParams:
        """Same representation, different cutoff."""
        return RepParams(p=self.p, window_m=window_m)


class HamiltonianParams(BaseModel):
    """Frequencies and coupling of the generalized Jaynes-Cummings Hamiltonian.

    Floats are read through their decimal spelling, so 0.1 becomes exactly 1/10
    and materialized blocks stay exact.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    omega_b: Fraction = Fraction(str(DEFAULT_OMEGA_B))
    omega_f: Fraction = Fraction(str(DEFAULT_OMEGA_F))
    coupling: Fraction = Fraction(str(DEFAULT_COUPLING))

    @field_validator("omega_b", "omega_f", "coupling", mode="before")
    @classmethod
    def _as_fraction(cls, value: object) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int | float | str) and not isinstance(value, bool):
            try:
                return Fraction(str(value))
            except (ValueError, OverflowError) as e:
                msg = f"Cannot read {value!r} as a finite real parameter"
                raise ValueError(msg) from e
        msg = f"Cannot read {value!r} as a real parameter"
        raise ValueError(msg)


class CheckName(StrEnum):
    """Checks run by the verify command, in report order."""

    BASIS = "basis"
    VACUUM = "vacuum"
    RELATIONS = "relations"
    LEMMAS = "lemmas"
    REDUNDANCY = "redundancy"
    BETA = "beta"
    NUMBERS = "numbers"
    ADJOINTNESS = "adjointness"
    POSITIVITY = "positivity"
    GRADING = "grading"
    CYCLICITY = "cyclicity"
    T_LADDER = "t_ladder"


class RunConfig(BaseModel):
    """Batch verification settings, read from a JSON file or assembled from CLI flags."""

    model_config = ConfigDict(frozen=True)

    orders: list[int] = Field(min_length=1)
    window_m: int = Field(default_factory=lambda: get_settings().default_window, ge=0, le=MAX_WINDOW)
    guard: int = Field(default_factory=lambda: get_settings().default_guard, ge=0)
    checks: list[CheckName] = Field(default_factory=lambda: list(CheckName))
    family_bound: int = Field(default=DEFAULT_FAMILY_BOUND, ge=0)
    output_dir: Path | None = None
    output_format: Literal["json", "csv"] = "json"
    mutate: bool = False

    @field_validator("orders")
    @classmethod
    def _orders_in_range(cls, value: list[int]) -> list[int]:
        for p in value:
            if not MIN_ORDER <= p <= MAX_ORDER:
                msg = f"Order p={p} is out of range [{MIN_ORDER}, {MAX_ORDER}]"
                raise ValueError(msg)
        return sorted(set(value))

    @model_validator(mode="after")
    def _guard_fits_window(self) -> RunConfig:
        if self.guard > self.window_m:
            msg = f"guard={self.guard} exceeds window_m={self.window_m}"
            raise ValueError(msg)
        return self

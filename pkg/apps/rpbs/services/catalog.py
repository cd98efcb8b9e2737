"""Defining relations of the algebra plus the derived power-commutation families."""

from __future__ import annotations

from functools import cache
from typing import TYPE_CHECKING, Literal

from pydantic import BaseModel, ConfigDict

from apps.rpbs.parsers import parse_relation
from apps.rpbs.services.algebra import (
    B_MINUS,
    B_PLUS,
    F_MINUS,
    F_PLUS,
    FAElement,
    NamedOperator,
    format_coefficient,
    named_operator,
)

if TYPE_CHECKING:
    from collections.abc import Callable

RelationGroup = Literal["mixed", "pure", "bracket", "family", "lemma"]

# Trilinear relations mixing the paraboson with the parafermion, row by row.
MIXED_RELATIONS = (
    "[{b+,b+},f-] = 0",
    "[[f+,f-],b-] = 0",
    "[{b+,b+},f+] = 0",
    "[{b-,b-},f+] = 0",
    "[{b-,b-},f-] = 0",
    "[{b+,b-},f-] = 0",
    "[{f-,b-},b-] = 0",
    "[{f-,b+},b+] = 0",
    "[{f-,b+},b-] = -2 f-",
    "{{b-,f+},f-} = 2 b-",
    "[{f+,b+},b+] = 0",
    "[{f+,b-},b-] = 0",
    "[{b-,f-},b+] = 2 f-",
    "{{f-,b-},f+} = 2 b-",
    "{{b-,f-},f-} = 0",
    "{{b-,f+},f+} = 0",
    "[{b-,b+},f+] = 0",
    "[[f-,f+],b+] = 0",
    "{{b+,f+},f+} = 0",
    "{{b+,f-},f-} = 0",
    "[{f+,b-},b+] = 2 f+",
    "[{b+,f+},b-] = -2 f+",
    "{{b+,f-},f+} = 2 b+",
    "{{f+,b+},f-} = 2 b+",
)

# Trilinear relations of each degree of freedom on its own.
PURE_RELATIONS = (
    "[b-,{b+,b-}] = 2 b-",
    "[b+,{b+,b+}] = 0",
    "[b+,{b-,b-}] = -4 b-",
    "[f-,[f+,f-]] = 2 f-",
    "[b-,{b-,b-}] = 0",
    "[b-,{b+,b+}] = 4 b+",
    "[b+,{b-,b+}] = -2 b+",
    "[f+,[f-,f+]] = 2 f+",
)

# Brackets of R+ with the generators.
BRACKET_RELATIONS = (
    "[R+,b-] = -f+",
    "{R+,f-} = b+",
    "[R+,b+] = 0",
    "{R+,f+} = 0",
)

LEMMA_RELATIONS = (
    "[f-,(b+)^2] = 0",
    "[f+,(b+)^2] = 0",
    "(R+)^2 = 0",
)


class RelationEntry(BaseModel):
    """One identity, stored so that it reads element = 0."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    element: FAElement
    source: str
    group: RelationGroup

    def as_export(self) -> dict[str, object]:
        """JSON-ready view: words as generator lists, coefficients as polynomials in p."""
        return {
            "name": self.name,
            "source": self.source,
            "group": self.group,
            "terms": [
                {"word": [g.value for g in word_key], "coefficient": format_coefficient(self.element.coefficient(word_key))}
                for word_key in self.element.words()
            ],
        }


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def _power(base: FAElement, exponent: int) -> FAElement:
    """base^exponent, with negative exponents mapped to zero (they only occur with a zero coefficient)."""
    if exponent < 0:
        return FAElement.zero()
    return base**exponent


def b_minus_past_f_plus(k: int) -> FAElement:
    """b- (f+)^k - (-1)^(k+1) ((k-1) (f+)^k b- + k (f+)^(k-1) b- f+)."""
    rhs = _sign(k + 1) * ((k - 1) * _power(F_PLUS, k) * B_MINUS + k * _power(F_PLUS, k - 1) * B_MINUS * F_PLUS)
    return B_MINUS * _power(F_PLUS, k) - rhs


def b_minus_past_b_plus(m: int) -> FAElement:
    """b- (b+)^m rewritten with b- moved right; the form depends on the parity of m."""
    if m % 2 == 0:
        rhs = _power(B_PLUS, m) * B_MINUS + m * _power(B_PLUS, m - 1)
    else:
        rhs = _power(B_PLUS, m - 1) * B_MINUS * B_PLUS + (m - 1) * _power(B_PLUS, m - 1)
    return B_MINUS * _power(B_PLUS, m) - rhs


def f_plus_past_b_plus(n: int) -> FAElement:
    """f+ (b+)^n = (b+)^n f+ for even n and (b+)^(n-1) f+ b+ for odd n."""
    if n % 2 == 0:
        rhs = _power(B_PLUS, n) * F_PLUS
    else:
        rhs = _power(B_PLUS, n - 1) * F_PLUS * B_PLUS
    return F_PLUS * _power(B_PLUS, n) - rhs


def b_plus_past_f_plus(k: int) -> FAElement:
    """b+ (f+)^k = (-f+)^k b+ + 2k R+ (f+)^(k-1)."""
    r_plus = named_operator(NamedOperator.R_PLUS)
    rhs = _sign(k) * _power(F_PLUS, k) * B_PLUS + 2 * k * r_plus * _power(F_PLUS, k - 1)
    return B_PLUS * _power(F_PLUS, k) - rhs


def f_minus_past_f_plus(m: int) -> FAElement:
    """f- (f+)^m = -(m-1) (f+)^m f- + m (f+)^(m-1) f- f+ - m(m-1) (f+)^(m-1)."""
    rhs = (
        -(m - 1) * _power(F_PLUS, m) * F_MINUS
        + m * _power(F_PLUS, m - 1) * F_MINUS * F_PLUS
        - m * (m - 1) * _power(F_PLUS, m - 1)
    )
    return F_MINUS * _power(F_PLUS, m) - rhs


def f_minus_past_b_plus(n: int) -> FAElement:
    """f- (b+)^n = (b+)^n f- for even n and (b+)^(n-1) f- b+ for odd n."""
    if n % 2 == 0:
        rhs = _power(B_PLUS, n) * F_MINUS
    else:
        rhs = _power(B_PLUS, n - 1) * F_MINUS * B_PLUS
    return F_MINUS * _power(B_PLUS, n) - rhs


FAMILIES: dict[str, tuple[str, Callable[[int], FAElement]]] = {
    "b-(f+)^k": ("power.b_minus_f_plus", b_minus_past_f_plus),
    "b-(b+)^m": ("power.b_minus_b_plus", b_minus_past_b_plus),
    "f+(b+)^n": ("power.f_plus_b_plus", f_plus_past_b_plus),
    "b+(f+)^k": ("power.b_plus_f_plus", b_plus_past_f_plus),
    "f-(f+)^m": ("power.f_minus_f_plus", f_minus_past_f_plus),
    "f-(b+)^n": ("power.f_minus_b_plus", f_minus_past_b_plus),
}


@cache
def _fixed_entries() -> tuple[RelationEntry, ...]:
    entries: list[RelationEntry] = []
    sources: tuple[tuple[tuple[str, ...], str, RelationGroup], ...] = (
        (MIXED_RELATIONS, "trilinear.mixed", "mixed"),
        (PURE_RELATIONS, "trilinear.pure", "pure"),
        (BRACKET_RELATIONS, "raising.brackets", "bracket"),
    )
    for texts, source, group in sources:
        for index, text in enumerate(texts, 1):
            entries.append(RelationEntry(name=text, element=parse_relation(text), source=f"{source}.{index}", group=group))
    return tuple(entries)


@cache
def family_entries(bound: int) -> tuple[RelationEntry, ...]:
    """Parametric families instantiated for exponents 0..bound, plus the fixed lemma identities."""
    entries: list[RelationEntry] = []
    for label, (source, build) in FAMILIES.items():
        variable = label[-1]
        for exponent in range(bound + 1):
            entries.append(
                RelationEntry(name=f"{label} at {variable}={exponent}", element=build(exponent), source=source, group="family")
            )
    for index, text in enumerate(LEMMA_RELATIONS, 1):
        entries.append(RelationEntry(name=text, element=parse_relation(text), source=f"lemma.{index}", group="lemma"))
    return tuple(entries)


def relation_catalog(family_bound: int | None = None) -> list[RelationEntry]:
    """All relations in element = 0 form.

    Args:
        family_bound: Largest exponent for the parametric families; None leaves them out

    Returns:
        The 24 mixed and 8 pure trilinear relations, the 4 R+ brackets, then the families
    """
    entries = list(_fixed_entries())
    if family_bound is not None:
        entries.extend(family_entries(family_bound))
    return entries


def mutated(entry: RelationEntry) -> RelationEntry:
    """Copy of entry with a deliberately wrong extra term, for harness self-tests."""
    extra = entry.element.words()[0] if not entry.element.is_zero() else ()
    corrupted = entry.element + FAElement({extra: 1})
    return RelationEntry(name=f"{entry.name} (mutated)", element=corrupted, source=entry.source, group=entry.group)


def catalog_export(family_bound: int | None = None) -> list[dict[str, object]]:
    """Catalog rows for documentation tooling."""
    return [entry.as_export() for entry in relation_catalog(family_bound)]

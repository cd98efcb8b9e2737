"""Fock-like representation of order p: canonical basis, generator actions, cyclicity."""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

from loguru import logger
from pydantic import BaseModel

from apps.rpbs.exceptions import InternalInconsistency, WindowOverflow
from apps.rpbs.models import VACUUM, BasisKet, Generator, RepParams, State, Tag
from apps.rpbs.services.exact import rational_matrix

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

Word = tuple[Generator, ...]


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def canonicalize(m: int, n: int, tag: Tag, coefficient: Fraction | int, params: RepParams) -> State:
    """Rewrite c|m,n,tag> in the canonical basis.

    Args:
        m: Paraboson index
        n: Parafermion index
        tag: Alpha or beta
        coefficient: Scalar in front of the raw label
        params: Representation parameters

    Returns:
        The canonical state equal to the raw vector

    Raises:
        InternalInconsistency: If m or n is negative
    """
    if m < 0 or n < 0:
        msg = f"Raw label ({m}, {n}, {tag.value}) has a negative index"
        raise InternalInconsistency(msg)
    p = params.p
    if coefficient == 0 or n > p:
        return State.zero()
    if tag is Tag.BETA:
        if m == 0 or n == 0:
            return State.zero()
        if n == p:
            return State.ket(BasisKet(m, p, Tag.ALPHA), Fraction(coefficient) / p)
    return State.ket(BasisKet(m, n, tag), coefficient)


def is_canonical(ket: BasisKet, params: RepParams) -> bool:
    """True when ket is one of the basis labels kept by canonicalize."""
    if ket.m < 0 or not 0 <= ket.n <= params.p:
        return False
    if ket.tag is Tag.BETA:
        return ket.m >= 1 and 1 <= ket.n <= params.p - 1
    return True


def _b_minus(ket: BasisKet, p: int) -> list[tuple[int, int, Tag, int]]:
    m, n = ket.m, ket.n
    if m == 0:
        return []
    if ket.tag is Tag.ALPHA:
        if m % 2 == 0:
            return [
                (m - 1, n, Tag.ALPHA, _sign(n) * m),
                (m - 1, n, Tag.BETA, -2 * _sign(n) * n * m),
            ]
        return [
            (m - 1, n, Tag.ALPHA, -_sign(n) * (2 * n - m - (p - 1))),
            (m - 1, n, Tag.BETA, -2 * _sign(n) * n * (m - 1)),
        ]
    if m % 2 == 0:
        return [
            (m - 1, n, Tag.ALPHA, -_sign(n)),
            (m - 1, n, Tag.BETA, _sign(n) * (2 * n - m - p)),
        ]
    return [
        (m - 1, n, Tag.ALPHA, -_sign(n)),
        (m - 1, n, Tag.BETA, -_sign(n) * (m - 1)),
    ]


def _b_plus(ket: BasisKet, _p: int) -> list[tuple[int, int, Tag, int]]:
    m, n = ket.m, ket.n
    if ket.tag is Tag.ALPHA:
        return [
            (m + 1, n, Tag.ALPHA, _sign(n)),
            (m + 1, n, Tag.BETA, -_sign(n) * 2 * n),
        ]
    return [(m + 1, n, Tag.BETA, -_sign(n))]


def _f_minus(ket: BasisKet, p: int) -> list[tuple[int, int, Tag, int]]:
    m, n = ket.m, ket.n
    if n == 0:
        return []
    if ket.tag is Tag.ALPHA:
        return [(m, n - 1, Tag.ALPHA, n * (p + 1 - n))]
    return [
        (m, n - 1, Tag.ALPHA, 1),
        (m, n - 1, Tag.BETA, (n - 1) * (p - n)),
    ]


def _f_plus(ket: BasisKet, p: int) -> list[tuple[int, int, Tag, int]]:
    if ket.n >= p:
        return []
    return [(ket.m, ket.n + 1, ket.tag, 1)]


_RULES: dict[Generator, Callable[[BasisKet, int], list[tuple[int, int, Tag, int]]]] = {
    Generator.B_MINUS: _b_minus,
    Generator.B_PLUS: _b_plus,
    Generator.F_MINUS: _f_minus,
    Generator.F_PLUS: _f_plus,
}


def act(generator: Generator, state: State, params: RepParams) -> State:
    """Apply one generator to a canonical state.

    Args:
        generator: Generator to apply
        state: Canonical input state
        params: Representation parameters (p and the m cutoff)

    Returns:
        Canonical image state

    Raises:
        WindowOverflow: If b+ is applied to a ket already at the cutoff
    """
    rule = _RULES[generator]
    parts: list[tuple[Fraction, State]] = []
    for ket, coefficient in state.terms.items():
        if generator is Generator.B_PLUS and ket.m + 1 > params.window_m:
            raise WindowOverflow(ket, params.window_m)
        for m, n, tag, factor in rule(ket, params.p):
            if factor:
                parts.append((coefficient, canonicalize(m, n, tag, factor, params)))
    return State.combine(parts)


def apply_word(word: Sequence[Generator], state: State, params: RepParams) -> State:
    """Apply a word right to left: the last generator acts first."""
    result = state
    for generator in reversed(word):
        if not result:
            break
        result = act(generator, result, params)
    return result


def block_dimension(m: int, n: int, p: int) -> int:
    """Dimension of V_{m,n}: 2 in the bulk, 1 on the edges m=0, n=0, n=p, 0 beyond n=p."""
    if m < 0 or n < 0 or n > p:
        return 0
    if m == 0 or n in (0, p):
        return 1
    return 2


def block_kets(m: int, n: int, p: int) -> list[BasisKet]:
    """Canonical kets spanning V_{m,n}, alpha first."""
    dimension = block_dimension(m, n, p)
    if dimension == 0:
        return []
    if dimension == 1:
        return [BasisKet(m, n, Tag.ALPHA)]
    return [BasisKet(m, n, Tag.ALPHA), BasisKet(m, n, Tag.BETA)]


def enumerate_basis(params: RepParams, max_m: int | None = None) -> list[BasisKet]:
    """All canonical kets with m <= max_m (default: the window), ordered by (m, n, tag).

    Args:
        params: Representation parameters
        max_m: Optional tighter cutoff, typically window_m minus a guard band

    Returns:
        Ordered list of basis kets
    """
    top = params.window_m if max_m is None else max_m
    return [ket for m in range(top + 1) for n in range(params.p + 1) for ket in block_kets(m, n, params.p)]


def beta_from_vacuum(m: int, n: int, params: RepParams) -> State:
    """Evaluate (f+)^(n-1) (b+)^(m-1) R+ |0> through generator actions."""
    vacuum = State.vacuum()
    r_plus = State.combine(
        (
            (Fraction(1, 2), apply_word((Generator.B_PLUS, Generator.F_PLUS), vacuum, params)),
            (Fraction(1, 2), apply_word((Generator.F_PLUS, Generator.B_PLUS), vacuum, params)),
        )
    )
    creators = (Generator.F_PLUS,) * (n - 1) + (Generator.B_PLUS,) * (m - 1)
    return apply_word(creators, r_plus, params)


class CyclicityReport(BaseModel):
    """Outcome of the reachability check behind irreducibility."""

    p: int
    window_m: int
    guard: int
    cyclic: bool
    downward_witnesses: dict[str, list[str]]
    upward_witnesses: dict[str, list[list[str]]]
    stuck: str | None = None


def _coordinates(state: State, kets: Sequence[BasisKet]) -> list[Fraction]:
    return [state.coefficient(ket) for ket in kets]


def _find_lowering_word(ket: BasisKet, params: RepParams) -> Word | None:
    """Depth-first search over annihilator words for one with a nonzero vacuum component."""
    lowering = (Generator.B_MINUS, Generator.F_MINUS)
    stack: list[tuple[State, Word]] = [(State.ket(ket), ())]
    while stack:
        state, word = stack.pop()
        if state.coefficient(VACUUM) != 0:
            return word
        for generator in lowering:
            image = act(generator, state, params)
            if image:
                stack.append((image, (generator, *word)))
    return None


def cyclicity_check(params: RepParams, guard: int) -> CyclicityReport:
    """Check that every in-guard ket reaches |0> and that |0> generates every in-guard V_{m,n}.

    Args:
        params: Representation parameters
        guard: Margin below the window cutoff

    Returns:
        Report with witness words (printed left to right, rightmost acts first)

    Raises:
        ValueError: If guard exceeds the window
    """
    if guard > params.window_m:
        msg = f"Guard {guard} exceeds window_m={params.window_m}"
        raise ValueError(msg)
    top = params.window_m - guard
    p = params.p
    downward: dict[str, list[str]] = {}
    for ket in enumerate_basis(params, top):
        word = _find_lowering_word(ket, params)
        if word is None:
            logger.warning(f"Cyclicity: {ket} never reaches the vacuum (p={p})")
            return CyclicityReport(
                p=p, window_m=params.window_m, guard=guard, cyclic=False, downward_witnesses=downward, upward_witnesses={}, stuck=ket.label
            )
        downward[ket.label] = [g.value for g in word]

    # spanning sets per V_{m,n}, built from the vacuum in order of increasing m + n
    spans: dict[tuple[int, int], list[tuple[Word, State]]] = {(0, 0): [((), State.vacuum())]}
    upward: dict[str, list[list[str]]] = {"0,0": [[]]}
    for total in range(1, top + p + 1):
        for m in range(max(0, total - p), min(total, top) + 1):
            n = total - m
            kets = block_kets(m, n, p)
            candidates: list[tuple[Word, State]] = []
            if m >= 1:
                candidates += [((Generator.B_PLUS, *w), act(Generator.B_PLUS, s, params)) for w, s in spans.get((m - 1, n), [])]
            if n >= 1:
                candidates += [((Generator.F_PLUS, *w), act(Generator.F_PLUS, s, params)) for w, s in spans.get((m, n - 1), [])]
            chosen: list[tuple[Word, State]] = []
            for word, state in candidates:
                trial = chosen + [(word, state)]
                columns = [_coordinates(s, kets) for _, s in trial]
                if rational_matrix(columns).rank() == len(trial):
                    chosen = trial
                if len(chosen) == len(kets):
                    break
            if len(chosen) < len(kets):
                logger.warning(f"Cyclicity: creators from |0> span only {len(chosen)} of {len(kets)} dimensions of V_{m},{n}")
                return CyclicityReport(
                    p=p,
                    window_m=params.window_m,
                    guard=guard,
                    cyclic=False,
                    downward_witnesses=downward,
                    upward_witnesses=upward,
                    stuck=f"{m},{n}",
                )
            spans[(m, n)] = chosen
            upward[f"{m},{n}"] = [[g.value for g in word] for word, _ in chosen]
    logger.debug(f"Cyclicity holds for p={p}, window_m={params.window_m}, guard={guard}")
    return CyclicityReport(p=p, window_m=params.window_m, guard=guard, cyclic=True, downward_witnesses=downward, upward_witnesses=upward)

"""Inner product induced by (b-)^dagger = b+, (f-)^dagger = f+ and <0|0> = 1."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import TYPE_CHECKING

import numpy as np
import sympy
from loguru import logger
from pydantic import BaseModel, ConfigDict

from apps.rpbs.exceptions import InternalInconsistency, PositivityFailure
from apps.rpbs.models import VACUUM, BasisKet, Generator, RepParams, State
from apps.rpbs.services.algebra import evaluate
from apps.rpbs.services.exact import rational_matrix, to_fraction, to_rational
from apps.rpbs.services.fock import act, block_kets, enumerate_basis

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

    from apps.rpbs.services.algebra import FAElement


class GramBlock(BaseModel):
    """Exact Gram matrix of the canonical basis of one V_{m,n}."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    p: int
    m: int
    n: int
    kets: list[BasisKet]
    matrix: sympy.ImmutableMatrix

    def entry(self, row: BasisKet, column: BasisKet) -> Fraction:
        return to_fraction(self.matrix[self.kets.index(row), self.kets.index(column)])

    def leading_minors(self) -> list[Fraction]:
        return leading_minors(self.matrix)

    def as_export(self) -> dict[str, object]:
        """JSON-ready view with entries spelled numerator/denominator."""
        return {
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "basis": [ket.label for ket in self.kets],
            "entries": [[_spell(to_fraction(value)) for value in self.matrix.row(i)] for i in range(self.matrix.rows)],
        }


def _spell(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _coordinates(state: State, kets: Sequence[BasisKet]) -> list[Fraction]:
    return [state.coefficient(ket) for ket in kets]


def vacuum_column_norm(n: int, p: int) -> int:
    """<0,n,a|0,n,a> = prod_{j<n} (j+1)(p-j), from f-(f+)^n acting on |0>."""
    return prod((j + 1) * (p - j) for j in range(n))


@lru_cache(maxsize=4096)
def _gram(p: int, m: int, n: int) -> GramBlock:
    kets = block_kets(m, n, p)
    if not kets:
        msg = f"V_{m},{n} is empty for p={p}"
        raise ValueError(msg)
    if m == 0:
        matrix = sympy.ImmutableMatrix([[vacuum_column_norm(n, p)]])
        return GramBlock(p=p, m=m, n=n, kets=kets, matrix=matrix)

    params = RepParams(p=p, window_m=m)
    # images g u of lower-block kets u; b+ from V_{m-1,n} first, f+ from V_{m,n-1} when b+ alone is short
    candidates = [(Generator.B_PLUS, ket) for ket in block_kets(m - 1, n, p)]
    if n >= 1:
        candidates += [(Generator.F_PLUS, ket) for ket in block_kets(m, n - 1, p)]
    chosen: list[tuple[Generator, BasisKet]] = []
    columns: list[list[Fraction]] = []
    for generator, ket in candidates:
        column = _coordinates(act(generator, State.ket(ket), params), kets)
        if rational_matrix([*columns, column]).rank() == len(columns) + 1:
            chosen.append((generator, ket))
            columns.append(column)
        if len(chosen) == len(kets):
            break
    if len(chosen) < len(kets):
        msg = f"Raising images span only {len(chosen)} of {len(kets)} dimensions of V_{m},{n} at p={p}"
        raise InternalInconsistency(msg)

    # <g_i u_i, g_j u_j> = <u_i, g_i^dagger g_j u_j>, evaluated on already known lower blocks
    images = rational_matrix(columns).T
    pairing = sympy.zeros(len(chosen), len(chosen))
    for i, (g_i, u_i) in enumerate(chosen):
        for j, (g_j, u_j) in enumerate(chosen):
            lowered = act(g_i.adjoint, act(g_j, State.ket(u_j), params), params)
            pairing[i, j] = to_rational(inner(State.ket(u_i), lowered, params))
    inverse = images.inv()
    matrix = sympy.ImmutableMatrix(inverse.T * pairing * inverse)
    logger.debug(f"Gram block V_{m},{n} at p={p}: {matrix.tolist()}")
    return GramBlock(p=p, m=m, n=n, kets=kets, matrix=matrix)


def gram_block(params: RepParams, m: int, n: int) -> GramBlock:
    """Exact Gram matrix of V_{m,n}.

    V_{0,n} is fixed by the f-pair alone. For m >= 1 the block is reached from
    lower blocks by b+ (and f+ where b+ images are not enough); the pairing of the
    images is reduced by adjointness to lower blocks and transported back.

    Args:
        params: Representation parameters
        m: Paraboson index, at most window_m
        n: Parafermion index in [0, p]

    Returns:
        Symmetric exact Gram block

    Raises:
        ValueError: If (m, n) is outside the window or the block is empty
        InternalInconsistency: If the raising images fail to span the block
    """
    if not 0 <= m <= params.window_m:
        msg = f"m={m} is outside the window [0, {params.window_m}]"
        raise ValueError(msg)
    return _gram(params.p, m, n)


def inner(left: State, right: State, params: RepParams) -> Fraction:
    """Bilinear extension of the Gram blocks; kets from different V_{m,n} are orthogonal."""
    total = Fraction(0)
    for ket_a, coefficient_a in left.terms.items():
        for ket_b, coefficient_b in right.terms.items():
            if (ket_a.m, ket_a.n) != (ket_b.m, ket_b.n):
                continue
            total += coefficient_a * coefficient_b * _gram(params.p, ket_a.m, ket_a.n).entry(ket_a, ket_b)
    return total


def norm_squared(state: State, params: RepParams) -> Fraction:
    return inner(state, state, params)


def leading_minors(matrix: sympy.MatrixBase) -> list[Fraction]:
    """Exact leading principal minors, order 1 first."""
    return [to_fraction(matrix[:order, :order].det()) for order in range(1, matrix.rows + 1)]


def cholesky_factor(gram: sympy.MatrixBase) -> NDArray[np.float64]:
    """Floating lower-triangular L with L L^T = gram, after an exact positivity verdict.

    Raises:
        PositivityFailure: If a leading principal minor is not strictly positive
    """
    for order, minor in enumerate(leading_minors(gram), 1):
        if minor <= 0:
            raise PositivityFailure(order, minor)
    lower, diagonal = sympy.Matrix(gram).LDLdecomposition(hermitian=True)
    lower_float = np.array([[float(value) for value in lower.row(i)] for i in range(lower.rows)], dtype=np.float64)
    scale = np.sqrt(np.array([float(diagonal[i, i]) for i in range(diagonal.rows)], dtype=np.float64))
    return lower_float * scale


class Orthonormalization(BaseModel):
    """Exact Gram of a set of kets plus its floating Cholesky factor."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kets: list[BasisKet]
    gram: sympy.ImmutableMatrix
    factor: np.ndarray
    condition: float


def gram_matrix(kets: Sequence[BasisKet], params: RepParams) -> sympy.ImmutableMatrix:
    """Exact Gram matrix of an ordered list of kets (block diagonal over V_{m,n})."""
    size = len(kets)
    entries = [[to_rational(inner(State.ket(kets[i]), State.ket(kets[j]), params)) for j in range(size)] for i in range(size)]
    return sympy.ImmutableMatrix(entries)


def orthonormalize(params: RepParams, kets: Sequence[BasisKet]) -> Orthonormalization:
    """Cholesky data for a block: one V_{m,n} or a fixed-K slice.

    Args:
        params: Representation parameters
        kets: Block basis in export order

    Returns:
        Exact Gram, factor L with G = L L^T and the 2-norm condition number of G

    Raises:
        PositivityFailure: With the first non-positive leading minor
    """
    gram = gram_matrix(kets, params)
    factor = cholesky_factor(gram)
    condition = float(np.linalg.cond(factor @ factor.T))
    return Orthonormalization(kets=list(kets), gram=gram, factor=factor, condition=condition)


class PositivityReport(BaseModel):
    p: int
    window_m: int
    positive: bool
    blocks_checked: int
    minors: dict[str, list[str]]
    failure: str | None = None


def positivity_check(params: RepParams) -> PositivityReport:
    """Exact symmetry and leading-minor check for every Gram block in the window."""
    minors: dict[str, list[str]] = {}
    for m in range(params.window_m + 1):
        for n in range(params.p + 1):
            block = gram_block(params, m, n)
            values = block.leading_minors()
            minors[f"{m},{n}"] = [str(value) for value in values]
            if block.matrix != block.matrix.T or any(value <= 0 for value in values):
                logger.warning(f"Gram block V_{m},{n} at p={params.p} is not positive definite: {values}")
                return PositivityReport(
                    p=params.p, window_m=params.window_m, positive=False, blocks_checked=len(minors), minors=minors, failure=f"{m},{n}"
                )
    return PositivityReport(p=params.p, window_m=params.window_m, positive=True, blocks_checked=len(minors), minors=minors)


class AdjointnessReport(BaseModel):
    p: int
    holds: bool
    pairs_checked: int
    failure: str | None = None


def adjointness_check(params: RepParams) -> AdjointnessReport:
    """<x u, v> = <u, x^dagger v> for x in {b+, f+} and every pair of kets with m <= window_m - 1.

    Raises:
        ValueError: If window_m < 2
    """
    if params.window_m < 2:
        msg = f"Adjointness check needs window_m >= 2, got {params.window_m}"
        raise ValueError(msg)
    kets = enumerate_basis(params, params.window_m - 1)
    checked = 0
    for raising in (Generator.B_PLUS, Generator.F_PLUS):
        for u in kets:
            raised = act(raising, State.ket(u), params)
            for v in kets:
                lhs = inner(raised, State.ket(v), params)
                rhs = inner(State.ket(u), act(raising.adjoint, State.ket(v), params), params)
                checked += 1
                if lhs != rhs:
                    failure = f"<{raising.value} {u}, {v}> = {lhs} but <{u}, {raising.adjoint.value} {v}> = {rhs}"
                    logger.warning(f"Adjointness fails at p={params.p}: {failure}")
                    return AdjointnessReport(p=params.p, holds=False, pairs_checked=checked, failure=failure)
    return AdjointnessReport(p=params.p, holds=True, pairs_checked=checked)


def route_inner(left: FAElement, right: FAElement, params: RepParams) -> Fraction:
    """<0| left^dagger right |0> from the action alone, with no Gram block involved."""
    window = params.with_window(max(params.window_m, left.max_word_length() + right.max_word_length()))
    image = evaluate(left.dagger() * right, State.vacuum(), window)
    return image.coefficient(VACUUM)


def block_inner(left: FAElement, right: FAElement, params: RepParams) -> Fraction:
    """<left|0>, right|0>> through the Gram blocks, to compare with route_inner."""
    window = params.with_window(max(params.window_m, left.max_word_length(), right.max_word_length()))
    return inner(evaluate(left, State.vacuum(), window), evaluate(right, State.vacuum(), window), window)

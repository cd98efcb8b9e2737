"""Invariant blocks, exact materialization, the T operator and the generalized Jaynes-Cummings Hamiltonian."""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg
import sympy
from loguru import logger
from pydantic import BaseModel, ConfigDict

from apps.rpbs.constants import HERMITICITY_TOLERANCE, UNITARITY_TOLERANCE
from apps.rpbs.exceptions import BlockEscape
from apps.rpbs.models import BasisKet, HamiltonianParams, RepParams, State
from apps.rpbs.services.algebra import NamedOperator, commutator, evaluate, named_operator
from apps.rpbs.services.exact import to_fraction, to_rational
from apps.rpbs.services.fock import block_kets
from apps.rpbs.services.metric import inner, orthonormalize

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

    from apps.rpbs.services.algebra import FAElement

LevelWeights = Callable[[int, int], tuple[Fraction | float, Fraction | float]]


class KBlock(BaseModel):
    """Kets of total excitation K = m + n, in basis order."""

    K: int
    kets: list[BasisKet]

    @property
    def dim(self) -> int:
        return len(self.kets)


def k_block(p: int, K: int) -> KBlock:
    """All canonical kets with m + n = K.

    Raises:
        ValueError: If K is negative
    """
    if K < 0:
        msg = f"Total excitation K must be nonnegative, got {K}"
        raise ValueError(msg)
    kets = sorted(ket for n in range(min(K, p) + 1) for ket in block_kets(K - n, n, p))
    return KBlock(K=K, kets=kets)


def k_block_window(params: RepParams, K: int) -> RepParams:
    """Working window for K-block computations: H and its commutators raise m by at most two."""
    return params.with_window(max(params.window_m, K + 2))


class BlockMatrix(BaseModel):
    """Matrix of an operator restricted to an invariant block; column j is the image of kets[j]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    kets: list[BasisKet]
    entries: sympy.ImmutableMatrix

    def to_float(self) -> NDArray[np.float64]:
        return np.array([[float(value) for value in row] for row in self.entries.tolist()], dtype=np.float64)

    def is_zero(self) -> bool:
        return bool(self.entries.is_zero_matrix)

    def is_diagonal(self) -> bool:
        return bool(self.entries.is_diagonal())

    def entry_strings(self) -> list[list[str]]:
        return [[str(to_fraction(value)) for value in row] for row in self.entries.tolist()]

    def as_export(self) -> dict[str, object]:
        """JSON-ready view; the basis header fixes the row and column order."""
        return {
            "block": self.label,
            "basis": [ket.label for ket in self.kets],
            "entries": self.entry_strings(),
        }


def materialize(element: FAElement, params: RepParams, kets: Sequence[BasisKet], label: str = "") -> BlockMatrix:
    """Exact matrix of element on the span of kets.

    Args:
        element: Operator
        params: Representation parameters; the window must cover the longest word
        kets: Block basis
        label: Block name used in exports

    Returns:
        Exact block matrix

    Raises:
        BlockEscape: If an image has a component outside the block
        WindowOverflow: If the window is too small for the element
    """
    index = {ket: position for position, ket in enumerate(kets)}
    entries = sympy.zeros(len(kets), len(kets))
    for column, ket in enumerate(kets):
        for image_ket, coefficient in evaluate(element, State.ket(ket), params):
            row = index.get(image_ket)
            if row is None:
                raise BlockEscape(ket, image_ket)
            entries[row, column] = to_rational(coefficient)
    return BlockMatrix(label=label, kets=list(kets), entries=sympy.ImmutableMatrix(entries))


class TBlock(BaseModel):
    m: int
    n: int
    matrix: list[list[str]]
    interchanges: bool


class TLadderReport(BaseModel):
    """Action of T on each V_{m,n} of the window."""

    p: int
    window_m: int
    preserving: bool
    interchange_found: bool
    blocks: list[TBlock]
    escape: str | None = None


def t_ladder_report(params: RepParams) -> TLadderReport:
    """Check that T maps every V_{m,n} with m <= window_m into itself and record its matrices.

    A 2-dimensional block interchanges when the matrix of T is not diagonal in the (alpha, beta) basis.

    Raises:
        ValueError: If window_m < 2
    """
    if params.window_m < 2:
        msg = f"T ladder report needs window_m >= 2, got {params.window_m}"
        raise ValueError(msg)
    t_operator = named_operator(NamedOperator.T)
    reach = t_operator.max_word_length()
    blocks: list[TBlock] = []
    for m in range(params.window_m + 1):
        working = params.with_window(m + reach)
        for n in range(params.p + 1):
            kets = block_kets(m, n, params.p)
            try:
                matrix = materialize(t_operator, working, kets, label=f"{m},{n}")
            except BlockEscape as e:
                logger.warning(f"T leaves V_{m},{n} at p={params.p}: {e}")
                return TLadderReport(
                    p=params.p, window_m=params.window_m, preserving=False, interchange_found=False, blocks=blocks, escape=str(e)
                )
            blocks.append(
                TBlock(
                    m=m,
                    n=n,
                    matrix=matrix.entry_strings(),
                    interchanges=len(kets) == 2 and not matrix.is_diagonal(),
                )
            )
    return TLadderReport(
        p=params.p,
        window_m=params.window_m,
        preserving=True,
        interchange_found=any(block.interchanges for block in blocks),
        blocks=blocks,
    )


def hamiltonian(h: HamiltonianParams) -> FAElement:
    """omega_b Nb + omega_f Nf + lambda (Q+ + Q-), expanded into words with p kept symbolic."""
    n_b = named_operator(NamedOperator.N_B)
    n_f = named_operator(NamedOperator.N_F)
    coupling = named_operator(NamedOperator.Q_PLUS) + named_operator(NamedOperator.Q_MINUS)
    return h.omega_b * n_b + h.omega_f * n_f + h.coupling * coupling


def _exact(value: Fraction | float) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(str(value))


def hamiltonian_block(
    params: RepParams,
    h: HamiltonianParams,
    K: int,
    level_weights: LevelWeights | None = None,
) -> BlockMatrix:
    """Exact matrix of H on the K-block.

    Args:
        params: Representation parameters
        h: Frequencies and coupling
        K: Total excitation
        level_weights: Optional (m, n) -> (omega_b, omega_f) replacing the constant frequencies
            on the diagonal part, where Nb and Nf act as m and n

    Returns:
        Exact block matrix
    """
    block = k_block(params.p, K)
    working = k_block_window(params, K)
    if level_weights is None:
        return materialize(hamiltonian(h), working, block.kets, label=f"K={K}")
    coupling = h.coupling * (named_operator(NamedOperator.Q_PLUS) + named_operator(NamedOperator.Q_MINUS))
    matrix = materialize(coupling, working, block.kets, label=f"K={K}")
    entries = sympy.Matrix(matrix.entries)
    for position, ket in enumerate(block.kets):
        omega_b, omega_f = level_weights(ket.m, ket.n)
        entries[position, position] += to_rational(_exact(omega_b) * ket.m + _exact(omega_f) * ket.n)
    return BlockMatrix(label=matrix.label, kets=matrix.kets, entries=sympy.ImmutableMatrix(entries))


def conservation_check(params: RepParams, h: HamiltonianParams, K: int) -> BlockMatrix:
    """[H, Nb + Nf] on the K-block; the zero matrix when H conserves m + n."""
    number = named_operator(NamedOperator.N_B) + named_operator(NamedOperator.N_F)
    return materialize(commutator(hamiltonian(h), number), k_block_window(params, K), k_block(params.p, K).kets, label=f"K={K}")


class SymmetricForm(BaseModel):
    """Block operator in an orthonormal basis: S = L^T M L^-T with G = L L^T."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kets: list[BasisKet]
    gram: sympy.ImmutableMatrix
    factor: np.ndarray
    matrix: np.ndarray
    asymmetry: float
    condition: float


def symmetric_form(block: BlockMatrix, params: RepParams) -> SymmetricForm:
    """Move a block matrix to the orthonormal basis of its Gram matrix.

    Raises:
        PositivityFailure: If the Gram matrix of the block is not positive definite
    """
    orthonormal = orthonormalize(params, block.kets)
    factor = orthonormal.factor
    transposed_inverse = scipy.linalg.solve_triangular(factor.T, np.eye(len(block.kets)), lower=False)
    matrix = factor.T @ block.to_float() @ transposed_inverse
    asymmetry = float(np.max(np.abs(matrix - matrix.T))) if matrix.size else 0.0
    if asymmetry > HERMITICITY_TOLERANCE:
        logger.warning(f"Block {block.label} is not symmetric in the orthonormal basis (residual {asymmetry:.3e})")
    return SymmetricForm(
        kets=block.kets, gram=orthonormal.gram, factor=factor, matrix=matrix, asymmetry=asymmetry, condition=orthonormal.condition
    )


class SpectrumResult(BaseModel):
    K: int
    p: int
    eigenvalues: list[float]
    basis: list[str]
    asymmetry: float
    condition: float


def spectrum(params: RepParams, h: HamiltonianParams, K: int, level_weights: LevelWeights | None = None) -> SpectrumResult:
    """Ascending eigenvalues of H on the K-block.

    Raises:
        PositivityFailure: Propagated from the Gram factorization
    """
    block = hamiltonian_block(params, h, K, level_weights)
    form = symmetric_form(block, params)
    symmetric = (form.matrix + form.matrix.T) / 2
    eigenvalues = scipy.linalg.eigh(symmetric, eigvals_only=True)
    logger.debug(f"Spectrum p={params.p} K={K}: {eigenvalues}")
    return SpectrumResult(
        K=K,
        p=params.p,
        eigenvalues=[float(value) for value in eigenvalues],
        basis=[ket.label for ket in block.kets],
        asymmetry=form.asymmetry,
        condition=form.condition,
    )


class TrajectoryPoint(BaseModel):
    time: float
    coefficients: dict[str, complex]
    norm: float
    populations: dict[str, float]


class Trajectory(BaseModel):
    K: int
    p: int
    initial: str
    basis: list[str]
    points: list[TrajectoryPoint]
    max_norm_drift: float


def evolve(
    params: RepParams,
    h: HamiltonianParams,
    K: int,
    initial: State,
    times: Sequence[float],
    level_weights: LevelWeights | None = None,
) -> Trajectory:
    """Propagate initial under exp(-iHt) inside its K-block.

    The initial state is normalized in the Gram inner product first. Each point
    reports the coefficients in the canonical basis, the total norm and the norm
    of the component in each V_{m,n}.

    Args:
        params: Representation parameters
        h: Frequencies and coupling
        K: Total excitation of the block holding initial
        initial: Nonzero state supported on the K-block
        times: Sample times
        level_weights: Optional per-level frequencies

    Returns:
        Trajectory sampled at times

    Raises:
        ValueError: If initial is zero or leaves the K-block
    """
    block = hamiltonian_block(params, h, K, level_weights)
    outside = [ket for ket in initial.kets() if ket not in block.kets]
    if not initial or outside:
        msg = f"Initial state {initial} is not a nonzero vector of the K={K} block"
        raise ValueError(msg)
    norm_sq = inner(initial, initial, params)
    start = np.array([float(initial.coefficient(ket)) for ket in block.kets], dtype=np.complex128) / np.sqrt(float(norm_sq))

    form = symmetric_form(block, params)
    eigenvalues, eigenvectors = scipy.linalg.eigh((form.matrix + form.matrix.T) / 2)
    rotated = form.factor.T @ start
    components = eigenvectors.T @ rotated

    gram = np.array([[float(value) for value in row] for row in form.gram.tolist()], dtype=np.float64)
    levels = sorted({(ket.m, ket.n) for ket in block.kets})
    points: list[TrajectoryPoint] = []
    drift = 0.0
    for time in times:
        evolved = eigenvectors @ (np.exp(-1j * eigenvalues * time) * components)
        coefficients = scipy.linalg.solve_triangular(form.factor.T, evolved, lower=False)
        norm = float(np.vdot(evolved, evolved).real)
        drift = max(drift, abs(norm - 1.0))
        populations: dict[str, float] = {}
        for m, n in levels:
            mask = np.array([(ket.m, ket.n) == (m, n) for ket in block.kets])
            part = coefficients[mask]
            populations[f"{m},{n}"] = float(np.real(np.conj(part) @ gram[np.ix_(mask, mask)] @ part))
        points.append(
            TrajectoryPoint(
                time=float(time),
                coefficients={ket.label: complex(value) for ket, value in zip(block.kets, coefficients, strict=True)},
                norm=norm,
                populations=populations,
            )
        )
    if drift > UNITARITY_TOLERANCE:
        logger.warning(f"Norm drift {drift:.3e} exceeds {UNITARITY_TOLERANCE} for K={K}, p={params.p}")
    return Trajectory(
        K=K, p=params.p, initial=str(initial), basis=[ket.label for ket in block.kets], points=points, max_norm_drift=drift
    )

"""Unit tests for the Gram blocks, positivity and adjointness."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from apps.rpbs.exceptions import PositivityFailure
from apps.rpbs.models import BasisKet, Generator, RepParams, State, Tag
from apps.rpbs.services.algebra import B_PLUS, F_PLUS, FAElement, NamedOperator, named_operator, word
from apps.rpbs.services.metric import (
    adjointness_check,
    block_inner,
    cholesky_factor,
    gram_block,
    inner,
    norm_squared,
    orthonormalize,
    positivity_check,
    route_inner,
    vacuum_column_norm,
)

ALPHA_11 = BasisKet(1, 1, Tag.ALPHA)
BETA_11 = BasisKet(1, 1, Tag.BETA)

words = st.lists(st.sampled_from(list(Generator)), max_size=4)


@pytest.mark.unit
class TestGramBlocks:
    """Test the exact Gram recursion."""

    @pytest.mark.parametrize(("n", "p", "expected"), [(0, 3, 1), (1, 3, 3), (2, 3, 12), (3, 3, 36), (2, 2, 4)])
    def test_vacuum_column(self, n: int, p: int, expected: int) -> None:
        """Test <0,n|0,n> = prod (j+1)(p-j)."""
        assert vacuum_column_norm(n, p) == expected
        assert gram_block(RepParams(p=p, window_m=0), 0, n).entry(BasisKet(0, n), BasisKet(0, n)) == expected

    def test_block_11_at_order_two(self, params: RepParams) -> None:
        """Test G_{1,1} = [[4, 2], [2, 2]] at p=2."""
        block = gram_block(params, 1, 1)

        assert block.kets == [ALPHA_11, BETA_11]
        assert block.matrix == sympy.ImmutableMatrix([[4, 2], [2, 2]])
        assert block.leading_minors() == [Fraction(4), Fraction(4)]
        assert block.as_export()["entries"] == [["4/1", "2/1"], ["2/1", "2/1"]]

    def test_b_plus_on_vacuum(self) -> None:
        """Test <1,0|1,0> = <0|b- b+|0> = p."""
        assert gram_block(RepParams(p=5, window_m=1), 1, 0).matrix == sympy.ImmutableMatrix([[5]])

    def test_outside_window(self, params: RepParams) -> None:
        """Test blocks past the cutoff are rejected."""
        with pytest.raises(ValueError, match="outside the window"):
            gram_block(params, 9, 0)

    @pytest.mark.parametrize("p", [1, 2, 3, 4])
    def test_positive_definite(self, p: int) -> None:
        """Test every block with m <= 6 is symmetric with positive leading minors."""
        report = positivity_check(RepParams(p=p, window_m=6))

        assert report.positive
        assert report.blocks_checked == 7 * (p + 1)
        assert report.failure is None

    def test_inner_is_blockwise(self, params: RepParams) -> None:
        """Test kets from different V_{m,n} are orthogonal and the form is bilinear."""
        state = State({ALPHA_11: 1, BETA_11: -1})

        assert inner(State.ket(ALPHA_11), State.vacuum(), params) == 0
        assert norm_squared(state, params) == 4 - 2 * 2 + 2
        assert inner(state * 3, state, params) == 3 * norm_squared(state, params)

    @settings(max_examples=30, deadline=None)
    @given(
        left=st.dictionaries(st.sampled_from([ALPHA_11, BETA_11, BasisKet(2, 1), BasisKet(0, 2)]), st.integers(-4, 4), max_size=4),
        right=st.dictionaries(st.sampled_from([ALPHA_11, BETA_11, BasisKet(2, 1, Tag.BETA), BasisKet(2, 1)]), st.integers(-4, 4), max_size=4),
    )
    def test_inner_is_symmetric(self, left: dict[BasisKet, int], right: dict[BasisKet, int]) -> None:
        """Test <u, v> = <v, u>."""
        params = RepParams(p=2, window_m=4)

        assert inner(State(left), State(right), params) == inner(State(right), State(left), params)


@pytest.mark.unit
class TestCholesky:
    """Test the exact positivity verdict and the floating factor."""

    def test_factor(self) -> None:
        """Test L L^T reproduces the Gram block."""
        factor = cholesky_factor(sympy.Matrix([[4, 2], [2, 2]]))

        np.testing.assert_allclose(factor @ factor.T, [[4.0, 2.0], [2.0, 2.0]])
        assert factor[0, 1] == 0.0

    def test_indefinite(self) -> None:
        """Test the first non-positive leading minor is reported."""
        with pytest.raises(PositivityFailure) as excinfo:
            cholesky_factor(sympy.Matrix([[1, 2], [2, 1]]))

        assert excinfo.value.order == 2
        assert excinfo.value.minor == -3

    def test_orthonormalize(self, params: RepParams) -> None:
        """Test the factor of a K-slice and its condition number."""
        data = orthonormalize(params, [BasisKet(0, 2), ALPHA_11, BETA_11, BasisKet(2, 0)])

        assert data.gram[0, 1] == 0
        np.testing.assert_allclose(data.factor @ data.factor.T, np.array(data.gram.tolist(), dtype=float))
        assert data.condition >= 1.0


@pytest.mark.unit
class TestAdjointness:
    """Test (b-)^dagger = b+ and (f-)^dagger = f+ under the inner product."""

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_holds(self, p: int) -> None:
        """Test <x u, v> = <u, x^dagger v> on every in-guard pair."""
        report = adjointness_check(RepParams(p=p, window_m=4))

        assert report.holds
        assert report.pairs_checked > 0

    def test_needs_window(self) -> None:
        """Test the check needs room for one raising step."""
        with pytest.raises(ValueError, match="window_m >= 2"):
            adjointness_check(RepParams(p=2, window_m=1))

    @pytest.mark.parametrize(
        ("left", "right"),
        [
            (B_PLUS * F_PLUS, F_PLUS * B_PLUS),
            (B_PLUS * B_PLUS * F_PLUS, F_PLUS * B_PLUS * B_PLUS),
            (named_operator(NamedOperator.R_PLUS), named_operator(NamedOperator.R_PLUS)),
        ],
    )
    def test_route_independence(self, params: RepParams, left: FAElement, right: FAElement) -> None:
        """Test <w1|0>, w2|0>> = <0| w1^dagger w2 |0> whatever route builds the kets."""
        assert route_inner(left, right, params) == block_inner(left, right, params)

    @settings(max_examples=40, deadline=None)
    @given(left=words, right=words, p=st.integers(1, 4))
    def test_route_independence_random_words(self, left: list[Generator], right: list[Generator], p: int) -> None:
        """Test the two routes agree for arbitrary words, annihilators included."""
        params = RepParams(p=p, window_m=4)

        assert route_inner(word(left), word(right), params) == block_inner(word(left), word(right), params)

    def test_route_with_annihilators_on_the_left(self) -> None:
        """Test a left word of annihilators is raised past the right word without leaving the window."""
        lowering, raising = word([Generator.B_MINUS] * 4), word([Generator.B_PLUS] * 4)

        assert route_inner(lowering, raising, RepParams(p=2, window_m=4)) == 0

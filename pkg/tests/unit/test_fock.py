"""Unit tests for the canonical basis and the generator actions."""

from __future__ import annotations

from fractions import Fraction

import pytest

from apps.rpbs.exceptions import InternalInconsistency, WindowOverflow
from apps.rpbs.models import VACUUM, BasisKet, Generator, RepParams, State, Tag
from apps.rpbs.services.fock import (
    act,
    apply_word,
    beta_from_vacuum,
    block_dimension,
    block_kets,
    canonicalize,
    cyclicity_check,
    enumerate_basis,
    is_canonical,
)

ALPHA_11 = BasisKet(1, 1, Tag.ALPHA)
BETA_11 = BasisKet(1, 1, Tag.BETA)


@pytest.mark.unit
class TestCanonicalBasis:
    """Test block dimensions and the collapse of degenerate beta labels."""

    @pytest.mark.parametrize(
        ("m", "n", "p", "expected"),
        [
            (0, 0, 2, 1),
            (0, 2, 2, 1),
            (1, 0, 3, 1),
            (1, 1, 2, 2),
            (4, 2, 3, 2),
            (3, 3, 3, 1),
            (1, 3, 2, 0),
            (5, 1, 1, 1),
        ],
    )
    def test_block_dimension(self, m: int, n: int, p: int, expected: int) -> None:
        """Test dim V_{m,n} is 2 in the bulk and 1 on the edges."""
        assert block_dimension(m, n, p) == expected
        assert len(block_kets(m, n, p)) == expected

    def test_enumerate_small_window(self) -> None:
        """Test p=2 with window 1 has three vacuum-column kets and four at m=1."""
        kets = enumerate_basis(RepParams(p=2, window_m=1))

        assert len(kets) == 7
        assert kets[0] == VACUUM
        assert kets == sorted(kets)

    def test_order_one_has_no_beta(self, params_p1: RepParams) -> None:
        """Test p=1 leaves only alpha kets."""
        assert all(ket.tag is Tag.ALPHA for ket in enumerate_basis(params_p1))

    def test_beta_on_top_row_collapses(self, params: RepParams) -> None:
        """Test |m,p,beta> = (1/p)|m,p,alpha>."""
        state = canonicalize(3, 2, Tag.BETA, 1, params)

        assert state == State.ket(BasisKet(3, 2), Fraction(1, 2))

    @pytest.mark.parametrize(("m", "n"), [(0, 1), (2, 0), (0, 0)])
    def test_beta_on_edges_vanishes(self, params: RepParams, m: int, n: int) -> None:
        """Test beta labels with m=0 or n=0 are the zero vector."""
        assert not canonicalize(m, n, Tag.BETA, 1, params)

    def test_beyond_top_row_vanishes(self, params: RepParams) -> None:
        """Test labels with n > p are zero."""
        assert not canonicalize(1, 3, Tag.ALPHA, 5, params)

    def test_negative_index_is_internal_error(self, params: RepParams) -> None:
        """Test negative indices signal a bug in the action formulas."""
        with pytest.raises(InternalInconsistency, match="negative index"):
            canonicalize(-1, 0, Tag.ALPHA, 1, params)

    def test_is_canonical(self, params: RepParams) -> None:
        """Test which labels survive canonicalization."""
        assert is_canonical(BETA_11, params)
        assert not is_canonical(BasisKet(1, 2, Tag.BETA), params)
        assert not is_canonical(BasisKet(0, 1, Tag.BETA), params)
        assert not is_canonical(BasisKet(0, 3), params)


@pytest.mark.unit
class TestGeneratorActions:
    """Test the action of b+, b-, f+, f- on basis kets."""

    def test_b_minus_on_even_m(self, params: RepParams) -> None:
        """Test b-|2,1,alpha> = -2|1,1,alpha> + 4|1,1,beta> at p=2."""
        image = act(Generator.B_MINUS, State.ket(BasisKet(2, 1)), params)

        assert image == State({ALPHA_11: -2, BETA_11: 4})
        assert str(image) == "-2|1,1,α⟩ + 4|1,1,β⟩"

    def test_b_minus_kills_alpha_11(self, params: RepParams) -> None:
        """Test b-|1,1,alpha> = 0 at p=2 (2n - m - (p-1) vanishes)."""
        assert not act(Generator.B_MINUS, State.ket(ALPHA_11), params)

    def test_b_plus_on_vacuum(self, params: RepParams) -> None:
        """Test b+|0> = |1,0,alpha> with no beta part."""
        assert act(Generator.B_PLUS, State.vacuum(), params) == State.ket(BasisKet(1, 0))

    def test_b_plus_mixes_in_beta(self, params: RepParams) -> None:
        """Test b+|0,1,alpha> = -|1,1,alpha> + 2|1,1,beta>."""
        image = act(Generator.B_PLUS, State.ket(BasisKet(0, 1)), params)

        assert image == State({ALPHA_11: -1, BETA_11: 2})

    def test_f_plus_stops_at_top_row(self, params: RepParams) -> None:
        """Test f+ annihilates |m,p>."""
        assert not act(Generator.F_PLUS, State.ket(BasisKet(1, 2)), params)

    def test_f_minus_on_beta(self, params: RepParams) -> None:
        """Test f-|1,1,beta> = |1,0,alpha> at p=2."""
        assert act(Generator.F_MINUS, State.ket(BETA_11), params) == State.ket(BasisKet(1, 0))

    @pytest.mark.parametrize("p", [1, 2, 3, 5])
    def test_vacuum_conditions(self, p: int) -> None:
        """Test b-b+|0> = f-f+|0> = p|0> and b-f+|0> = f-b+|0> = 0."""
        params = RepParams(p=p, window_m=2)
        vacuum = State.vacuum()

        assert not act(Generator.B_MINUS, vacuum, params)
        assert not act(Generator.F_MINUS, vacuum, params)
        assert apply_word((Generator.B_MINUS, Generator.B_PLUS), vacuum, params) == vacuum * p
        assert apply_word((Generator.F_MINUS, Generator.F_PLUS), vacuum, params) == vacuum * p
        assert not apply_word((Generator.B_MINUS, Generator.F_PLUS), vacuum, params)
        assert not apply_word((Generator.F_MINUS, Generator.B_PLUS), vacuum, params)

    def test_words_act_right_to_left(self, params: RepParams) -> None:
        """Test (f+ b+)|0> differs from (b+ f+)|0>: the rightmost letter acts first."""
        vacuum = State.vacuum()

        assert apply_word((Generator.F_PLUS, Generator.B_PLUS), vacuum, params) == State.ket(ALPHA_11)
        assert apply_word((Generator.B_PLUS, Generator.F_PLUS), vacuum, params) == State({ALPHA_11: -1, BETA_11: 2})

    def test_window_overflow(self) -> None:
        """Test raising past the cutoff is an error, not a silent truncation."""
        params = RepParams(p=2, window_m=2)

        with pytest.raises(WindowOverflow) as excinfo:
            act(Generator.B_PLUS, State.ket(BasisKet(2, 1)), params)

        assert excinfo.value.window_m == 2
        assert excinfo.value.ket == BasisKet(2, 1)

    def test_action_is_linear(self, params: RepParams) -> None:
        """Test act distributes over sums of kets."""
        left, right = State.ket(BasisKet(2, 1)), State.ket(BETA_11, 3)
        for generator in Generator:
            assert act(generator, left + right, params) == act(generator, left, params) + act(generator, right, params)


@pytest.mark.unit
class TestBetaDefinition:
    """Test the beta kets built from R+ acting on the vacuum."""

    def test_r_plus_vacuum_is_beta(self, params: RepParams) -> None:
        """Test R+|0> = |1,1,beta> for p >= 2."""
        assert beta_from_vacuum(1, 1, params) == State.ket(BETA_11)

    @pytest.mark.parametrize(("m", "n"), [(1, 1), (2, 1), (3, 2), (4, 1)])
    def test_matches_stored_label(self, m: int, n: int) -> None:
        """Test (f+)^(n-1) (b+)^(m-1) R+ |0> reproduces the stored label at p=3."""
        params = RepParams(p=3, window_m=6)

        assert beta_from_vacuum(m, n, params) == canonicalize(m, n, Tag.BETA, 1, params)

    def test_top_row_at_order_one(self, params_p1: RepParams) -> None:
        """Test the n=p collapse when p=1: R+|0> = |1,1,alpha>."""
        assert beta_from_vacuum(1, 1, params_p1) == State.ket(BasisKet(1, 1))


@pytest.mark.unit
class TestCyclicity:
    """Test reachability from and to the vacuum."""

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_cyclic(self, p: int) -> None:
        """Test every in-guard ket reaches |0> and |0> generates every in-guard block."""
        report = cyclicity_check(RepParams(p=p, window_m=6), guard=2)

        assert report.cyclic
        assert report.stuck is None
        assert report.downward_witnesses["0,0,a"] == []
        assert "4,0" in report.upward_witnesses

    def test_two_dimensional_block_needs_two_words(self, params: RepParams) -> None:
        """Test V_{1,1} is spanned by two distinct creator words."""
        report = cyclicity_check(params, guard=2)

        assert len(report.upward_witnesses["1,1"]) == 2

    def test_guard_larger_than_window(self) -> None:
        """Test a guard wider than the window is rejected."""
        with pytest.raises(ValueError, match="exceeds window_m"):
            cyclicity_check(RepParams(p=2, window_m=2), guard=3)

"""Unit tests for the engine value types."""

from __future__ import annotations

from fractions import Fraction

import pytest
from pydantic import ValidationError

from apps.rpbs.models import VACUUM, BasisKet, CheckName, Generator, HamiltonianParams, RepParams, RunConfig, State, Tag
from config.settings import get_settings


@pytest.mark.unit
class TestGenerator:
    """Test generator metadata."""

    def test_adjoint_pairs(self) -> None:
        """Test (b-)^dagger = b+ and (f-)^dagger = f+."""
        assert Generator.B_MINUS.adjoint is Generator.B_PLUS
        assert Generator.F_PLUS.adjoint is Generator.F_MINUS
        assert all(generator.adjoint.adjoint is generator for generator in Generator)

    def test_kinds(self) -> None:
        """Test bosonic and raising flags."""
        assert Generator.B_MINUS.is_bosonic
        assert not Generator.F_PLUS.is_bosonic
        assert Generator.F_PLUS.is_raising
        assert not Generator.B_MINUS.is_raising


@pytest.mark.unit
class TestState:
    """Test exact linear combinations of kets."""

    def test_zero_terms_dropped(self) -> None:
        """Test zero coefficients never appear."""
        state = State({VACUUM: 0, BasisKet(1, 0): 2})

        assert len(state) == 1
        assert State.ket(VACUUM) - State.ket(VACUUM) == State.zero()
        assert not State.zero()

    def test_arithmetic(self) -> None:
        """Test sums, scaling and negation."""
        a, b = State.ket(VACUUM), State.ket(BasisKet(1, 1, Tag.BETA), Fraction(1, 2))

        assert (a + b) * 2 == State({VACUUM: 2, BasisKet(1, 1, Tag.BETA): 1})
        assert -(a - b) == b - a
        assert (3 * a).coefficient(VACUUM) == 3
        assert a.coefficient(BasisKet(5, 0)) == 0

    def test_str(self) -> None:
        """Test printing in basis order with ASCII signs."""
        state = State({BasisKet(1, 1, Tag.BETA): 4, BasisKet(1, 1): -2})

        assert str(state) == "-2|1,1,α⟩ + 4|1,1,β⟩"
        assert str(State.ket(VACUUM, Fraction(-1, 3))) == "-1/3|0,0,α⟩"
        assert str(State.zero()) == "0"

    def test_ordering(self) -> None:
        """Test kets sort by (m, n, tag) and max_m tracks the top."""
        state = State({BasisKet(2, 0): 1, BasisKet(0, 1): 1, BasisKet(1, 1, Tag.BETA): 1, BasisKet(1, 1): 1})

        assert state.kets() == [BasisKet(0, 1), BasisKet(1, 1), BasisKet(1, 1, Tag.BETA), BasisKet(2, 0)]
        assert state.max_m() == 2
        assert State.zero().max_m() == -1

    def test_ket_labels(self) -> None:
        """Test flag spelling and printed form of a label."""
        ket = BasisKet(3, 2, Tag.BETA)

        assert ket.label == "3,2,b"
        assert str(ket) == "|3,2,β⟩"


@pytest.mark.unit
class TestParams:
    """Test parameter validation."""

    def test_order_must_be_positive(self) -> None:
        """Test p >= 1."""
        with pytest.raises(ValidationError):
            RepParams(p=0, window_m=4)

    def test_with_window(self) -> None:
        """Test the cutoff can be changed without touching p."""
        assert RepParams(p=3, window_m=2).with_window(7) == RepParams(p=3, window_m=7)

    def test_floats_become_exact(self) -> None:
        """Test 0.1 is read as 1/10."""
        h = HamiltonianParams(omega_b=2, omega_f="1.5", coupling=0.1)

        assert h.omega_b == Fraction(2)
        assert h.omega_f == Fraction(3, 2)
        assert h.coupling == Fraction(1, 10)

    @pytest.mark.parametrize("value", [float("nan"), float("inf"), True, "abc", None])
    def test_rejects_non_numbers(self, value: object) -> None:
        """Test non-finite and non-numeric parameters are rejected."""
        with pytest.raises(ValidationError):
            HamiltonianParams(coupling=value)

    def test_run_config_defaults(self) -> None:
        """Test every check runs by default."""
        config = RunConfig(orders=[2, 1])

        assert config.orders == [1, 2]
        assert config.checks == list(CheckName)
        assert config.output_format == "json"

    def test_run_config_window_from_settings(self) -> None:
        """Test the default window and guard are the configured ones."""
        settings = get_settings()
        config = RunConfig(orders=[2])

        assert config.window_m == settings.default_window
        assert config.guard == settings.default_guard

    def test_run_config_guard(self) -> None:
        """Test the guard must fit the window."""
        with pytest.raises(ValidationError, match="exceeds window_m"):
            RunConfig(orders=[2], window_m=2, guard=3)

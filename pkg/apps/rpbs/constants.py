"""Centralized constants for the Fock-like representation engine."""

from __future__ import annotations

# Representation limits
MIN_ORDER = 1  # smallest admissible order p
MAX_ORDER = 64  # largest order accepted from user input
MAX_WINDOW = 200  # largest paraboson cutoff accepted from user input

# Parametric lemma families
DEFAULT_FAMILY_BOUND = 6  # exponents 0..6 are instantiated by default

# Hamiltonian defaults (conventions, not physics)
DEFAULT_OMEGA_B = 1.0
DEFAULT_OMEGA_F = 1.0
DEFAULT_COUPLING = 0.1

# Numerical tolerances for the floating stage
HERMITICITY_TOLERANCE = 1e-12
UNITARITY_TOLERANCE = 1e-10

# Report format
SCHEMA_VERSION = 1

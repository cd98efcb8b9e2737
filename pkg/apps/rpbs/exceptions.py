"""Error hierarchy for the RPBS engine."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from apps.rpbs.models import BasisKet


class RpbsError(Exception):
    """Base class for every engine error."""


class WindowOverflow(RpbsError):
    """An action would need a paraboson index beyond the window cutoff."""

    def __init__(self, ket: BasisKet, window_m: int) -> None:
        self.ket = ket
        self.window_m = window_m
        super().__init__(f"Raising {ket} needs m={ket.m + 1} but the window stops at m={window_m}")


class BlockEscape(RpbsError):
    """An operator maps a block ket outside the block it was materialized on."""

    def __init__(self, source: BasisKet, escaped: BasisKet) -> None:
        self.source = source
        self.escaped = escaped
        super().__init__(f"Image of {source} has a component on {escaped}, outside the block")


class PositivityFailure(RpbsError):
    """A leading principal minor of a Gram matrix is not strictly positive."""

    def __init__(self, order: int, minor: object) -> None:
        self.order = order
        self.minor = minor
        super().__init__(f"Leading minor of order {order} is {minor}, expected > 0")


class InternalInconsistency(RpbsError):
    """The action formulas contradict each other (a bug, not a property of the algebra)."""


class ConfigError(RpbsError):
    """Invalid run configuration or command parameters."""


class ExpressionError(RpbsError):
    """Base class for operator-expression errors; carries the byte offset."""

    def __init__(self, message: str, position: int) -> None:
        self.message = message
        self.position = position
        super().__init__(f"{message} at offset {position}")


class LexicalError(ExpressionError):
    """Unknown token in an operator expression."""


class ExprSyntaxError(ExpressionError):
    """Unexpected or missing token in an operator expression."""


class ArityError(ExpressionError):
    """A bracket does not hold exactly two comma-separated operands."""

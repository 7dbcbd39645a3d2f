"""Exception types shared across the package.

All indices carried by exceptions are 0-based (Python convention).  The
command line layer translates them to 1-based observation labels when it
formats reports, so that they line up with the ``t`` column of CSV inputs.
"""

from __future__ import annotations


class GarpkitError(Exception):
    """Base class for every error raised by this package."""


class ShapeMismatchError(GarpkitError):
    """Prices and bundles do not form two equal-shape rectangular arrays."""


class NonpositivePriceError(GarpkitError):
    """A price entry is zero or negative."""

    def __init__(self, observation: int, good: int) -> None:
        self.observation = observation
        self.good = good
        super().__init__(
            f"price at observation {observation}, good {good} must be strictly positive"
        )


class ZeroBundleError(GarpkitError):
    """A bundle row is the zero vector."""

    def __init__(self, observation: int) -> None:
        self.observation = observation
        super().__init__(f"bundle at observation {observation} is the zero vector")


class NegativeBundleError(GarpkitError):
    """A bundle entry is negative."""

    def __init__(self, observation: int, good: int) -> None:
        self.observation = observation
        self.good = good
        super().__init__(
            f"bundle at observation {observation}, good {good} must be nonnegative"
        )


class LengthMismatchError(GarpkitError):
    """An efficiency vector does not have one entry per observation."""


class DimensionMismatchError(GarpkitError):
    """A bundle passed to a utility evaluator has the wrong number of goods."""


class InvalidToleranceError(GarpkitError):
    """A tolerance argument is zero, negative, or not finite."""


class TooLargeError(GarpkitError):
    """A brute-force oracle was asked to handle more observations than its cap."""


class AfriatInfeasibleError(GarpkitError):
    """The Afriat inequalities are infeasible at the requested efficiency.

    Carries the violating revealed-preference cycle as ``witness``.
    """

    def __init__(self, witness) -> None:
        self.witness = witness
        super().__init__(
            f"e-GARP fails, no utility numbers exist; violating cycle {witness.indices}"
        )


class AfriatVerificationError(GarpkitError):
    """A constructed solution failed the mandatory post-hoc inequality check.

    This is an internal consistency guard; seeing it means a bug in the
    solver, not bad input data.
    """


class InfeasibleWasteError(GarpkitError):
    """A waste target cannot be met anywhere on the budget line."""

    def __init__(self, observation: int, target: float, floor: float) -> None:
        self.observation = observation
        self.target = target
        self.floor = floor
        super().__init__(
            f"observation {observation}: target utility {target!r} is below the "
            f"cheapest attainable level {floor!r} on the budget line"
        )


class ParseError(GarpkitError):
    """An input file could not be parsed into a dataset."""

    def __init__(self, path: str, message: str, row: int | None = None,
                 column: str | None = None) -> None:
        self.path = path
        self.row = row
        self.column = column
        where = path
        if row is not None:
            where += f", row {row}"
        if column is not None:
            where += f", column {column}"
        super().__init__(f"{where}: {message}")

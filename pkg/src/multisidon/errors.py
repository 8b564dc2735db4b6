"""Exception types shared across the package."""

from __future__ import annotations


class FieldError(ValueError):
    """Invalid field parameters or mixing elements of different fields."""


class ZeroPolynomialError(ValueError):
    """Raised where the zero linearized polynomial has no meaningful answer."""


class InvariantError(AssertionError):
    """A proven identity failed to hold on computed data.

    This signals either a bug or input that violates a stated hypothesis;
    it is never used for ordinary negative verdicts.
    """


class HypothesisError(ValueError):
    """Inputs do not satisfy the hypothesis under which a criterion applies."""


class ParameterError(ValueError):
    """Construction parameters failed validation."""


class CapExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the configured size cap."""


class OrbitOverlapError(ValueError):
    """Two generators of a cyclic code lie in the same scalar orbit."""

    def __init__(self, i: int, j: int, alpha: int):
        super().__init__(f"orbit of generator {j} meets orbit of generator {i} (alpha={alpha})")
        self.i, self.j, self.alpha = i, j, alpha

"""Computed values carrying an error estimate and provenance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Method(str, Enum):
    SERIES = "Series"
    QUADRATURE = "Quadrature"
    CLOSED_FORM = "ClosedForm"
    PRODUCT = "Product"
    RECURRENCE = "Recurrence"


@dataclass(frozen=True)
class Evaluation:
    """A real value together with an absolute error estimate.

    ``cancellation_index`` is the ratio of the sum of absolute terms to the
    absolute result; it is 1 for methods that do not sum signed terms.
    """

    value: float
    abs_error_estimate: float
    terms_used: int = 0
    method: Method = Method.SERIES
    cancellation_index: float = 1.0
    extended: bool = False

    def __post_init__(self):
        if not self.abs_error_estimate >= 0.0:
            raise ValueError(f"abs_error_estimate must be >= 0, got {self.abs_error_estimate}")
        if not self.cancellation_index >= 1.0:
            raise ValueError(f"cancellation_index must be >= 1, got {self.cancellation_index}")

    def __float__(self) -> float:
        return self.value

    @property
    def rel_error_estimate(self) -> float:
        if self.value == 0.0:
            return math.inf
        return self.abs_error_estimate / abs(self.value)

    def agrees_with(self, other: "Evaluation", slack: float = 0.0) -> bool:
        """True when the two values differ by at most the combined estimates plus ``slack``."""
        gap = abs(self.value - other.value)
        return gap <= self.abs_error_estimate + other.abs_error_estimate + slack


def product(a: Evaluation, b: Evaluation, method: Method = Method.SERIES) -> Evaluation:
    """First-order error propagation for ``a * b``."""
    value = a.value * b.value
    err = abs(a.value) * b.abs_error_estimate + abs(b.value) * a.abs_error_estimate
    err += a.abs_error_estimate * b.abs_error_estimate + 2.0 * _EPS * abs(value)
    return Evaluation(
        value,
        err,
        a.terms_used + b.terms_used,
        method,
        max(a.cancellation_index, b.cancellation_index),
        a.extended or b.extended,
    )


def linear(pairs, method: Method = Method.SERIES) -> Evaluation:
    """Combine ``sum(c * e for c, e in pairs)`` with accumulated error bounds.

    The cancellation index of the result is recomputed from the combined
    magnitudes so that heavy cancellation between constituents is visible.
    """
    pairs = list(pairs)
    parts = [c * e.value for c, e in pairs]
    value = math.fsum(parts)
    magnitude = math.fsum(abs(p) for p in parts)
    err = math.fsum(abs(c) * e.abs_error_estimate for c, e in pairs)
    err += 2.0 * _EPS * magnitude
    cancel = max([1.0] + [e.cancellation_index for _, e in pairs])
    if value != 0.0:
        cancel = max(cancel, magnitude / abs(value))
    elif magnitude > 0.0:
        cancel = CANCEL_CAP
    return Evaluation(
        value,
        err,
        sum(e.terms_used for _, e in pairs),
        method,
        min(cancel, CANCEL_CAP),
        any(e.extended for _, e in pairs),
    )


_EPS = 2.0**-52
CANCEL_CAP = 1e300

"""Principal branch of the Lambert W function for real arguments.

Only W0 on ``[-1/e, inf)`` is provided. The solver uses it to locate the
peak of the relay-limited rate curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["WEvaluation", "lambert_w0", "evaluate_w0", "BRANCH_POINT"]

BRANCH_POINT = -math.exp(-1.0)

# e split into a double and its rounding remainder, so that 1 + e*x keeps
# full relative accuracy right next to the branch point.
_E_HI = math.e
_E_LO = 1.4456468917292502e-16

_MAX_ITER = 100
# arguments this far below -1/e are treated as rounding noise of -1/e
_BRANCH_SLACK = 4.0 * 2.220446049250313e-16


@dataclass(frozen=True)
class WEvaluation:
    argument: float
    value: float
    residual: float


def _branch_offset(x: float) -> float:
    """Return ``1 + e*x`` without cancellation."""
    return (_E_HI * x + 1.0) + _E_LO * x


def _branch_series(p: float) -> float:
    # W0 expanded in p = sqrt(2(1 + e x)) around the branch point
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (
        -43.0 / 540.0 + p * (769.0 / 17280.0 + p * (-221.0 / 8505.0))))))


def _initial_guess(x: float) -> float:
    if x < -0.25:
        return _branch_series(math.sqrt(2.0 * max(_branch_offset(x), 0.0)))
    if x < 3.0:
        return math.log1p(x) * (1.0 - math.log1p(math.log1p(x)) / (2.0 + math.log1p(x)))
    l1 = math.log(x)
    l2 = math.log(l1)
    return l1 - l2 + l2 / l1


def lambert_w0(x: float) -> float:
    """Principal-branch Lambert W.

    Returns the solution ``w >= -1`` of ``w * exp(w) = x``.

    Parameters
    ----------
    x : float
        Argument, must satisfy ``x >= -1/e``.

    Raises
    ------
    ValueError
        If ``x < -1/e`` or ``x`` is not finite.
    RuntimeError
        If Halley iteration fails to converge (should not happen for valid input).
    """
    x = float(x)
    if math.isnan(x) or x == math.inf:
        raise ValueError(f"lambert_w0 needs a finite argument, got {x}")
    if x < BRANCH_POINT:
        if x >= BRANCH_POINT * (1.0 + _BRANCH_SLACK):
            return -1.0
        raise ValueError(f"lambert_w0 is real only for x >= -1/e, got {x}")
    if x == 0.0:
        return 0.0

    offset = _branch_offset(x)
    if offset <= 0.0:
        return -1.0
    p = math.sqrt(2.0 * offset)
    if p < 1e-3:
        # series truncation error is O(p^7), below double precision here
        return _branch_series(p)

    w = _initial_guess(x)
    prev_step = math.inf
    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        if f == 0.0:
            return w
        wp1 = w + 1.0
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        if abs(step) >= abs(prev_step):
            # rounding noise floor: the update no longer contracts
            return w
        w -= step
        if abs(step) <= 4.0 * 2.220446049250313e-16 * (1.0 + abs(w)):
            return w
        prev_step = step
    raise RuntimeError(f"lambert_w0 did not converge for x={x!r}")


def evaluate_w0(x: float) -> WEvaluation:
    """Evaluate W0 and report the round-trip residual ``|w e^w - x|``."""
    w = lambert_w0(x)
    return WEvaluation(argument=float(x), value=w, residual=abs(w * math.exp(w) - x))

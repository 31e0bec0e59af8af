"""Distances, areas, and the three target-fit predicates.

All integrals are composite-trapezoid sums on the curve's uniform grid:

    l2_distance(f, g)   = sqrt( integral (f - g)**2 )
    area_under(f)       = integral f
    deficiency_energy   = integral max(target - test, 0)

A test form relates to a target in one of three graded ways: it can meet it
absolutely (L2 distance under a tolerance), meet it relatively (some
downscaling lambda < 1 of the test curve fits the target), or exceed it
outright (strictly above the target at every node).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, ParameterError
from .irt import AbilityGrid, Curve

__all__ = [
    "DEFAULT_EPSILON",
    "trapezoid_weights",
    "area_under",
    "l2_distance",
    "lambda_of",
    "deficiency_energy",
    "is_exceeding",
    "is_absolute_meeting",
    "is_relative_meeting",
    "FitReport",
    "fit_report",
]

# Default L2 tolerance for the meeting predicates; configurable everywhere.
DEFAULT_EPSILON = 1.225


def trapezoid_weights(grid: AbilityGrid) -> np.ndarray:
    """Composite-trapezoid quadrature weights for a uniform grid."""
    w = np.full(grid.num_points, grid.step)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _require_same_grid(f: Curve, g: Curve) -> None:
    if f.grid != g.grid:
        raise GridMismatchError(f"curves live on different grids: {f.grid} vs {g.grid}")


def _require_positive_epsilon(epsilon: float) -> None:
    if not (math.isfinite(epsilon) and epsilon > 0.0):
        raise ParameterError(f"epsilon must be finite and > 0, got {epsilon}")


def area_under(f: Curve) -> float:
    """Trapezoid approximation of the integral of ``f`` over its grid."""
    return float((f.values * trapezoid_weights(f.grid)).sum())


def l2_distance(f: Curve, g: Curve) -> float:
    """L2 distance between two curves on a shared grid."""
    _require_same_grid(f, g)
    diff = f.values - g.values
    return math.sqrt(float((diff * diff * trapezoid_weights(f.grid)).sum()))


def lambda_of(s_target: float, s_test: float) -> float:
    """Area ratio target/test used by the relative-meeting predicate."""
    if not (math.isfinite(s_test) and s_test > 0.0):
        raise ParameterError(f"test-curve area must be finite and > 0, got {s_test}")
    return s_target / s_test


def deficiency_energy(test_curve: Curve, target_curve: Curve) -> float:
    """Integrated shortfall of the test curve below the target.

    Zero exactly when the test curve is >= the target at every node, since
    the quadrature weights are strictly positive.
    """
    _require_same_grid(test_curve, target_curve)
    gap = np.maximum(target_curve.values - test_curve.values, 0.0)
    return float((gap * trapezoid_weights(test_curve.grid)).sum())


def is_exceeding(test_curve: Curve, target_curve: Curve) -> bool:
    """True iff the test curve is strictly above the target at every node."""
    _require_same_grid(test_curve, target_curve)
    return bool(np.all(test_curve.values > target_curve.values))


def is_absolute_meeting(test_curve: Curve, target_curve: Curve, epsilon: float) -> bool:
    """True iff the L2 distance between test and target is under ``epsilon``."""
    _require_positive_epsilon(epsilon)
    return l2_distance(test_curve, target_curve) < epsilon


def is_relative_meeting(
    test_curve: Curve, target_curve: Curve, epsilon: float
) -> tuple[bool, float]:
    """Relative-meeting check; returns (met, lambda).

    lambda is the target/test area ratio. The test meets the target
    relatively iff lambda < 1 (the test carries more total information) and
    the downscaled curve lambda * test fits the target within ``epsilon``.
    """
    _require_positive_epsilon(epsilon)
    _require_same_grid(test_curve, target_curve)
    lam = lambda_of(area_under(target_curve), area_under(test_curve))
    if lam >= 1.0:
        return False, lam
    scaled = Curve(test_curve.grid, lam * test_curve.values)
    return l2_distance(scaled, target_curve) < epsilon, lam


@dataclass(frozen=True)
class FitReport:
    """Every fit metric for one test curve against one target."""

    l2: float
    lambda_: float
    energy: float
    exceeding: bool
    absolute: bool
    relative: bool

    def to_json_dict(self) -> dict:
        return {
            "l2": self.l2,
            "lambda": self.lambda_,
            "energy": self.energy,
            "exceeding": self.exceeding,
            "absolute": self.absolute,
            "relative": self.relative,
        }


def fit_report(test_curve: Curve, target_curve: Curve, epsilon: float) -> FitReport:
    """Evaluate all distances and predicates at once."""
    relative, lam = is_relative_meeting(test_curve, target_curve, epsilon)
    return FitReport(
        l2=l2_distance(test_curve, target_curve),
        lambda_=lam,
        energy=deficiency_energy(test_curve, target_curve),
        exceeding=is_exceeding(test_curve, target_curve),
        absolute=is_absolute_meeting(test_curve, target_curve, epsilon),
        relative=relative,
    )

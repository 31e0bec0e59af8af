"""Counting test forms: exact, log-scale, and extrapolated.

A bank of m items holds C(m, n) distinct n-item forms, which overflows any
fixed-width integer long before realistic bank sizes (C(300, 150) is around
1e89), so counts are carried as log10 values. Measured hit ratios, anchored
by one known count, extrapolate to whole count-versus-length curves through
the stepwise binomial recurrences

    count(n0 + k) / count(n0) = mu(n0+k)/mu(n0) * prod_{j<k} (m - n0 - j) / (n0 + j + 1)
    count(n0 - k) / count(n0) = mu(n0-k)/mu(n0) * prod_{j<k} (n0 - j) / (m - n0 + j + 1)

For small banks the module also enumerates every subset outright, which is
the ground truth the statistical estimators are tested against.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

from .errors import BudgetError, ParameterError
from .irt import Curve, ItemBank, TestForm, test_information
from .metrics import is_absolute_meeting, is_exceeding, is_relative_meeting

__all__ = [
    "BinomialCount",
    "CountCurve",
    "ExactCounts",
    "NO_ESTIMATE",
    "EXACT_BINOM_MAX_M",
    "ENUMERATION_BUDGET",
    "binom_total",
    "extrapolate_counts",
    "enumerate_exact",
]

# Exact integer form is reported up to this bank size; log10 always.
EXACT_BINOM_MAX_M = 64

# Refuse to enumerate more subsets than this.
ENUMERATION_BUDGET = 10_000_000

NO_ESTIMATE = "no-estimate"


class BinomialCount(NamedTuple):
    log10: float
    exact: int | None


class ExactCounts(NamedTuple):
    total: int
    absolute: int
    relative: int
    exceeding: int


def binom_total(m: int, n: int) -> BinomialCount:
    """C(m, n) as log10 (via log-gamma), plus the exact integer for small m."""
    if n < 0 or m < 0 or n > m:
        raise ParameterError(f"need 0 <= n <= m, got n={n}, m={m}")
    log10 = (math.lgamma(m + 1) - math.lgamma(n + 1) - math.lgamma(m - n + 1)) / math.log(10)
    exact = math.comb(m, n) if m <= EXACT_BINOM_MAX_M else None
    return BinomialCount(log10, exact)


@dataclass(frozen=True)
class CountCurve:
    """log10 counts per test length, with explicit no-estimate flags.

    Lengths whose measured ratio was zero carry NaN and the ``no-estimate``
    flag: a zero hit count gives no information about the true count beyond
    "small", and silently reporting -inf would be worse than saying so.
    """

    n_values: tuple[int, ...]
    log10_counts: tuple[float, ...]
    flags: tuple[str, ...]
    anchor: tuple[int, float]

    def __post_init__(self) -> None:
        if not (len(self.n_values) == len(self.log10_counts) == len(self.flags)):
            raise ParameterError("count-curve fields must have equal lengths")

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.n_values, self.log10_counts))


def extrapolate_counts(
    anchor_n: int,
    anchor_count_log10: float,
    mu_curve: Mapping[int, float],
    m: int,
) -> CountCurve:
    """Extend one known count across all lengths with measured ratios.

    Args:
        anchor_n: length whose count is known.
        anchor_count_log10: log10 of that count.
        mu_curve: measured hit ratio per length; must include ``anchor_n``
            with a positive value.
        m: bank size.
    """
    if anchor_n not in mu_curve:
        raise ParameterError(f"anchor n={anchor_n} is not in the ratio curve")
    if not all(1 <= n <= m for n in mu_curve):
        raise ParameterError(f"ratio-curve lengths must lie in [1, {m}]")
    if any(mu < 0 for mu in mu_curve.values()):
        raise ParameterError("ratios must be non-negative")
    mu_anchor = mu_curve[anchor_n]
    if mu_anchor <= 0.0:
        raise ParameterError(
            f"anchor n={anchor_n} has ratio 0; extrapolation divides by the anchor ratio, "
            "pick an anchor with a positive estimate"
        )
    if not math.isfinite(anchor_count_log10):
        raise ParameterError(f"anchor count must be finite, got {anchor_count_log10}")

    log_mu_anchor = math.log10(mu_anchor)
    n_values = tuple(sorted(mu_curve))
    log10_counts: list[float] = []
    flags: list[str] = []
    for n in n_values:
        mu = mu_curve[n]
        if n == anchor_n:
            log10_counts.append(anchor_count_log10)
            flags.append("")
            continue
        if mu == 0.0:
            log10_counts.append(math.nan)
            flags.append(NO_ESTIMATE)
            continue
        if n > anchor_n:
            steps = sum(
                math.log10(m - (anchor_n + j)) - math.log10(anchor_n + j + 1)
                for j in range(n - anchor_n)
            )
        else:
            steps = sum(
                math.log10(anchor_n - j) - math.log10(m - (anchor_n - j) + 1)
                for j in range(anchor_n - n)
            )
        log10_counts.append(anchor_count_log10 + math.log10(mu) - log_mu_anchor + steps)
        flags.append("")
    return CountCurve(n_values, tuple(log10_counts), tuple(flags), (anchor_n, anchor_count_log10))


def enumerate_exact(
    bank: ItemBank,
    n: int,
    target_curve: Curve,
    epsilon: float,
    budget: int = ENUMERATION_BUDGET,
) -> ExactCounts:
    """Classify every n-subset of the bank; exact but exponential.

    Iterates subsets in lexicographic order and applies the three fit
    predicates to each, so it is the oracle for the sampling estimators.
    Refuses to run when C(m, n) exceeds ``budget``.
    """
    if n < 1 or n > bank.m:
        raise ParameterError(f"test length must lie in [1, {bank.m}], got {n}")
    total = math.comb(bank.m, n)
    if total > budget:
        raise BudgetError(
            f"C({bank.m},{n}) = {total} subsets exceeds the enumeration budget of {budget}"
        )
    grid = target_curve.grid
    n_absolute = n_relative = n_exceeding = 0
    for ids in itertools.combinations(range(bank.m), n):
        curve = test_information(bank, TestForm(ids), grid)
        if is_exceeding(curve, target_curve):
            n_exceeding += 1
        if is_absolute_meeting(curve, target_curve, epsilon):
            n_absolute += 1
        met, _ = is_relative_meeting(curve, target_curve, epsilon)
        if met:
            n_relative += 1
    return ExactCounts(total, n_absolute, n_relative, n_exceeding)

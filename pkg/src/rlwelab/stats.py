"""Rank-based two-sample and k-sample tests for comparing degree classes.

Both tests operate on ranks with midrank tie handling.  The U test uses the
normal approximation with tie and continuity corrections (group sizes here
are dozens to hundreds, where the approximation is solid); the H test uses
the chi-squared tail with k-1 degrees of freedom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gammaincc

__all__ = ["SampleGroup", "TestOutcome", "mann_whitney_u", "kruskal_wallis"]


@dataclass(frozen=True)
class SampleGroup:
    label: str
    values: tuple

    def __init__(self, label: str, values):
        vals = tuple(float(v) for v in values)
        if not vals:
            raise ValueError(f"sample group {label!r} is empty")
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False  # keep pytest from collecting this as a test class

    statistic: float
    p_value: float
    effect_size_r: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value out of range: {self.p_value}")


def _midranks(values) -> list[float]:
    """Ranks starting at 1; tied values share the mean of their rank span."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _tie_term(values) -> float:
    """sum(t^3 - t) over groups of tied values."""
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return float(sum(t**3 - t for t in counts.values() if t > 1))


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _chi2_sf(x: float, df: int) -> float:
    return float(gammaincc(df / 2.0, x / 2.0))


def mann_whitney_u(a: SampleGroup, b: SampleGroup, alternative: str = "two-sided") -> TestOutcome:
    """U statistic of the first group, normal-approximation p, effect size r.

    U equals the number of (a_i, b_j) pairs with a_i > b_j, counting ties as
    half.  When every value in both groups is identical the variance
    vanishes; that degenerate case reports p = 1, r = 0.
    """
    if alternative not in ("two-sided", "greater", "less"):
        raise ValueError(f"unknown alternative {alternative!r}")
    n1, n2 = len(a.values), len(b.values)
    pooled = list(a.values) + list(b.values)
    ranks = _midranks(pooled)
    r1 = sum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2.0

    n = n1 + n2
    tie = _tie_term(pooled)
    var = (n1 * n2 / 12.0) * ((n + 1) - tie / (n * (n - 1)))
    if var <= 0:
        return TestOutcome(statistic=u1, p_value=1.0, effect_size_r=0.0)

    mean = n1 * n2 / 2.0
    diff = u1 - mean
    # continuity correction: shrink toward the mean by 1/2
    if alternative == "two-sided":
        cc = -0.5 if diff > 0 else (0.5 if diff < 0 else 0.0)
    elif alternative == "greater":
        cc = -0.5
    else:
        cc = 0.5
    z = (diff + cc) / math.sqrt(var)
    if alternative == "two-sided":
        p = min(1.0, 2.0 * _norm_sf(abs(z)))
    elif alternative == "greater":
        p = _norm_sf(z)
    else:
        p = 1.0 - _norm_sf(z)
    r = abs(z) / math.sqrt(n)
    return TestOutcome(statistic=u1, p_value=p, effect_size_r=r)


def kruskal_wallis(groups: list[SampleGroup]) -> TestOutcome:
    """Tie-corrected H statistic with a chi-squared (k-1) tail p-value."""
    if len(groups) < 2:
        raise ValueError("kruskal_wallis needs at least two groups")
    pooled = [v for g in groups for v in g.values]
    n = len(pooled)
    ranks = _midranks(pooled)

    h = 0.0
    pos = 0
    for g in groups:
        ni = len(g.values)
        ri = sum(ranks[pos : pos + ni])
        h += ri * ri / ni
        pos += ni
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)

    correction = 1.0 - _tie_term(pooled) / (n**3 - n)
    if correction <= 0:
        # every pooled value identical
        return TestOutcome(statistic=0.0, p_value=1.0)
    h /= correction
    h = max(h, 0.0)
    return TestOutcome(statistic=h, p_value=_chi2_sf(h, len(groups) - 1))

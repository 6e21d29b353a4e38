"""Hotspot classification, histograms, log-normal fits, and the two-sample t-test.

The t-test defaults to Welch's unequal-variance form (the two scenario
distributions typically have very different spreads); a pooled-variance
variant is available behind a flag. Two-sided p-values come from the
Student-t distribution evaluated through the regularized incomplete beta
function implemented below, so the test carries no external numerical
dependency.
"""

from __future__ import annotations

import enum
import math
import statistics
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class Severity(str, enum.Enum):
    """Hotspot label: severe venues exceed the weekly-infection threshold."""

    MILD = "mild"
    SEVERE = "severe"


class Scale(str, enum.Enum):
    """Histogram binning scale."""

    LINEAR = "linear"
    LOG10 = "log10"


@dataclass(frozen=True)
class Histogram:
    """Equal-width binning of a value set, in linear or log10 space.

    ``bin_edges`` are always in original units (for log10 they are
    geometrically spaced). ``excluded_count`` holds every input value
    that landed in no bin: non-finite values, non-positives on a log
    scale, and values outside an explicit range. Conservation holds by
    construction: sum(counts) + excluded_count == number of inputs.
    """

    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    scale: Scale
    excluded_count: int = 0

    @property
    def is_empty(self) -> bool:
        """True when no value fell into any bin (degenerate input set)."""
        return not self.counts


class LogNormalFit(NamedTuple):
    mu: float
    sigma: float


@dataclass(frozen=True)
class ComparisonResult:
    """Two-scenario comparison: Welch statistic plus per-scenario summaries."""

    t_stat: float
    degrees_of_freedom: float
    p_value: float
    mean_a: float
    mean_b: float
    histogram_a: Histogram | None = None
    histogram_b: Histogram | None = None


def classify(weekly_infections: float, threshold: float = 1.0) -> Severity:
    """Label a venue severe when its weekly expected infections exceed ``threshold``.

    The comparison is strict, so a venue sitting exactly on the
    threshold is mild.
    """
    if not (math.isfinite(weekly_infections) and weekly_infections >= 0):
        raise ValueError(f"weekly infections must be non-negative, got {weekly_infections}")
    return Severity.SEVERE if weekly_infections > threshold else Severity.MILD


def histogram(
    values: Iterable[float],
    bins: int,
    scale: Scale | str = Scale.LINEAR,
    value_range: tuple[float, float] | None = None,
) -> Histogram:
    """Bin values into ``bins`` equal-width intervals in the chosen scale.

    Bins are half-open with the last bin closed on the right. By default
    the edges span [min, max] of the included values; pass
    ``value_range`` (in original units) to align histograms from
    different samples for overlay plots. On the log10 scale, zeros and
    negatives cannot be binned and are counted in ``excluded_count``
    instead of being silently dropped.
    """
    scale = Scale(scale)
    if bins < 1:
        raise ValueError(f"bins must be a positive integer, got {bins}")
    arr = np.asarray(list(values), dtype=float)
    total = arr.size

    if scale is Scale.LOG10:
        mask = np.isfinite(arr) & (arr > 0)
        points = np.log10(arr[mask])
        span = None if value_range is None else _log_range(value_range)
    else:
        mask = np.isfinite(arr)
        points = arr[mask]
        span = value_range

    if points.size == 0:
        return Histogram(bin_edges=(), counts=(), scale=scale, excluded_count=total)

    lo, hi = span if span is not None else (float(points.min()), float(points.max()))
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise ValueError(f"invalid histogram range ({lo}, {hi})")
    if lo == hi:
        # all values identical: one degenerate bin, edges nudged apart
        pad = np.finfo(float).eps * max(1.0, abs(lo))
        edges = np.array([lo - pad, hi + pad])
    else:
        edges = np.linspace(lo, hi, bins + 1)

    counts, _ = np.histogram(points, bins=edges)
    excluded = total - int(counts.sum())
    if scale is Scale.LOG10:
        edges = 10.0 ** edges
    return Histogram(
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        scale=scale,
        excluded_count=excluded,
    )


def _log_range(value_range: tuple[float, float]) -> tuple[float, float]:
    lo, hi = value_range
    if lo <= 0 or hi <= 0:
        raise ValueError(f"log10 range bounds must be positive, got ({lo}, {hi})")
    return math.log10(lo), math.log10(hi)


def welch_t_test(
    a: Sequence[float], b: Sequence[float], pooled: bool = False
) -> ComparisonResult:
    """Two-sample, two-sided t-test on independent samples.

    Welch's unequal-variance statistic with Welch-Satterthwaite degrees
    of freedom by default; ``pooled=True`` switches to the classic
    equal-variance form. Swapping the samples negates t and preserves p.

    Raises:
        ValueError: a sample has fewer than 2 values, contains
            non-finite values, or has zero variance. Exception: when
            both samples are constant with equal means the test
            degenerates to t = 0, p = 1 by convention (documented), with
            degrees_of_freedom = len(a) + len(b) - 2.
    """
    xs = [float(v) for v in a]
    ys = [float(v) for v in b]
    na, nb = len(xs), len(ys)
    if na < 2 or nb < 2:
        raise ValueError(f"each sample needs at least 2 values, got {na} and {nb}")
    if not all(math.isfinite(v) for v in xs + ys):
        raise ValueError("samples must contain only finite values")

    mean_a = statistics.fmean(xs)
    mean_b = statistics.fmean(ys)
    var_a = statistics.variance(xs, xbar=mean_a)
    var_b = statistics.variance(ys, xbar=mean_b)

    if var_a == 0.0 and var_b == 0.0:
        if mean_a == mean_b:
            return ComparisonResult(
                t_stat=0.0,
                degrees_of_freedom=float(na + nb - 2),
                p_value=1.0,
                mean_a=mean_a,
                mean_b=mean_b,
            )
        raise ValueError("both samples have zero variance with unequal means")
    if var_a == 0.0 or var_b == 0.0:
        raise ValueError("each sample must have nonzero variance")

    if pooled:
        pooled_var = ((na - 1) * var_a + (nb - 1) * var_b) / (na + nb - 2)
        se = math.sqrt(pooled_var * (1.0 / na + 1.0 / nb))
        df = float(na + nb - 2)
    else:
        qa = var_a / na
        qb = var_b / nb
        se = math.sqrt(qa + qb)
        df = (qa + qb) ** 2 / (qa * qa / (na - 1) + qb * qb / (nb - 1))

    t_stat = (mean_a - mean_b) / se
    return ComparisonResult(
        t_stat=t_stat,
        degrees_of_freedom=df,
        p_value=student_t_two_sided_p(t_stat, df),
        mean_a=mean_a,
        mean_b=mean_b,
    )


def student_t_two_sided_p(t_stat: float, df: float) -> float:
    """Two-sided tail probability of the Student-t distribution.

    Uses the identity p = I_x(df/2, 1/2) with x = df / (df + t^2), where
    I is the regularized incomplete beta function.
    """
    if not (math.isfinite(df) and df > 0):
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if not math.isfinite(t_stat):
        raise ValueError(f"t statistic must be finite, got {t_stat}")
    x = df / (df + t_stat * t_stat)
    p = regularized_incomplete_beta(0.5 * df, 0.5, x)
    return min(1.0, max(0.0, p))


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), evaluated by the standard continued-fraction expansion.

    The fraction converges quickly for x < (a+1)/(a+b+2); the symmetry
    I_x(a, b) = 1 - I_{1-x}(b, a) covers the other half of the domain.
    """
    if a <= 0 or b <= 0:
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    # modified Lentz iteration; FLOOR guards against division by ~0
    FLOOR = 1e-300
    max_iterations = 300
    eps = np.finfo(float).eps

    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FLOOR:
        d = FLOOR
    d = 1.0 / d
    h = d
    for m in range(1, max_iterations + 1):
        m2 = 2 * m
        coeff = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + coeff * d
        if abs(d) < FLOOR:
            d = FLOOR
        c = 1.0 + coeff / c
        if abs(c) < FLOOR:
            c = FLOOR
        d = 1.0 / d
        h *= d * c
        coeff = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + coeff * d
        if abs(d) < FLOOR:
            d = FLOOR
        c = 1.0 + coeff / c
        if abs(c) < FLOOR:
            c = FLOOR
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def fit_log_normal(values: Sequence[float]) -> LogNormalFit:
    """Maximum-likelihood log-normal fit of a positive sample.

    mu is the mean of the log values and sigma their population
    standard deviation. Multiplying all values by k shifts mu by ln(k)
    and leaves sigma unchanged.

    Raises:
        ValueError: any value <= 0 or non-finite, fewer than 2 values,
            or a constant sample (sigma must be positive).
    """
    arr = np.asarray(list(values), dtype=float)
    if arr.size < 2:
        raise ValueError(f"need at least 2 values, got {arr.size}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError("all values must be positive and finite")
    logs = np.log(arr)
    mu = float(logs.mean())
    sigma = float(logs.std(ddof=0))
    if sigma == 0.0:
        raise ValueError("constant sample: sigma of the fit would be zero")
    return LogNormalFit(mu=mu, sigma=sigma)

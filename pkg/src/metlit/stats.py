"""Welch two-sample t-tests over sentence-vector groups.

The t-distribution tail is computed from the regularized incomplete beta
function (continued fraction evaluation, relative accuracy ~1e-14), so no
statistics library is needed at runtime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import LITERAL, METAPHOR
from .sentvec import SentenceVector

_CF_EPS = 1e-15
_CF_FPMIN = 1e-300
_CF_MAX_ITER = 500


class DegenerateSampleError(ValueError):
    """Both samples have zero variance: the t statistic is undefined."""


class SampleSizeError(ValueError):
    """A sample has fewer than 2 elements."""


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_FPMIN:
        d = _CF_FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_FPMIN:
            d = _CF_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _CF_FPMIN:
            c = _CF_FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_FPMIN:
            d = _CF_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _CF_FPMIN:
            c = _CF_FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("beta parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # use whichever tail the continued fraction converges fastest on
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_sf(t: float, df: float) -> float:
    """P(T > t) for T ~ Student's t with df degrees of freedom."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    tail = 0.5 * betainc_reg(0.5 * df, 0.5, df / (df + t * t))
    return tail if t >= 0 else 1.0 - tail


def two_sided_p(t: float, df: float) -> float:
    """Two-sided p value: P(|T| > |t|)."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    return betainc_reg(0.5 * df, 0.5, df / (df + t * t))


@dataclass
class TTestResult:
    dimension: int | str | None  # 0-based index, "norm", or None for a bare test
    t_statistic: float
    degrees_of_freedom: float
    p_value: float
    significant: bool


def welch_t(sample_a, sample_b, alpha: float = 0.05) -> TTestResult:
    """Welch's unequal-variance two-sample t-test, two-sided.

    t = (mean_a - mean_b) / sqrt(s2_a/n_a + s2_b/n_b) with n-1 variances;
    degrees of freedom by Welch-Satterthwaite.
    """
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    n_a, n_b = len(a), len(b)
    if n_a < 2 or n_b < 2:
        raise SampleSizeError("each sample needs at least 2 elements")
    var_a = float(a.var(ddof=1))
    var_b = float(b.var(ddof=1))
    if var_a == 0.0 and var_b == 0.0:
        raise DegenerateSampleError("both samples have zero variance")
    sq_a, sq_b = var_a / n_a, var_b / n_b
    se2 = sq_a + sq_b
    t = float(a.mean() - b.mean()) / math.sqrt(se2)
    df = se2 * se2 / (sq_a * sq_a / (n_a - 1) + sq_b * sq_b / (n_b - 1))
    p = two_sided_p(t, df)
    return TTestResult(
        dimension=None,
        t_statistic=t,
        degrees_of_freedom=df,
        p_value=p,
        significant=p < alpha,
    )


def group_ttest(
    vectors: list[SentenceVector], alpha: float = 0.05
) -> tuple[list[TTestResult], dict]:
    """One Welch test per embedding dimension plus one on Euclidean norms.

    Contrasts the literal and metaphor groups; both must have at least two
    members. The summary counts dimensions significant at alpha.
    """
    literal = [sv.values for sv in vectors if sv.label == LITERAL]
    metaphor = [sv.values for sv in vectors if sv.label == METAPHOR]
    if len(literal) < 2 or len(metaphor) < 2:
        raise SampleSizeError(
            f"need >= 2 members per class, got literal={len(literal)}, "
            f"metaphor={len(metaphor)}"
        )
    lit = np.stack(literal)
    met = np.stack(metaphor)
    if lit.shape[1] != met.shape[1]:
        raise ValueError("dimension mismatch between classes")
    results: list[TTestResult] = []
    for d in range(lit.shape[1]):
        res = welch_t(lit[:, d], met[:, d], alpha=alpha)
        res.dimension = d
        results.append(res)
    norm_res = welch_t(
        np.linalg.norm(lit, axis=1), np.linalg.norm(met, axis=1), alpha=alpha
    )
    norm_res.dimension = "norm"
    results.append(norm_res)
    n_significant = sum(1 for r in results[:-1] if r.significant)
    summary = {
        "n_literal": lit.shape[0],
        "n_metaphor": met.shape[0],
        "dimensions": lit.shape[1],
        "alpha": alpha,
        "significant_dimensions": n_significant,
        "norm_significant": norm_res.significant,
    }
    return results, summary


def save_ttest_report(results: list[TTestResult], path: str) -> None:
    """Write a TSV report: dimension, t, df, p, significant."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("dimension\tt\tdf\tp\tsignificant\n")
        for r in results:
            fh.write(
                f"{r.dimension}\t{r.t_statistic:.6f}\t{r.degrees_of_freedom:.6f}"
                f"\t{r.p_value:.6g}\t{'true' if r.significant else 'false'}\n"
            )

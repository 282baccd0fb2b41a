"""Self-contained hypothesis tests and the distribution functions behind them.

Implements Welch and paired t-tests, the variance-ratio F-test, the Friedman
rank test, and two-way ANOVA without replication. P-values come from the
regularized incomplete beta / lower incomplete gamma functions implemented
here (continued fractions and series, target accuracy 1e-10), so the module
has no runtime dependency beyond numpy and math.lgamma.

Degenerate zero-variance inputs yield flagged boundary p-values (0 or 1)
instead of errors: optimizer result columns can legitimately be constant.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from math import exp, inf, isfinite, lgamma, log, log1p, sqrt

import numpy as np

_EPS = 1e-16
_FPMIN = 1e-300
_MAX_ITER = 500


@dataclass(frozen=True)
class TestResult:
    """Outcome of one hypothesis test (two-sided p-value throughout)."""

    statistic: float
    df: float | tuple[float, float]
    p_value: float
    kind: str
    degenerate: bool = False


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) via the continued fraction with the usual symmetry switch."""
    if a <= 0 or b <= 0:
        raise ValueError(f"beta parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"incomplete beta argument must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = lgamma(a + b) - lgamma(a) - lgamma(b) + a * log(x) + b * log1p(-x)
    front = exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def _beta_cf(a: float, b: float, x: float) -> float:
    """Lentz evaluation of the incomplete-beta continued fraction."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise RuntimeError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_lower_gamma(a: float, x: float) -> float:
    """P(a, x): series below x = a + 1, continued fraction above."""
    if a <= 0:
        raise ValueError(f"gamma shape must be positive, got {a}")
    if x < 0:
        raise ValueError(f"gamma argument must be >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_cf(a, x)


def _gamma_series(a: float, x: float) -> float:
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * exp(-x + a * log(x) - lgamma(a))
    raise RuntimeError(f"incomplete gamma series did not converge for a={a}, x={x}")


def _gamma_cf(a: float, x: float) -> float:
    """Upper tail Q(a, x) by Lentz continued fraction."""
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * exp(-x + a * log(x) - lgamma(a))
    raise RuntimeError(f"incomplete gamma fraction did not converge for a={a}, x={x}")


def t_cdf(t: float, df: float) -> float:
    """CDF of Student's t distribution."""
    if df <= 0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if t == 0.0:
        return 0.5
    if not isfinite(t):
        return 0.0 if t < 0 else 1.0
    x = df / (df + t * t)
    tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x)
    return tail if t < 0 else 1.0 - tail


def f_cdf(x: float, d1: float, d2: float) -> float:
    """CDF of the F distribution with (d1, d2) degrees of freedom."""
    if d1 <= 0 or d2 <= 0:
        raise ValueError(f"degrees of freedom must be positive, got ({d1}, {d2})")
    if x < 0:
        raise ValueError(f"F argument must be >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if not isfinite(x):
        return 1.0
    y = d1 * x / (d1 * x + d2)
    return regularized_incomplete_beta(0.5 * d1, 0.5 * d2, y)


def chi2_cdf(x: float, df: float) -> float:
    """CDF of the chi-square distribution."""
    if df <= 0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if x < 0:
        raise ValueError(f"chi-square argument must be >= 0, got {x}")
    if not isfinite(x):
        return 1.0
    return regularized_lower_gamma(0.5 * df, 0.5 * x)


# ---------------------------------------------------------------------------
# sample handling
# ---------------------------------------------------------------------------

def _as_sample(values, name: str, min_len: int = 2) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size < min_len:
        raise ValueError(f"{name} needs at least {min_len} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True)
class BlockMatrix:
    """n blocks (rows) x k treatments (columns) of finite responses."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] < 2:
            raise ValueError(f"block matrix must be at least 2 x 2, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("block matrix contains non-finite values")
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def _coerce_blocks(data) -> np.ndarray:
    if isinstance(data, BlockMatrix):
        return data.values
    return BlockMatrix(np.asarray(data, dtype=float)).values


# ---------------------------------------------------------------------------
# tests
# ---------------------------------------------------------------------------

def two_sample_t(x, y) -> TestResult:
    """Unequal-variance two-sample t-test with Welch-Satterthwaite df."""
    xs = _as_sample(x, "x")
    ys = _as_sample(y, "y")
    nx, ny = xs.size, ys.size
    mx, my = xs.mean(), ys.mean()
    vx, vy = xs.var(ddof=1), ys.var(ddof=1)
    se2 = vx / nx + vy / ny
    if se2 == 0.0:
        if mx == my:
            return TestResult(0.0, float(nx + ny - 2), 1.0, "two_sample_t", degenerate=True)
        stat = inf if mx > my else -inf
        return TestResult(stat, float(nx + ny - 2), 0.0, "two_sample_t", degenerate=True)
    stat = (mx - my) / sqrt(se2)
    df = se2 ** 2 / ((vx / nx) ** 2 / (nx - 1) + (vy / ny) ** 2 / (ny - 1))
    p = 2.0 * (1.0 - t_cdf(abs(stat), df))
    return TestResult(float(stat), float(df), min(p, 1.0), "two_sample_t")


def paired_t(x, y) -> TestResult:
    """One-sample t-test on the pairwise differences x_i - y_i."""
    xs = _as_sample(x, "x")
    ys = _as_sample(y, "y")
    if xs.size != ys.size:
        raise ValueError(f"paired samples must have equal length, got {xs.size} and {ys.size}")
    diffs = xs - ys
    n = diffs.size
    mean = diffs.mean()
    sd = diffs.std(ddof=1)
    if sd == 0.0:
        if mean == 0.0:
            return TestResult(0.0, float(n - 1), 1.0, "paired_t", degenerate=True)
        stat = inf if mean > 0 else -inf
        return TestResult(stat, float(n - 1), 0.0, "paired_t", degenerate=True)
    stat = mean / (sd / sqrt(n))
    p = 2.0 * (1.0 - t_cdf(abs(stat), n - 1))
    return TestResult(float(stat), float(n - 1), min(p, 1.0), "paired_t")


def f_test_variance(x, y) -> TestResult:
    """Two-sided F-test on the ratio of sample variances."""
    xs = _as_sample(x, "x")
    ys = _as_sample(y, "y")
    vx, vy = xs.var(ddof=1), ys.var(ddof=1)
    if vx == 0.0 or vy == 0.0:
        raise ValueError("F-test is undefined for a zero-variance sample")
    stat = vx / vy
    df = (float(xs.size - 1), float(ys.size - 1))
    cdf = f_cdf(stat, df[0], df[1])
    p = min(1.0, 2.0 * min(cdf, 1.0 - cdf))
    return TestResult(float(stat), df, p, "f_variance")


def _rank_row(row: np.ndarray) -> tuple[np.ndarray, float]:
    """Ranks 1..k with average ties; also returns this row's tie term sum(t^3 - t)."""
    order = np.argsort(row, kind="stable")
    ranks = np.empty(row.size)
    tie_term = 0.0
    i = 0
    while i < row.size:
        j = i
        while j + 1 < row.size and row[order[j + 1]] == row[order[i]]:
            j += 1
        avg = 0.5 * (i + j) + 1.0
        for idx in range(i, j + 1):
            ranks[order[idx]] = avg
        width = j - i + 1
        tie_term += width ** 3 - width
        i = j + 1
    return ranks, tie_term


def friedman(data) -> TestResult:
    """Friedman rank test across treatments, chi-square approximation with ties."""
    values = _coerce_blocks(data)
    n, k = values.shape
    rank_sums = np.zeros(k)
    ties = 0.0
    for row in values:
        ranks, tie_term = _rank_row(row)
        rank_sums += ranks
        ties += tie_term
    correction = 1.0 - ties / (n * k * (k * k - 1))
    raw = 12.0 / (n * k * (k + 1)) * float(np.sum(rank_sums ** 2)) - 3.0 * n * (k + 1)
    if correction <= 0.0:
        # every row fully tied: no evidence of any treatment effect
        return TestResult(0.0, float(k - 1), 1.0, "friedman", degenerate=True)
    stat = max(raw, 0.0) / correction
    p = 1.0 - chi2_cdf(stat, k - 1)
    return TestResult(float(stat), float(k - 1), p, "friedman")


def two_way_anova(data) -> tuple[TestResult, TestResult]:
    """Two-way ANOVA without replication; returns (row effect, column effect)."""
    values = _coerce_blocks(data)
    n, k = values.shape
    grand = values.mean()
    row_means = values.mean(axis=1)
    col_means = values.mean(axis=0)
    ss_rows = k * float(np.sum((row_means - grand) ** 2))
    ss_cols = n * float(np.sum((col_means - grand) ** 2))
    ss_total = float(np.sum((values - grand) ** 2))
    ss_err = max(ss_total - ss_rows - ss_cols, 0.0)
    df_rows, df_cols, df_err = n - 1, k - 1, (n - 1) * (k - 1)
    ms_err = ss_err / df_err

    def effect(ss: float, df_effect: int, kind: str) -> TestResult:
        ms = ss / df_effect
        if ms_err == 0.0:
            if ms == 0.0:
                return TestResult(0.0, (float(df_effect), float(df_err)), 1.0, kind, degenerate=True)
            return TestResult(inf, (float(df_effect), float(df_err)), 0.0, kind, degenerate=True)
        stat = ms / ms_err
        p = 1.0 - f_cdf(stat, df_effect, df_err)
        return TestResult(float(stat), (float(df_effect), float(df_err)), p, kind)

    return effect(ss_rows, df_rows, "anova_rows"), effect(ss_cols, df_cols, "anova_cols")


# ---------------------------------------------------------------------------
# bundled oracle vectors
# ---------------------------------------------------------------------------

def load_oracle_vectors() -> dict:
    """The bundled CDF test vectors (inputs, expected values, tolerance)."""
    text = resources.files("fatune").joinpath("data/stats_oracle.json").read_text()
    return json.loads(text)


def verify_oracle_vectors() -> list[tuple[str, float, bool]]:
    """Evaluate every bundled vector; returns (label, abs error, ok) per entry."""
    data = load_oracle_vectors()
    tol = data["tolerance"]
    results = []
    for entry in data["entries"]:
        kind = entry["kind"]
        args = entry["args"]
        expected = entry["value"]
        if kind == "t":
            got = t_cdf(*args)
        elif kind == "f":
            got = f_cdf(*args)
        elif kind == "chi2":
            got = chi2_cdf(*args)
        else:
            raise ValueError(f"unknown oracle vector kind {kind!r}")
        err = abs(got - expected)
        label = f"{kind}_cdf({', '.join(format(a, 'g') for a in args)})"
        results.append((label, err, err <= tol))
    return results

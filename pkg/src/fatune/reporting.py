"""Report serialization: the canonical JSON report, CSV projections of it,
five-number boxplot summaries, and a dependency-free SVG boxplot rendering.

The JSON report is the single source of truth; every CSV cell renders floats
with repr() (shortest round-trip decimal) so parsing a CSV back recovers the
exact binary values stored in the JSON.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import sys
from itertools import combinations

import numpy as np

from .config import ExperimentConfig, config_echo
from .stats import f_test_variance, friedman, paired_t, two_sample_t, two_way_anova
from .tuning import ExperimentReport

REPORT_SCHEMA = "fatune-report-v1"

# canonical short aliases for the six catalog problems, used as table headers
F_ALIASES = {
    "sphere": "f1",
    "rosenbrock": "f2",
    "ackley": "f3",
    "trid": "f4",
    "spring": "f5",
    "truss": "f6",
}

PARAMETERS = ("theta", "beta", "gamma")


def fmt(value) -> str:
    """Shortest decimal that parses back to the exact float."""
    if value is None:
        return ""
    return repr(float(value))


def alias(problem: str) -> str:
    return F_ALIASES.get(problem, problem)


# ---------------------------------------------------------------------------
# JSON report
# ---------------------------------------------------------------------------

def report_payload(report: ExperimentReport, cfg: ExperimentConfig) -> dict:
    """Canonical JSON-ready dict for an experiment report, with content hash."""
    results: dict = {}
    for method in report.methods:
        per_problem: dict = {}
        for label, _dim in report.problems:
            table = report.table(method, label)
            settings = []
            for s in table.settings:
                settings.append({
                    "index": s.setting_index,
                    "theta": s.params.theta,
                    "beta": s.params.beta,
                    "gamma": s.params.gamma,
                    "best_value": s.best_value,
                    "best_point": [float(v) for v in s.best_point],
                    "per_call_bests": [float(v) for v in s.per_call_bests],
                })
            per_problem[label] = {
                "settings": settings,
                "mean": table.mean,
                "sigma": table.sigma,
                "best_index": table.best_index,
                "best_value": table.best_value,
                "best_params": {
                    "theta": table.best_params.theta,
                    "beta": table.best_params.beta,
                    "gamma": table.best_params.gamma,
                },
            }
        results[method] = per_problem

    payload = {
        "schema": REPORT_SCHEMA,
        "config": config_echo(cfg),
        "methods": list(report.methods),
        "problems": [{"name": label, "dimension": dim} for label, dim in report.problems],
        "results": results,
    }
    digest = hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()
    payload["content_hash"] = f"sha256:{digest}"
    return payload


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def write_text_atomic(path: str, text: str):
    """Write via a temp file in the same directory, then rename into place."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = os.path.join(directory, f".{os.path.basename(path)}.tmp-{os.getpid()}")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_report_json(path: str, payload: dict):
    write_text_atomic(path, canonical_json(payload) + "\n")


def load_report(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# CSV projections
# ---------------------------------------------------------------------------

def _csv_text(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def objective_csv(payload: dict, method: str) -> str:
    """Per-setting best objective table for one method, plus mean/sigma rows."""
    problems = [p["name"] for p in payload["problems"]]
    header = ["run_index"] + [alias(p) for p in problems]
    rows = [header]
    num_settings = len(payload["results"][method][problems[0]]["settings"])
    for idx in range(num_settings):
        row = [str(idx + 1)]
        for p in problems:
            row.append(fmt(payload["results"][method][p]["settings"][idx]["best_value"]))
        rows.append(row)
    rows.append(["mean"] + [fmt(payload["results"][method][p]["mean"]) for p in problems])
    rows.append(["sigma"] + [fmt(payload["results"][method][p]["sigma"]) for p in problems])
    return _csv_text(rows)


def best_param_csv(payload: dict, parameter: str) -> str:
    """Best-setting parameter values per problem (rows) and method (columns)."""
    methods = payload["methods"]
    problems = [p["name"] for p in payload["problems"]]
    rows = [["function"] + list(methods)]
    columns = {m: [] for m in methods}
    for p in problems:
        row = [alias(p)]
        for m in methods:
            value = payload["results"][m][p]["best_params"][parameter]
            columns[m].append(value)
            row.append(fmt(value))
        rows.append(row)
    means = ["mean"] + [fmt(float(np.mean(columns[m]))) for m in methods]
    sigmas = ["sigma"] + [
        fmt(float(np.std(columns[m], ddof=1))) if len(columns[m]) >= 2 else "" for m in methods
    ]
    rows.append(means)
    rows.append(sigmas)
    return _csv_text(rows)


def extended_csv(vectors: dict[str, np.ndarray]) -> str:
    """run_index plus one column per method for the extended-sample runs."""
    methods = list(vectors)
    n = len(next(iter(vectors.values())))
    rows = [["run_index"] + methods]
    for idx in range(n):
        rows.append([str(idx + 1)] + [fmt(vectors[m][idx]) for m in methods])
    return _csv_text(rows)


# ---------------------------------------------------------------------------
# statistical comparison tables
# ---------------------------------------------------------------------------

def method_pairs(methods: list[str]) -> list[tuple[str, str]]:
    return list(combinations(methods, 2))


def objective_vectors(payload: dict, method: str, problem: str) -> np.ndarray:
    settings = payload["results"][method][problem]["settings"]
    return np.array([s["best_value"] for s in settings])


def param_vector(payload: dict, method: str, parameter: str) -> np.ndarray:
    problems = [p["name"] for p in payload["problems"]]
    return np.array([payload["results"][method][p]["best_params"][parameter] for p in problems])


def compute_stats(payload: dict, tests: tuple[str, ...], t_kind: str = "welch") -> dict:
    """All requested comparison tables, computed from a report payload.

    Returns a dict with optional keys t, f, friedman, anova, t_params; cells
    that a test cannot produce (degenerate variance) hold None.
    """
    methods = payload["methods"]
    problems = [p["name"] for p in payload["problems"]]
    pairs = method_pairs(methods)
    t_func = paired_t if t_kind == "paired" else two_sample_t
    # parameter-level comparisons use one value per problem as the sample
    params_possible = len(problems) >= 2
    out: dict = {"methods": methods, "problems": problems, "pairs": pairs}

    if "t" in tests:
        table = {}
        for p in problems:
            row = {}
            for m1, m2 in pairs:
                res = t_func(objective_vectors(payload, m1, p), objective_vectors(payload, m2, p))
                row[(m1, m2)] = res.p_value
            table[p] = row
        out["t"] = table
        if params_possible:
            params_table = {}
            for parameter in PARAMETERS:
                row = {}
                for m1, m2 in pairs:
                    res = t_func(
                        param_vector(payload, m1, parameter), param_vector(payload, m2, parameter)
                    )
                    row[(m1, m2)] = res.p_value
                params_table[parameter] = row
            out["t_params"] = params_table

    if "f" in tests:
        table = {}
        for p in problems:
            row = {}
            for m1, m2 in pairs:
                try:
                    res = f_test_variance(
                        objective_vectors(payload, m1, p), objective_vectors(payload, m2, p)
                    )
                    row[(m1, m2)] = res.p_value
                except ValueError:
                    row[(m1, m2)] = None
            table[p] = row
        out["f"] = table

    if "friedman" in tests:
        table = {}
        for p in problems:
            block = np.column_stack([objective_vectors(payload, m, p) for m in methods])
            table[p] = friedman(block).p_value
        if params_possible:
            for parameter in PARAMETERS:
                block = np.column_stack([param_vector(payload, m, parameter) for m in methods])
                table[parameter] = friedman(block).p_value
        out["friedman"] = table

    if "anova" in tests:
        table = {}
        for p in problems:
            block = np.column_stack([objective_vectors(payload, m, p) for m in methods])
            rows_effect, cols_effect = two_way_anova(block)
            table[p] = {"rows": rows_effect.p_value, "columns": cols_effect.p_value}
        if params_possible:
            for parameter in PARAMETERS:
                block = np.column_stack([param_vector(payload, m, parameter) for m in methods])
                rows_effect, cols_effect = two_way_anova(block)
                table[parameter] = {"rows": rows_effect.p_value, "columns": cols_effect.p_value}
        out["anova"] = table

    return out


def stats_csvs(stats: dict) -> dict[str, str]:
    """Render compute_stats output as CSV files keyed by file name."""
    pairs = stats["pairs"]
    pair_headers = [f"{a}_vs_{b}" for a, b in pairs]
    files = {}

    def pair_table(table: dict, row_keys: list[str], label: str) -> str:
        rows = [[label] + pair_headers]
        for key in row_keys:
            rows.append([alias(key)] + [fmt(table[key][pair]) for pair in pairs])
        return _csv_text(rows)

    if "t" in stats:
        files["stats_ttest.csv"] = pair_table(stats["t"], stats["problems"], "function")
        if "t_params" in stats:
            files["stats_ttest_params.csv"] = pair_table(
                stats["t_params"], list(PARAMETERS), "parameter"
            )
    if "f" in stats:
        files["stats_ftest.csv"] = pair_table(stats["f"], stats["problems"], "function")
    if "friedman" in stats:
        rows = [["target", "p_value"]]
        for key in stats["problems"] + list(PARAMETERS):
            if key in stats["friedman"]:
                rows.append([alias(key), fmt(stats["friedman"][key])])
        files["stats_friedman.csv"] = _csv_text(rows)
    if "anova" in stats:
        rows = [["target", "row_effect_p", "method_effect_p"]]
        for key in stats["problems"] + list(PARAMETERS):
            if key in stats["anova"]:
                cell = stats["anova"][key]
                rows.append([alias(key), fmt(cell["rows"]), fmt(cell["columns"])])
        files["stats_anova.csv"] = _csv_text(rows)
    return files


# ---------------------------------------------------------------------------
# boxplots
# ---------------------------------------------------------------------------

def five_number_summary(values) -> dict:
    """min, Q1, median, Q3, max plus 1.5*IQR outliers and whisker positions.

    Quartiles use linear interpolation between closest ranks, matching
    numpy's default quantile method.
    """
    arr = np.sort(np.asarray(values, dtype=float))
    if arr.size < 2:
        raise ValueError(f"five-number summary needs at least 2 values, got {arr.size}")
    q1, med, q3 = (float(np.quantile(arr, q)) for q in (0.25, 0.5, 0.75))
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inliers = arr[(arr >= lo_fence) & (arr <= hi_fence)]
    outliers = arr[(arr < lo_fence) | (arr > hi_fence)]
    return {
        "count": int(arr.size),
        "min": float(arr[0]),
        "q1": q1,
        "median": med,
        "q3": q3,
        "max": float(arr[-1]),
        "whisker_low": float(inliers[0]) if inliers.size else q1,
        "whisker_high": float(inliers[-1]) if inliers.size else q3,
        "outliers": [float(v) for v in outliers],
    }


def boxplot_data(payload: dict) -> dict[tuple[str, str], dict]:
    """Five-number summaries per (parameter, method) from best-parameter tables.

    Boxes with fewer than 2 data points are omitted with a warning.
    """
    boxes = {}
    for parameter in PARAMETERS:
        for method in payload["methods"]:
            values = param_vector(payload, method, parameter)
            if values.size < 2:
                print(
                    f"warning: skipping {parameter}/{method} box: only {values.size} value(s)",
                    file=sys.stderr,
                )
                continue
            boxes[(parameter, method)] = five_number_summary(values)
    return boxes


def boxplot_csv(boxes: dict[tuple[str, str], dict]) -> str:
    rows = [[
        "parameter", "method", "count", "min", "q1", "median", "q3", "max",
        "whisker_low", "whisker_high", "outliers",
    ]]
    for (parameter, method), box in boxes.items():
        rows.append([
            parameter, method, str(box["count"]),
            fmt(box["min"]), fmt(box["q1"]), fmt(box["median"]), fmt(box["q3"]), fmt(box["max"]),
            fmt(box["whisker_low"]), fmt(box["whisker_high"]),
            ";".join(fmt(v) for v in box["outliers"]),
        ])
    return _csv_text(rows)


def boxplot_svg(boxes: dict[tuple[str, str], dict], methods: list[str]) -> str:
    """Three-panel boxplot (one panel per parameter, one box per method)."""
    panel_w, panel_h = 220, 260
    margin, top, bottom = 46, 34, 30
    width = len(PARAMETERS) * panel_w
    height = top + panel_h + bottom
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    greek = {"theta": "θ", "beta": "β", "gamma": "γ"}
    for panel_idx, parameter in enumerate(PARAMETERS):
        x0 = panel_idx * panel_w + margin
        plot_w = panel_w - margin - 14
        present = [m for m in methods if (parameter, m) in boxes]
        values = []
        for m in present:
            box = boxes[(parameter, m)]
            values.extend([box["min"], box["max"]])
        if not values:
            continue
        lo, hi = min(values), max(values)
        if hi <= lo:
            lo, hi = lo - 0.5, hi + 0.5
        pad = 0.08 * (hi - lo)
        lo, hi = lo - pad, hi + pad

        def ty(v):
            return top + panel_h * (1.0 - (v - lo) / (hi - lo))

        # axis with 5 ticks
        parts.append(
            f'<line x1="{x0}" y1="{top}" x2="{x0}" y2="{top + panel_h}" stroke="black"/>'
        )
        for tick in np.linspace(lo, hi, 5):
            y = ty(tick)
            parts.append(f'<line x1="{x0 - 4}" y1="{y:.1f}" x2="{x0}" y2="{y:.1f}" stroke="black"/>')
            parts.append(
                f'<text x="{x0 - 7}" y="{y + 3.5:.1f}" text-anchor="end">{tick:.3g}</text>'
            )
        parts.append(
            f'<text x="{x0 + plot_w / 2:.1f}" y="{top - 12}" text-anchor="middle" '
            f'font-size="14">{greek.get(parameter, parameter)}</text>'
        )
        slot = plot_w / max(len(present), 1)
        for k, m in enumerate(present):
            box = boxes[(parameter, m)]
            cx = x0 + slot * (k + 0.5) + 8
            half = min(22.0, slot * 0.32)
            y_q1, y_q3, y_med = ty(box["q1"]), ty(box["q3"]), ty(box["median"])
            y_wl, y_wh = ty(box["whisker_low"]), ty(box["whisker_high"])
            parts.append(
                f'<line x1="{cx:.1f}" y1="{y_wl:.1f}" x2="{cx:.1f}" y2="{y_q1:.1f}" stroke="black"/>'
            )
            parts.append(
                f'<line x1="{cx:.1f}" y1="{y_q3:.1f}" x2="{cx:.1f}" y2="{y_wh:.1f}" stroke="black"/>'
            )
            for y_cap in (y_wl, y_wh):
                parts.append(
                    f'<line x1="{cx - half * 0.6:.1f}" y1="{y_cap:.1f}" '
                    f'x2="{cx + half * 0.6:.1f}" y2="{y_cap:.1f}" stroke="black"/>'
                )
            parts.append(
                f'<rect x="{cx - half:.1f}" y="{min(y_q3, y_q1):.1f}" width="{2 * half:.1f}" '
                f'height="{abs(y_q1 - y_q3):.1f}" fill="#9ecae1" stroke="black"/>'
            )
            parts.append(
                f'<line x1="{cx - half:.1f}" y1="{y_med:.1f}" x2="{cx + half:.1f}" '
                f'y2="{y_med:.1f}" stroke="#d62728" stroke-width="2"/>'
            )
            for v in box["outliers"]:
                parts.append(
                    f'<circle cx="{cx:.1f}" cy="{ty(v):.1f}" r="2.5" fill="none" stroke="black"/>'
                )
            parts.append(
                f'<text x="{cx:.1f}" y="{top + panel_h + 16}" text-anchor="middle">{m}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

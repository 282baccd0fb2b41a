#!/usr/bin/env python3
"""Regenerate src/fatune/data/stats_oracle.json.

Reference CDF values come from adaptive quadrature of the densities
(scipy.integrate.quad), deliberately independent of the continued-fraction /
series implementations in fatune.stats that the vectors exist to check.
"""
import json
import math
import pathlib

import numpy as np
from scipy.integrate import quad

OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "fatune" / "data" / "stats_oracle.json"
TOLERANCE = 1e-8
QUAD_KW = dict(epsabs=1e-13, epsrel=1e-13, limit=400)


def t_pdf(x, df):
    c = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)
    return math.exp(c - (df + 1) / 2 * math.log1p(x * x / df))


def chi2_pdf(x, df):
    if x <= 0:
        return 0.0
    c = -math.lgamma(df / 2) - (df / 2) * math.log(2.0)
    return math.exp(c + (df / 2 - 1) * math.log(x) - x / 2)


def f_pdf(x, d1, d2):
    if x <= 0:
        return 0.0
    c = (
        math.lgamma((d1 + d2) / 2)
        - math.lgamma(d1 / 2)
        - math.lgamma(d2 / 2)
        + (d1 / 2) * math.log(d1 / d2)
    )
    return math.exp(c + (d1 / 2 - 1) * math.log(x) - (d1 + d2) / 2 * math.log1p(d1 * x / d2))


def t_cdf_quad(t, df):
    val, err = quad(t_pdf, 0.0, abs(t), args=(df,), **QUAD_KW)
    assert err < 1e-11, (t, df, err)
    return 0.5 - val if t < 0 else 0.5 + val


def chi2_cdf_quad(x, df):
    val, err = quad(chi2_pdf, 0.0, x, args=(df,), **QUAD_KW)
    assert err < 1e-11, (x, df, err)
    return min(val, 1.0)


def f_cdf_quad(x, d1, d2):
    val, err = quad(f_pdf, 0.0, x, args=(d1, d2), **QUAD_KW)
    assert err < 1e-11, (x, d1, d2, err)
    return min(val, 1.0)


def main():
    rng = np.random.default_rng(20250810)
    entries = []

    for _ in range(40):
        df = float(np.round(rng.uniform(1.0, 120.0), 3))
        t = float(np.round(rng.uniform(-8.0, 8.0), 4))
        entries.append({"kind": "t", "args": [t, df], "value": t_cdf_quad(t, df)})

    for _ in range(40):
        df = float(np.round(rng.uniform(0.5, 80.0), 3))
        x = float(np.round(rng.uniform(0.0, 3.0) * df, 4))
        entries.append({"kind": "chi2", "args": [x, df], "value": chi2_cdf_quad(x, df)})

    for _ in range(40):
        d1 = float(np.round(rng.uniform(1.0, 60.0), 3))
        d2 = float(np.round(rng.uniform(1.0, 60.0), 3))
        x = float(np.round(rng.uniform(0.0, 8.0), 4))
        entries.append({"kind": "f", "args": [x, d1, d2], "value": f_cdf_quad(x, d1, d2)})

    # pinned reference points used by the worked-example tests
    entries.append({"kind": "t", "args": [2.228, 10.0], "value": t_cdf_quad(2.228, 10.0)})
    entries.append({"kind": "t", "args": [-1.0, 8.0], "value": t_cdf_quad(-1.0, 8.0)})
    entries.append({"kind": "chi2", "args": [20.0, 2.0], "value": chi2_cdf_quad(20.0, 2.0)})
    entries.append({"kind": "f", "args": [4.0, 9.0, 9.0], "value": f_cdf_quad(4.0, 9.0, 9.0)})

    payload = {"tolerance": TOLERANCE, "entries": entries}
    OUT.write_text(json.dumps(payload, indent=1) + "\n")
    print(f"wrote {len(entries)} vectors to {OUT}")


if __name__ == "__main__":
    main()

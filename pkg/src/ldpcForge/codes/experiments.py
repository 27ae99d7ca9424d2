"""Empirical sweeps: sample codes over a geometric grid of blocklengths, search each one
and compare the found weights with the theoretical curve.
"""

import logging
import math
import time
from pathlib import Path
from typing import Dict, List, Optional, TextIO, Union

import pandas as pd

from ldpcForge.codes import bounds
from ldpcForge.codes.code_model import sample_code, validate_params
from ldpcForge.codes.errors import InvalidParams
from ldpcForge.codes.models import RowPolicy, SearchConfig, SweepConfig
from ldpcForge.codes.search import resolve_t, search_min_weight

SWEEP_CSV_HEADER = ["n", "m", "r", "k", "t", "seed", "found_weight", "bound", "chains_used", "seconds"]
SLOPE_COLUMNS = ["k", "points", "failures", "found_slope_n", "bound_slope_n", "found_slope_m", "bound_slope_m"]
SUMMARY_COLUMNS = ["k", "n", "m", "runs", "failures", "median_found", "min_found", "bound"]
DIRECTION_POINTS = 2


def geometric_grid(n_min: int, n_max: int, factor: int = 2) -> List[int]:
    """n_min, n_min*factor, ... up to n_max inclusive."""
    grid = []
    n = n_min
    while n <= n_max:
        grid.append(n)
        n *= factor
    return grid


def _write_rows(f: TextIO, rows: List[Dict], header: bool = False) -> None:
    pd.DataFrame(rows, columns=SWEEP_CSV_HEADER).to_csv(f, header=header, index=False, lineterminator="\n")
    f.flush()


def run_sweep(config: SweepConfig, out: Union[str, Path, TextIO]) -> pd.DataFrame:
    """Run the sweep, writing one self-contained CSV row per (n, seed, k) as soon as it is known.

    Returns:
        All rows as a DataFrame.
    """
    rows: List[Dict] = []
    f = open(out, 'w', newline='') if isinstance(out, (str, Path)) else out
    try:
        _write_rows(f, [], header=True)
        for n in config.n_grid:
            m = math.ceil(config.rate * n)
            try:
                params = validate_params(n, m, config.r)
            except InvalidParams as e:
                logging.warning(f"[sweep] skipping n={n}: {str(e)}")
                continue
            for s in range(config.seeds_per_point):
                seed = config.base_seed + s
                code = sample_code(params, RowPolicy.ANY_NON_ZERO, seed)
                for k in config.k_list:
                    search_config = SearchConfig(k=k, t=0, max_chains=config.budget, seed=seed, threads=config.threads)
                    t = resolve_t(code, search_config)
                    started = time.perf_counter()
                    result = search_min_weight(code, search_config)
                    seconds = time.perf_counter() - started
                    row = {
                        "n": n,
                        "m": m,
                        "r": config.r,
                        "k": k,
                        "t": t,
                        "seed": seed,
                        "found_weight": None if result is None else result.weight,
                        "bound": bounds.weight_bound(t, k, config.r),
                        "chains_used": config.budget if result is None else result.chains_used,
                        "seconds": round(seconds, 4),
                    }
                    if result is not None and result.weight > row["bound"]:
                        logging.error(f"[sweep] row exceeds its bound: {row}")
                    logging.info(f"[sweep] {row}")
                    _write_rows(f, [row])
                    rows.append(row)
    finally:
        if isinstance(out, (str, Path)):
            f.close()
    return pd.DataFrame(rows, columns=SWEEP_CSV_HEADER)


def _slope(frame: pd.DataFrame, x: str, y: str, how: str) -> Optional[float]:
    grouped = frame.groupby(x)[y].agg(how)
    if len(grouped) < 2:
        return None
    return bounds.loglog_slope(grouped.index.to_numpy(dtype=float), grouped.to_numpy(dtype=float))


def fit_slopes(rows: pd.DataFrame) -> pd.DataFrame:
    """Per-k least-squares log-log slopes of the median found weight and of the bound.

    Rows where the search failed are left out of the found-weight fit and counted.
    """
    out = []
    for k, frame in rows.groupby("k"):
        found = frame[frame["found_weight"].notna()]
        out.append({
            "k": int(k),
            "points": int(found["n"].nunique()),
            "failures": int(len(frame) - len(found)),
            "found_slope_n": _slope(found, "n", "found_weight", "median"),
            "bound_slope_n": _slope(frame, "n", "bound", "median"),
            "found_slope_m": _slope(found, "m", "found_weight", "median"),
            "bound_slope_m": _slope(frame, "m", "bound", "median"),
        })
    return pd.DataFrame(out, columns=SLOPE_COLUMNS)


def summarize(rows: pd.DataFrame) -> pd.DataFrame:
    """Median and minimum found weight per (k, n), next to the median bound.

    Failed searches count as runs and as failures but not in the weights.
    """
    if rows.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    rows = rows.assign(found_weight=pd.to_numeric(rows["found_weight"]))
    grouped = rows.groupby(["k", "n"], sort=True).agg(
        m=("m", "first"),
        runs=("seed", "size"),
        found=("found_weight", "count"),
        median_found=("found_weight", "median"),
        min_found=("found_weight", "min"),
        bound=("bound", "median"),
    ).reset_index()
    grouped["failures"] = grouped["runs"] - grouped["found"]
    return grouped[SUMMARY_COLUMNS]


def reference_curve(m: int, r: int) -> int:
    """The single-column (k=0) weight bound at m, the curve larger k should beat."""
    return bounds.weight_bound(bounds.choose_t(m, r, 0), 0, r)


def direction_violations(rows: pd.DataFrame) -> List[str]:
    """Soft checks on the direction of improvement over a sweep.

    For the DIRECTION_POINTS largest n, the median found weight at the largest k
    should not exceed the median at the smallest k; and every found weight should
    sit at or below the k=0 reference curve of its m. Returns one message per miss.
    """
    messages: List[str] = []
    rows = rows.assign(found_weight=pd.to_numeric(rows["found_weight"]))
    found = rows[rows["found_weight"].notna()]
    if found.empty:
        return messages
    for row in found.itertuples(index=False):
        curve = reference_curve(int(row.m), int(row.r))
        if row.found_weight > curve:
            messages.append(f"n={row.n} k={row.k} seed={row.seed}: found weight {int(row.found_weight)} "
                            f"above the k=0 curve {curve}")
    k_low, k_high = int(rows["k"].min()), int(rows["k"].max())
    if k_low == k_high:
        return messages
    medians = found.groupby(["k", "n"])["found_weight"].median()
    for n in sorted(rows["n"].unique())[-DIRECTION_POINTS:]:
        if (k_low, n) not in medians.index or (k_high, n) not in medians.index:
            messages.append(f"n={n}: no found weight at k={k_low} or k={k_high} to compare")
            continue
        low, high = medians[(k_low, n)], medians[(k_high, n)]
        if high > low:
            messages.append(f"n={n}: median at k={k_high} ({high:g}) exceeds median at k={k_low} ({low:g})")
    return messages


def bound_violations(rows: pd.DataFrame) -> pd.DataFrame:
    """Successful rows whose found weight exceeds their bound; empty when the search is sound."""
    found = rows[rows["found_weight"].notna()]
    return found[found["found_weight"] > found["bound"]]


def plot_sweep(rows: pd.DataFrame, path: Union[str, Path]) -> None:
    """Log-log scatter of found weights with the bound curve of each k, saved as SVG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for k, frame in rows.groupby("k"):
        found = frame[frame["found_weight"].notna()]
        ax.scatter(found["n"], found["found_weight"], s=12, label=f"found, k={k}")
        curve = frame.groupby("n")["bound"].median()
        ax.plot(curve.index, curve.to_numpy(), linestyle="--", linewidth=1, label=f"bound, k={k}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("weight")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)

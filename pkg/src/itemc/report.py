"""Aggregate results tables into per-figure series, CSV files and PNG plots."""
from __future__ import annotations

import csv
import math
from collections import defaultdict
from pathlib import Path
from typing import Iterable

import numpy as np

from . import plotting
from .bench import MISSING, SCHEMA, read_results
from .instance import GraphSpec

FIGURE_KINDS = (
    "ratio_vs_iteration", "ratio_vs_n", "ratio_vs_density", "entropy_vs_n", "best3_vs_n",
    "ratio_vs_tau",
)
Z95 = 1.959963984540054
SETTING = ("mode", "sorting", "tau", "alpha")


def _num(value) -> float | None:
    if value is None or value == "" or value == MISSING:
        return None
    v = float(value)
    return v if math.isfinite(v) else None


def mean_ci(values: Iterable[float | None]) -> dict:
    """Mean and normal-approximation 95% interval; missing values are dropped."""
    xs = np.array([v for v in values if v is not None], dtype=float)
    if xs.size == 0:
        return {"mean": None, "ci_low": None, "ci_high": None, "count": 0}
    mean = float(xs.mean())
    if xs.size < 2:
        return {"mean": mean, "ci_low": None, "ci_high": None, "count": 1}
    half = Z95 * float(xs.std(ddof=1)) / math.sqrt(xs.size)
    return {"mean": mean, "ci_low": mean - half, "ci_high": mean + half, "count": int(xs.size)}


def graph_density(graph: str, n: int) -> float:
    spec = GraphSpec.parse(graph)
    if spec.kind == "complete":
        return 1.0
    if spec.kind == "three_regular":
        return 3.0 / (n - 1)
    return float(spec.density)


def least_squares_slope(x: Iterable[float], y: Iterable[float | None]) -> float | None:
    pts = [(a, b) for a, b in zip(x, y) if b is not None]
    if len({a for a, _ in pts}) < 2:
        return None
    xs, ys = np.array(pts, dtype=float).T
    return float(np.polyfit(xs, ys, 1)[0])


def _ratio_trace(row: dict, length: int | None = None) -> list[float | None]:
    raw = row.get("ratio_trace", MISSING)
    trace = [] if raw in ("", MISSING, None) else [float(v) for v in raw.split(";")]
    if length is not None and trace:
        # a converged run keeps its last value for the iterations it skipped
        trace = trace + [trace[-1]] * (length - len(trace))
    return trace


def _group(rows: list[dict], keys: tuple[str, ...]) -> dict[tuple, list[dict]]:
    groups = defaultdict(list)
    for r in rows:
        groups[tuple(r[k] for k in keys)].append(r)
    return dict(sorted(groups.items(), key=lambda kv: _sort_key(kv[0])))


def _sort_key(key: tuple) -> tuple:
    out = []
    for v in key:
        try:
            out.append((0, float(v), ""))
        except (TypeError, ValueError):
            out.append((1, 0.0, str(v)))
    return tuple(out)


def summarize(rows: list[dict]) -> list[dict]:
    """One line per cell ``(n, graph, setting)`` with means and 95% intervals."""
    out = []
    for key, grp in _group(rows, ("n", "graph") + SETTING).items():
        ok = [r for r in grp if r.get("status") == "done"]
        line = dict(zip(("n", "graph") + SETTING, key))
        line["rows"] = len(grp)
        line["failed"] = len(grp) - len(ok)
        for metric in ("approx_ratio", "best3_first", "max_entropy", "iterations_to_convergence"):
            stats = mean_ci(_num(r.get(metric)) for r in ok)
            line[f"{metric}_mean"] = stats["mean"]
            line[f"{metric}_ci_low"] = stats["ci_low"]
            line[f"{metric}_ci_high"] = stats["ci_high"]
        its = [_num(r.get("iterations_to_convergence")) for r in ok]
        its = [v if v is not None else math.inf for v in its]
        line["iterations_to_convergence_median"] = float(np.median(its)) if its else None
        out.append(line)
    return out


def figure_series(rows: list[dict], kind: str) -> list[dict]:
    """Plot-ready points for ``kind``; one dict per point, ``series`` labels the curve."""
    if kind not in FIGURE_KINDS:
        raise ValueError(f"unknown figure kind {kind!r}; choose from {FIGURE_KINDS}")
    points = []

    def setting_label(key):
        return ",".join(f"{k}={v}" for k, v in zip(SETTING, key))

    if kind == "ratio_vs_iteration":
        for key, grp in _group(rows, ("graph", "n") + SETTING).items():
            graph, n = key[0], key[1]
            grp = [r for r in grp if r.get("status") == "done"]
            length = max([len(_ratio_trace(r)) for r in grp], default=0)
            traces = [_ratio_trace(r, length) for r in grp]
            for t in range(max(length, 1)):
                stats = mean_ci(tr[t] for tr in traces if len(tr) > t)
                points.append({"series": f"{graph} n={n}", "graph": graph, "n": n,
                               "setting": setting_label(key[2:]), "iteration": t + 1, **stats})
    elif kind in ("ratio_vs_n", "best3_vs_n", "entropy_vs_n"):
        metric = {"ratio_vs_n": "approx_ratio", "best3_vs_n": "best3_first",
                  "entropy_vs_n": "max_entropy"}[kind]
        for key, grp in _group(rows, ("graph",) + SETTING).items():
            series = f"{key[0]} {setting_label(key[1:])}"
            cells = _group(grp, ("n",))
            slope = None
            if kind == "entropy_vs_n":
                done = [r for r in grp if r.get("status") == "done"]
                slope = least_squares_slope([float(r["n"]) for r in done],
                                            [_num(r.get(metric)) for r in done])
            for (n,), cell in cells.items():
                stats = mean_ci(_num(r.get(metric)) for r in cell if r.get("status") == "done")
                point = {"series": series, "graph": key[0], "setting": setting_label(key[1:]),
                         "n": n, **stats}
                if kind == "best3_vs_n":
                    point["uniform_baseline"] = 3.0 / 2 ** int(n)
                if kind == "entropy_vs_n":
                    point["slope"] = slope
                points.append(point)
    elif kind == "ratio_vs_density":
        for key, grp in _group(rows, ("n",) + SETTING).items():
            n = int(key[0])
            for (graph,), cell in _group(grp, ("graph",)).items():
                stats = mean_ci(_num(r.get("approx_ratio")) for r in cell if r.get("status") == "done")
                points.append({"series": f"n={n} {setting_label(key[1:])}", "n": n,
                               "graph": graph, "density": graph_density(graph, n), **stats})
        points.sort(key=lambda p: (p["series"], p["density"]))
    elif kind == "ratio_vs_tau":
        for key, grp in _group(rows, ("graph", "n", "mode", "sorting", "alpha")).items():
            for (tau,), cell in _group(grp, ("tau",)).items():
                stats = mean_ci(_num(r.get("approx_ratio")) for r in cell if r.get("status") == "done")
                points.append({"series": f"{key[0]} n={key[1]} {key[2]} {key[3]}",
                               "graph": key[0], "n": key[1], "tau": float(tau), **stats})
    return points


def _write_csv(points: list[dict], path: Path) -> None:
    cols = []
    for p in points:
        for k in p:
            if k not in cols:
                cols.append(k)
    with path.open("w", newline="") as fh:
        fh.write(SCHEMA + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for p in points:
            w.writerow([_cell(p.get(c)) for c in cols])


def _cell(v) -> str:
    if v is None:
        return MISSING
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else MISSING
    return str(v)


_AXES = {
    "ratio_vs_iteration": ("iteration", "approximation ratio", False),
    "ratio_vs_n": ("n", "approximation ratio", False),
    "ratio_vs_density": ("density", "approximation ratio", False),
    "entropy_vs_n": ("n", "max entanglement entropy (bits)", False),
    "best3_vs_n": ("n", "best-3 probability", True),
    "ratio_vs_tau": ("tau", "approximation ratio", False),
}


def plot_series(points: list[dict], kind: str, path: Path) -> None:
    xkey, ylabel, logy = _AXES[kind]
    fig, ax = plotting.new_figure()
    by_series = defaultdict(list)
    for p in points:
        if p["mean"] is not None:
            by_series[p["series"]].append(p)
    for label, pts in by_series.items():
        pts.sort(key=lambda p: float(p[xkey]))
        x = [float(p[xkey]) for p in pts]
        plotting.errorbar_series(ax, x, [p["mean"] for p in pts],
                                 [p["ci_low"] for p in pts], [p["ci_high"] for p in pts], label)
    if kind == "best3_vs_n":
        base = sorted({(int(p["n"]), p["uniform_baseline"]) for p in points})
        if base:
            ax.plot(*zip(*base), "g--", label="uniform 3/2^n")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xkey)
    ax.set_ylabel(ylabel)
    if by_series:
        ax.legend()
    plotting.save(fig, path)


def report(results, kind: str, out_dir, plot: bool = True) -> dict[str, Path]:
    """Write ``summary.csv``, ``<kind>.csv`` and (optionally) ``<kind>.png``.

    ``results`` is a results CSV path or a list of row dicts.
    """
    if kind not in FIGURE_KINDS:
        raise ValueError(f"unknown figure kind {kind!r}; choose from {FIGURE_KINDS}")
    rows = read_results(results) if isinstance(results, (str, Path)) else list(results)
    if not rows:
        raise ValueError("results table is empty")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {"summary": out_dir / "summary.csv", "series": out_dir / f"{kind}.csv"}
    _write_csv(summarize(rows), paths["summary"])
    points = figure_series(rows, kind)
    _write_csv(points, paths["series"])
    if plot:
        paths["figure"] = out_dir / f"{kind}.png"
        plot_series(points, kind, paths["figure"])
    return paths

"""Experiment grids over instance families and solver settings."""
from __future__ import annotations

import csv
import itertools
import json
import logging
import math
import os
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .baselines import BRUTE_FORCE_MAX_QUBITS, OptimaReport, brute_force, reference_energy
from .instance import GraphSpec, IsingInstance, bits_to_index, parse_bitstring, sample_random_ising
from .simulator import SampleSet, StateVector
from .solver import SolverConfig, solve

log = logging.getLogger(__name__)

SCHEMA = "# itemc-results v1"
MISSING = "NA"
OUTPUT_DIR_ENV = "ITEMC_OUTPUT_DIR"
RATIO_SLACK = 1e-9

COLUMNS = (
    "n", "graph", "instance", "instance_seed", "mode", "sorting", "tau", "alpha",
    "status", "chosen_ordering", "e_opt", "e_opt_exact", "cvar", "approx_ratio",
    "iterations", "iterations_to_convergence", "converged", "best_energy",
    "best3_first", "best3_final", "max_entropy", "circuit_executions", "total_shots",
    "ratio_trace", "error",
)
KEY_COLUMNS = ("n", "graph", "instance", "tau", "alpha", "mode", "sorting")


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


# -- metrics -------------------------------------------------------------------


def approximation_ratio(cvar_value: float, e_opt: float) -> float:
    """``CVaR / E_opt``; only defined for a negative optimum."""
    if not e_opt < 0:
        raise ValueError(
            f"approximation ratio needs a negative optimum energy, got E_opt={e_opt}"
        )
    return cvar_value / e_opt


def best_k_probability(source: StateVector | SampleSet, optima: OptimaReport, k: int = 3) -> float:
    """Weight of the ``k`` lowest-energy bitstrings in a state or a sample set."""
    if not optima.exact:
        raise ValueError("best-k probability needs exact optima")
    if len(optima.solutions) < k:
        raise ValueError(f"need {k} optima, report has {len(optima.solutions)}")
    targets = [parse_bitstring(b) for b in optima.bitstrings[:k]]
    if isinstance(source, StateVector):
        idx = bits_to_index(np.array(targets))
        return float(source.probabilities()[idx].sum())
    wanted = {bytes(t) for t in targets}
    hits = sum(int(c) for b, c in zip(source.bits, source.counts) if bytes(b) in wanted)
    return hits / source.shots


# -- configuration -------------------------------------------------------------


@dataclass
class ExperimentConfig:
    sizes: list[int]
    graphs: list[str] = field(default_factory=lambda: ["complete"])
    instances_per_cell: int = 30
    solver: dict = field(default_factory=dict)
    taus: list[float] | None = None
    alphas: list[float] | None = None
    modes: list[str] | None = None
    sortings: list[str] | None = None
    metrics: list[str] = field(default_factory=lambda: ["ratio", "best3"])
    output: str = "results.csv"
    master_seed: int = 0
    best_k: int = 3
    workers: int = 1

    def __post_init__(self):
        if self.instances_per_cell < 1:
            raise ValueError("instances_per_cell must be positive")
        self.graphs = [str(GraphSpec.parse(g)) for g in self.graphs]
        unknown = set(self.metrics) - {"ratio", "best3", "entropy"}
        if unknown:
            raise ValueError(f"unknown metrics {sorted(unknown)}")
        self.template()  # validate

    def template(self) -> SolverConfig:
        return SolverConfig.from_dict(self.solver)

    def settings(self) -> list[dict]:
        base = self.template()
        grid = itertools.product(
            self.taus or [base.tau], self.alphas or [base.alpha],
            self.modes or [base.mode], self.sortings or [base.sorting],
        )
        return [dict(tau=t, alpha=a, mode=m, sorting=s) for t, a, m, s in grid]

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        text = path.read_text()
        if path.suffix in (".yaml", ".yml"):
            import yaml

            doc = yaml.safe_load(text)
        else:
            doc = json.loads(text)
        return cls(**doc)


def derive_seed(master: int, *parts) -> int:
    """Deterministic seed from the master seed and a cell/instance/setting key."""
    words = [zlib.crc32(str(p).encode()) for p in parts]
    return int(np.random.SeedSequence([master, *words]).generate_state(1, np.uint32)[0])


# -- rows ------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return MISSING
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value)) if math.isfinite(value) else MISSING
    return str(value)


def _format_row(row: dict) -> list[str]:
    return [v if isinstance(v := row.get(c), str) else _fmt(v) for c in COLUMNS]


def row_key(row: dict) -> tuple:
    return (
        int(row["n"]), str(row["graph"]), int(row["instance"]), float(row["tau"]),
        float(row["alpha"]), str(row["mode"]), str(row["sorting"]),
    )


@dataclass
class _Task:
    n: int
    graph: str
    index: int
    seed: int
    settings: list[dict]
    template: dict
    metrics: list[str]
    master_seed: int
    best_k: int


def _run_instance(task: _Task) -> list[tuple[dict, float]]:
    inst = sample_random_ising(task.n, task.graph, task.seed)
    diagonal = inst.energy_diagonal()
    optima = None
    if inst.n <= BRUTE_FORCE_MAX_QUBITS:
        optima = brute_force(inst, task.best_k, diagonal)
    out = []
    for setting in task.settings:
        start = time.perf_counter()
        row = {
            "n": task.n, "graph": task.graph, "instance": task.index,
            "instance_seed": task.seed, **setting,
        }
        try:
            row.update(_evaluate(inst, diagonal, optima, task, setting))
            row["status"] = "done"
        except Exception as exc:  # recorded in-row, the grid continues
            log.warning("row %s failed: %s", row_key(row), exc)
            row["status"] = "failed"
            row["error"] = f"{type(exc).__name__}: {exc}"
        out.append((row, time.perf_counter() - start))
    return out


def _evaluate(inst: IsingInstance, diagonal: np.ndarray, optima: OptimaReport | None,
              task: _Task, setting: dict) -> dict:
    cfg = dict(task.template)
    cfg.update(setting)
    cfg["seed"] = derive_seed(task.master_seed, task.n, task.graph, task.index, *setting.values())
    cfg["track_entropy"] = "entropy" in task.metrics or cfg.get("track_entropy", False)
    config = SolverConfig.from_dict(cfg)

    first_states: dict[str, StateVector] = {}
    last_state: list[StateVector] = []

    want_best3 = optima is not None and "best3" in task.metrics

    def hook(t, kind, state):
        if not want_best3:
            return
        if t == 0:
            first_states[kind] = state
        last_state[:] = [state]

    record = solve(inst, config, state_hook=hook)
    if optima is not None:
        e_opt, exact = optima.ground_energy, True
    else:
        e_opt, exact = reference_energy(inst, seed=config.seed, itemc_best=record.best_energy)
    trace = [approximation_ratio(c, e_opt) for c in record.cvar_trace()]
    row = {
        "chosen_ordering": record.ordering.kind,
        "e_opt": e_opt,
        "e_opt_exact": exact,
        "cvar": record.final.cvar,
        "approx_ratio": trace[-1],
        "iterations": len(record.iterations),
        "iterations_to_convergence": record.iterations_to_convergence,
        "converged": record.converged,
        "best_energy": record.best_energy,
        "max_entropy": record.max_entropy,
        "circuit_executions": record.circuit_executions,
        "total_shots": record.total_shots,
        "ratio_trace": ";".join(repr(float(r)) for r in trace),
    }
    if want_best3:
        first = first_states[record.ordering.kind]
        final = last_state[0] if len(record.iterations) > 1 else first
        row["best3_first"] = best_k_probability(first, optima, task.best_k)
        row["best3_final"] = best_k_probability(final, optima, task.best_k)
    if exact and not row["approx_ratio"] <= 1 + RATIO_SLACK:
        raise AssertionError(f"approximation ratio {row['approx_ratio']} exceeds 1 with exact optimum")
    return row


def read_results(path) -> list[dict]:
    """Rows of a results CSV; truncated or malformed lines are skipped."""
    path = Path(path)
    if not path.exists():
        return []
    with path.open(newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = []
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None:
        return []
    for rec in reader:
        if len(rec) != len(header):
            continue
        rows.append(dict(zip(header, rec)))
    return rows


def write_results(rows: Iterable[dict], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(SCHEMA + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in sorted(rows, key=row_key):
            w.writerow(_format_row(row))


class _Appender:
    """Single writer for rows completed during a run (completion markers)."""

    def __init__(self, path: Path):
        self.path = path
        new = not path.exists() or path.stat().st_size == 0
        self.fh = path.open("a", newline="")
        self.w = csv.writer(self.fh, lineterminator="\n")
        if new:
            self.fh.write(SCHEMA + "\n")
            self.w.writerow(COLUMNS)

    def add(self, row: dict) -> None:
        self.w.writerow(_format_row(row))
        self.fh.flush()

    def close(self) -> None:
        self.fh.close()


def run_experiment(config: ExperimentConfig, output: str | os.PathLike | None = None) -> list[dict]:
    """Run (or resume) the grid; writes the canonical CSV and returns its rows.

    Rows already marked ``done`` in the output or its ``.partial`` log are kept
    and not recomputed.  Wall times go to a ``.timings.csv`` sidecar so the
    results file itself is byte-reproducible.
    """
    out = Path(output or config.output)
    partial = out.with_name(out.name + ".partial")
    done = {}
    for row in read_results(out) + read_results(partial):
        if row.get("status") == "done":
            done[row_key(row)] = row

    settings = config.settings()
    tasks = []
    for n in config.sizes:
        for graph in config.graphs:
            for idx in range(config.instances_per_cell):
                todo = [s for s in settings if row_key(
                    {"n": n, "graph": graph, "instance": idx, **s}) not in done]
                if not todo:
                    continue
                tasks.append(_Task(
                    n, graph, idx, derive_seed(config.master_seed, n, graph, idx), todo,
                    dict(config.solver), list(config.metrics), config.master_seed, config.best_k,
                ))

    timings = []
    appender = _Appender(partial)
    try:
        if config.workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(config.workers) as pool:
                results = pool.map(_run_instance, tasks)
                batches = list(results)
        else:
            batches = (_run_instance(task) for task in tasks)
        for batch in batches:
            for row, dt in batch:
                appender.add(row)
                timings.append((row_key(row), dt))
                done[row_key(row)] = row
    finally:
        appender.close()

    rows = [{c: r.get(c) for c in COLUMNS} for r in done.values()]
    write_results(rows, out)
    partial.unlink(missing_ok=True)
    if timings:
        tpath = out.with_name(out.stem + ".timings.csv")
        with tpath.open("a", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            if fh.tell() == 0:
                w.writerow(KEY_COLUMNS + ("wall_time_s",))
            for key, dt in sorted(timings):
                w.writerow([*key, f"{dt:.4f}"])
    return read_results(out)

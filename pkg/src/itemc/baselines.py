"""Classical reference solvers: exhaustive enumeration and simulated annealing."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .instance import IsingInstance, format_bitstring, index_to_bits
from .simulator import SampleSet, SeedLike, make_rng

BRUTE_FORCE_MAX_QUBITS = 24
_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class OptimaReport:
    """The ``k`` lowest-energy configurations, ascending."""

    solutions: tuple[tuple[str, float], ...]
    exact: bool
    ground_degeneracy: int | None = None
    n: int | None = None

    @property
    def ground_energy(self) -> float:
        return self.solutions[0][1]

    @property
    def bitstrings(self) -> list[str]:
        return [b for b, _ in self.solutions]

    @property
    def fully_degenerate(self) -> bool:
        return self.n is not None and self.ground_degeneracy == 1 << self.n

    def to_dict(self) -> dict:
        return {
            "kind": "optima_report",
            "exact": self.exact,
            "n": self.n,
            "ground_degeneracy": self.ground_degeneracy,
            "solutions": [{"bits": b, "energy": e} for b, e in self.solutions],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "OptimaReport":
        sols = tuple((s["bits"], float(s["energy"])) for s in doc["solutions"])
        return cls(sols, bool(doc["exact"]), doc.get("ground_degeneracy"), doc.get("n"))


def brute_force(inst: IsingInstance, k: int = 1, diagonal: np.ndarray | None = None) -> OptimaReport:
    """Exact ``k`` lowest configurations by enumerating all ``2^n`` bitstrings.

    Ties are ordered by ascending bitstring integer.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if inst.n > BRUTE_FORCE_MAX_QUBITS:
        raise ValueError(
            f"brute force is capped at n={BRUTE_FORCE_MAX_QUBITS} (got n={inst.n}); "
            "use simulated_annealing for larger instances"
        )
    e = inst.energy_diagonal() if diagonal is None else diagonal
    k_eff = min(k, e.size)
    cand = np.argpartition(e, k_eff - 1)[:k_eff] if k_eff < e.size else np.arange(e.size)
    # widen to every index tied with the k-th value so the tie-break is global
    cutoff = e[cand].max()
    cand = np.flatnonzero(e <= cutoff)
    cand = cand[np.lexsort((cand, e[cand]))][:k_eff]
    bits = index_to_bits(cand, inst.n)
    exact_e = inst.energies(bits)
    solutions = tuple((format_bitstring(b), float(v)) for b, v in zip(bits, exact_e))
    degeneracy = int(np.count_nonzero(e <= e.min() + _DEGENERACY_TOL))
    return OptimaReport(solutions, True, degeneracy, inst.n)


def annealing_schedule(inst: IsingInstance, sweeps: int) -> np.ndarray:
    """Geometric inverse temperatures from coefficient magnitudes.

    The hottest point flips the spin with the largest possible local field
    with probability 1/2; the coldest flips the weakest nonzero coefficient
    with probability 1/100.
    """
    jm = np.abs(inst.coupling_matrix())
    h = np.abs(inst.h_array)
    max_delta = 2.0 * float(np.max(h + jm.sum(axis=1)))
    nonzero = np.concatenate((h[h > 0], jm[jm > 0]))
    if max_delta == 0.0 or nonzero.size == 0:
        return np.ones(sweeps)
    min_delta = 2.0 * float(nonzero.min())
    beta_hot = math.log(2.0) / max_delta
    beta_cold = math.log(100.0) / min_delta
    if sweeps == 1:
        return np.array([beta_cold])
    return np.geomspace(beta_hot, beta_cold, sweeps)


def simulated_annealing(inst: IsingInstance, num_reads: int = 200, sweeps: int = 1000,
                        seed: SeedLike = 0) -> SampleSet:
    """Metropolis single-spin-flip annealing, all reads advanced together.

    Returns the final state of every read as a bound :class:`SampleSet`.
    """
    if num_reads < 1 or sweeps < 1:
        raise ValueError("num_reads and sweeps must be positive")
    rng = make_rng(seed)
    n = inst.n
    jm = inst.coupling_matrix()
    h = inst.h_array
    betas = annealing_schedule(inst, sweeps)
    z = rng.choice(np.array([-1.0, 1.0]), size=(num_reads, n))
    field = z @ jm + h
    for beta in betas:
        u = rng.random((n, num_reads))
        for i in range(n):
            delta = -2.0 * z[:, i] * field[:, i]
            flip = (delta <= 0.0) | (u[i] < np.exp(-beta * np.maximum(delta, 0.0)))
            if flip.any():
                change = np.where(flip, -2.0 * z[:, i], 0.0)
                z[:, i] += change
                field += change[:, None] * jm[i]
    bits = ((1 - z) / 2).astype(np.uint8)
    return SampleSet.from_rows(bits).bind(inst)


def reference_energy(inst: IsingInstance, sa_reads: int = 200, sa_sweeps: int = 1000,
                     seed: SeedLike = 0, itemc_best: float | None = None) -> tuple[float, bool]:
    """Best available optimum estimate and whether it is exact.

    Exact enumeration up to the brute-force cap, otherwise the lower of the
    annealing best and an optional ITEMC best-ever sample.
    """
    if inst.n <= BRUTE_FORCE_MAX_QUBITS:
        return brute_force(inst, 1).ground_energy, True
    best = simulated_annealing(inst, sa_reads, sa_sweeps, seed).best()[1]
    if itemc_best is not None:
        best = min(best, itemc_best)
    return best, False

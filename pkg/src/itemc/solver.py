"""Imaginary-time-evolution mimicking circuits (ITEMC) for Ising ground states.

One iteration builds a circuit that starts from the product state
``prod_i R_y(phi_i)|0>``, applies a layer of single-qubit ``R_y`` rotations
that reproduce the field part of ``exp(-tau H)`` exactly, and then one
``exp(-i(theta1 Z_i Y_j + theta0 Y_i Z_j)/2)`` gate per coupling whose angles
maximize the overlap with the locally ITE-evolved state.  The final state is
sampled, the lowest alpha-fraction of shots gives the CVaR and the per-qubit
``<Z>`` used to re-initialize the next iteration.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .instance import IsingInstance, format_bitstring
from .simulator import (
    SampleSet,
    StateVector,
    apply_ry,
    apply_yzzy,
    entanglement_entropy,
    half_partition,
    init_product_state,
    reduced_density_matrix,
    sample,
)

log = logging.getLogger(__name__)

MODES = ("measuring_exact", "measuring_sampled", "approximation")
ORDERING_KINDS = ("original", "ascending_J", "descending_J", "ascending_absJ", "descending_absJ")
EPS_DIV = 1e-12
OPTIMIZER_MAXITER = 10000

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_SDG = np.diag([1, -1j])
# rotate the eigenbasis of each Pauli onto the computational basis
_BASIS_CHANGE = {"Z": _I2, "X": _H, "Y": _H @ _SDG}
# commuting measurement settings for the two-qubit moments
SETTINGS = (("Z", "Z"), ("Y", "Z"), ("Z", "Y"), ("X", "X"), ("Y", "Y"))


# -- per-gate parameters ------------------------------------------------------


def single_qubit_angle(h: float, tau: float, phi: float) -> float:
    """Rotation that maps ``R_y(phi)|0>`` onto the normalized ``exp(-tau h Z) R_y(phi)|0>``.

    With ``tan(phi'/2) = exp(2 tau h) tan(phi/2)`` the result is ``phi' - phi``;
    at ``phi = pi/2`` this is ``2 arctan(-exp(-2 tau h)) + pi/2``.
    """
    if not (0.0 <= phi <= math.pi):
        raise ValueError(f"phi must lie in [0, pi], got {phi}")
    if phi == 0.0 or phi == math.pi:
        return 0.0
    x = tau * h
    # atan2 keeps the result in [0, pi] and avoids overflow of exp(2x) tan(phi/2)
    if x >= 0:
        new = 2.0 * math.atan2(math.sin(phi / 2), math.exp(-2.0 * x) * math.cos(phi / 2))
    else:
        new = 2.0 * math.atan2(math.exp(2.0 * x) * math.sin(phi / 2), math.cos(phi / 2))
    return new - phi


@dataclass(frozen=True)
class SingleQubitMoments:
    x: float
    y: float
    z: float

    @classmethod
    def of_angle(cls, phi: float) -> "SingleQubitMoments":
        return cls(math.sin(phi), 0.0, math.cos(phi))


def single_qubit_cost_complex(theta: float, m: SingleQubitMoments, tau_t: float) -> complex:
    """``<psi| exp(-tau_t Z) R_y(theta) |psi>`` from one-qubit moments."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    ch, sh = math.cosh(tau_t), math.sinh(tau_t)
    return c * (ch - sh * m.z) - 1j * s * (ch * m.y + 1j * sh * m.x)


def single_qubit_cost(theta: float, m: SingleQubitMoments, tau_t: float) -> float:
    return single_qubit_cost_complex(theta, m, tau_t).real


@dataclass(frozen=True)
class TwoQubitMoments:
    """Expectations entering the two-qubit overlap for an edge ``(i, j)``."""

    zz: float
    yz: float  # <Y_i Z_j>
    zy: float  # <Z_i Y_j>
    xi: float
    xj: float
    xx: float
    yy: float

    @classmethod
    def from_density(cls, rho: np.ndarray) -> "TwoQubitMoments":
        """From the reduced state on ``(i, j)`` with qubit ``i`` as leading index."""

        def ev(a, b):
            return float(np.real(np.trace(rho @ np.kron(a, b))))

        return cls(
            zz=ev(_Z, _Z), yz=ev(_Y, _Z), zy=ev(_Z, _Y),
            xi=ev(_X, _I2), xj=ev(_I2, _X), xx=ev(_X, _X), yy=ev(_Y, _Y),
        )

    @classmethod
    def of_product(cls, psi_i: float, psi_j: float) -> "TwoQubitMoments":
        """Moments of ``R_y(psi_i)|0> (x) R_y(psi_j)|0>``."""
        si, ci = math.sin(psi_i), math.cos(psi_i)
        sj, cj = math.sin(psi_j), math.cos(psi_j)
        return cls(zz=ci * cj, yz=0.0, zy=0.0, xi=si, xj=sj, xx=si * sj, yy=0.0)

    @classmethod
    def sampled(cls, rho: np.ndarray, shots: int, rng: np.random.Generator) -> "TwoQubitMoments":
        """Shot estimates from five measurement settings of ``shots`` each."""
        est = {}
        parity = np.array([1, -1, -1, 1])
        first = np.array([1, 1, -1, -1])
        second = np.array([1, -1, 1, -1])
        for pa, pb in SETTINGS:
            v = np.kron(_BASIS_CHANGE[pa], _BASIS_CHANGE[pb])
            p = np.clip(np.real(np.diag(v @ rho @ v.conj().T)), 0.0, None)
            counts = rng.multinomial(shots, p / p.sum())
            est[pa + pb] = counts @ parity / shots
            if pa + pb == "XX":
                est["Xi"] = counts @ first / shots
                est["Xj"] = counts @ second / shots
        return cls(
            zz=float(est["ZZ"]), yz=float(est["YZ"]), zy=float(est["ZY"]),
            xi=float(est["Xi"]), xj=float(est["Xj"]), xx=float(est["XX"]), yy=float(est["YY"]),
        )


def two_qubit_cost_complex(theta0: float, theta1: float, m: TwoQubitMoments, tau_t: float) -> complex:
    """``<psi| exp(-tau_t Z_i Z_j) U_ij(theta0, theta1) |psi>`` from moments."""
    c0, s0 = math.cos(theta0 / 2), math.sin(theta0 / 2)
    c1, s1 = math.cos(theta1 / 2), math.sin(theta1 / 2)
    ch, sh = math.cosh(tau_t), math.sinh(tau_t)
    return (
        c1 * c0 * (ch - sh * m.zz)
        - 1j * c1 * s0 * (ch * m.yz + 1j * sh * m.xi)
        - 1j * s1 * c0 * (ch * m.zy + 1j * sh * m.xj)
        - s1 * s0 * (ch * m.xx + sh * m.yy)
    )


def two_qubit_cost(theta0: float, theta1: float, m: TwoQubitMoments, tau_t: float,
                   check_imag: float | None = None) -> float:
    """Real part of the two-qubit overlap; optionally assert the imaginary residue."""
    value = two_qubit_cost_complex(theta0, theta1, m, tau_t)
    if check_imag is not None and abs(value.imag) > check_imag:
        raise AssertionError(f"overlap has imaginary residue {value.imag:.3e}")
    return value.real


def _real_cost_coefficients(m: TwoQubitMoments, tau_t: float) -> tuple[float, float, float, float]:
    ch, sh = math.cosh(tau_t), math.sinh(tau_t)
    return ch - sh * m.zz, sh * m.xi, sh * m.xj, ch * m.xx + sh * m.yy


@dataclass(frozen=True)
class GateFit:
    theta0: float
    theta1: float
    value: float
    converged: bool


def optimize_gate_params(m: TwoQubitMoments, tau_t: float) -> GateFit:
    """Bounded SLSQP ascent of the real overlap from ``(0, 0)``.

    Never returns a point worse than the identity gate.
    """
    a, bi, bj, d = _real_cost_coefficients(m, tau_t)

    def neg(t):
        c0, s0 = math.cos(t[0] / 2), math.sin(t[0] / 2)
        c1, s1 = math.cos(t[1] / 2), math.sin(t[1] / 2)
        return -(c0 * c1 * a + c1 * s0 * bi + s1 * c0 * bj - s1 * s0 * d)

    def neg_grad(t):
        c0, s0 = math.cos(t[0] / 2), math.sin(t[0] / 2)
        c1, s1 = math.cos(t[1] / 2), math.sin(t[1] / 2)
        g0 = 0.5 * (-c1 * s0 * a + c1 * c0 * bi - s1 * s0 * bj - s1 * c0 * d)
        g1 = 0.5 * (-s1 * c0 * a - s1 * s0 * bi + c1 * c0 * bj - c1 * s0 * d)
        return np.array([-g0, -g1])

    base = -neg((0.0, 0.0))
    if tau_t == 0.0 or not np.any(neg_grad((0.0, 0.0))):
        return GateFit(0.0, 0.0, base, True)
    res = minimize(
        neg, np.zeros(2), jac=neg_grad, method="SLSQP",
        bounds=[(-math.pi, math.pi)] * 2,
        options={"maxiter": OPTIMIZER_MAXITER, "ftol": 1e-14},
    )
    value = -float(res.fun)
    if value < base:
        return GateFit(0.0, 0.0, base, False)
    return GateFit(float(res.x[0]), float(res.x[1]), value, bool(res.success))


# -- gate orderings -------------------------------------------------------------


@dataclass(frozen=True)
class GateOrdering:
    kind: str
    permutation: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "permutation", tuple(int(k) for k in self.permutation))
        if sorted(self.permutation) != list(range(len(self.permutation))):
            raise ValueError("ordering must be a permutation of edge indices")


def ordering_of_kind(inst: IsingInstance, kind: str) -> GateOrdering:
    """Stable sort of edge indices; ties keep the original index order."""
    w = inst.couplings
    idx = np.arange(inst.num_edges)
    keys = {
        "original": idx,
        "ascending_J": w,
        "descending_J": -w,
        "ascending_absJ": np.abs(w),
        "descending_absJ": -np.abs(w),
    }
    if kind not in keys:
        raise ValueError(f"unknown ordering kind {kind!r}")
    perm = np.lexsort((idx, keys[kind])) if inst.num_edges else idx
    return GateOrdering(kind, tuple(perm))


def gate_orderings(inst: IsingInstance) -> list[GateOrdering]:
    return [ordering_of_kind(inst, k) for k in ORDERING_KINDS]


def random_ordering(inst: IsingInstance, rng: np.random.Generator) -> GateOrdering:
    return GateOrdering("random", tuple(rng.permutation(inst.num_edges)))


# -- circuit construction -------------------------------------------------------


@dataclass
class Circuit:
    n: int
    init_angles: np.ndarray
    single_qubit_layer: np.ndarray
    two_qubit_layer: list[tuple[int, float, float]]
    ordering: str = "original"
    entropy_trace: list[float] = field(default_factory=list)
    unconverged_gates: int = 0
    parameter_shots: int = 0

    def apply(self, inst: IsingInstance) -> StateVector:
        """Re-run the fixed circuit from its initial angles."""
        state = init_product_state(self.init_angles)
        for q, th in enumerate(self.single_qubit_layer):
            apply_ry(state, q, th)
        for k, t0, t1 in self.two_qubit_layer:
            i, j, _ = inst.edges[k]
            apply_yzzy(state, i, j, t0, t1)
        return state


def build_circuit(
    inst: IsingInstance,
    ordering: GateOrdering,
    tau: float,
    init_angles: Sequence[float] | None = None,
    mode: str = "measuring_exact",
    rng: np.random.Generator | None = None,
    shots_pauli: int = 1000,
    track_entropy: bool = False,
    entropy_stride: int = 1,
    partition: Sequence[int] | None = None,
) -> tuple[Circuit, StateVector]:
    """Fix every gate angle sequentially and return the circuit with its output state."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    n = inst.n
    phi = np.full(n, math.pi / 2) if init_angles is None else np.asarray(init_angles, dtype=float)
    if phi.shape != (n,):
        raise ValueError(f"expected {n} initial angles")
    if len(ordering.permutation) != inst.num_edges:
        raise ValueError("ordering does not match the instance edges")
    if mode == "measuring_sampled" and rng is None:
        raise ValueError("measuring_sampled mode needs an rng")

    state = init_product_state(phi)
    singles = np.array([single_qubit_angle(h, tau, p) for h, p in zip(inst.h, phi)])
    for q, th in enumerate(singles):
        apply_ry(state, q, th)
    psi = phi + singles

    circuit = Circuit(n, phi.copy(), singles, [], ordering.kind)
    if track_entropy and n > 1:
        partition = half_partition(n) if partition is None else list(partition)
        circuit.entropy_trace.append(entanglement_entropy(state, partition))

    for step, k in enumerate(ordering.permutation, start=1):
        i, j, w = inst.edges[k]
        tau_t = tau * w
        if mode == "approximation":
            m = TwoQubitMoments.of_product(psi[i], psi[j])
        else:
            rho = reduced_density_matrix(state, (i, j))
            if mode == "measuring_exact":
                m = TwoQubitMoments.from_density(rho)
            else:
                m = TwoQubitMoments.sampled(rho, shots_pauli, rng)
                circuit.parameter_shots += len(SETTINGS) * shots_pauli
        if mode != "measuring_sampled":
            # real-amplitude states make the overlap real
            two_qubit_cost(0.0, 0.0, m, tau_t, check_imag=1e-8)
        fit = optimize_gate_params(m, tau_t)
        circuit.unconverged_gates += not fit.converged
        circuit.two_qubit_layer.append((k, fit.theta0, fit.theta1))
        apply_yzzy(state, i, j, fit.theta0, fit.theta1)
        if circuit.entropy_trace and (step % entropy_stride == 0 or step == inst.num_edges):
            circuit.entropy_trace.append(entanglement_entropy(state, partition))
    return circuit, state


# -- CVaR and feedback ------------------------------------------------------------


def _alpha_count(alpha: float, shots: int) -> int:
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    # tolerate float noise such as 0.01 * 10000 = 100.00000000000001
    k = math.ceil(alpha * shots - 1e-9)
    return max(k, 1)


def select_lowest(samples: SampleSet, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Records and multiplicities of the ``ceil(alpha S)`` lowest-energy shots."""
    if len(samples) == 0:
        raise ValueError("empty sample set")
    k = _alpha_count(alpha, samples.shots)
    order = samples.sorted_order()
    counts = samples.counts[order]
    before = np.concatenate(([0], np.cumsum(counts)[:-1]))
    take = np.clip(k - before, 0, counts)
    keep = take > 0
    return order[keep], take[keep]


def cvar(samples: SampleSet, alpha: float) -> float:
    rows, take = select_lowest(samples, alpha)
    return float(np.dot(samples.energies[rows], take) / take.sum())


def sigma_z_alpha(samples: SampleSet, alpha: float) -> np.ndarray:
    rows, take = select_lowest(samples, alpha)
    z = 1.0 - 2.0 * samples.bits[rows].astype(float)
    return (take @ z) / take.sum()


def feedback_angles(sz: Sequence[float]) -> np.ndarray:
    return np.arccos(np.clip(np.asarray(sz, dtype=float), -1.0, 1.0))


# -- configuration and records ------------------------------------------------------


@dataclass
class SolverConfig:
    tau: float = 0.3
    alpha: float = 0.01
    shots: int = 10000
    shots_pauli: int = 1000
    mode: str = "measuring_exact"
    sorting: str = "adaptive"  # adaptive | random | fixed:<ordering kind>
    max_iters: int = 5
    conv_tol: float = 1e-4
    seed: int = 0
    track_entropy: bool = False
    entropy_stride: int = 1

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.shots < 1 or self.shots_pauli < 1 or self.max_iters < 1 or self.entropy_stride < 1:
            raise ValueError("shots, shots_pauli, max_iters and entropy_stride must be positive")
        _alpha_count(self.alpha, self.shots)
        self.sorting_orderings_kind()

    def sorting_orderings_kind(self) -> tuple[str, str | None]:
        if self.sorting in ("adaptive", "random"):
            return self.sorting, None
        kind, _, arg = self.sorting.partition(":")
        if kind != "fixed" or arg not in ORDERING_KINDS:
            raise ValueError(f"sorting must be adaptive, random or fixed:<kind>, got {self.sorting!r}")
        return "fixed", arg

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "SolverConfig":
        unknown = set(doc) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown solver config keys: {sorted(unknown)}")
        return cls(**doc)

    @classmethod
    def load(cls, path) -> "SolverConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class IterationResult:
    index: int
    cvar: float
    sigma_z_alpha: np.ndarray
    best_bitstring: str
    best_energy: float
    ordering: str
    shots_used: dict
    entropy_trace: list[float] | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sigma_z_alpha"] = [float(v) for v in self.sigma_z_alpha]
        return d


@dataclass
class RunRecord:
    config: SolverConfig
    n: int
    num_edges: int
    ordering: GateOrdering
    sorting_trials: dict[str, float]
    iterations: list[IterationResult]
    converged: bool
    iterations_to_convergence: int | None
    circuit_executions: int
    total_shots: int
    parameter_shots: int
    max_entropy: float | None = None

    @property
    def feedback_iterations(self) -> int:
        """Iterations after the first (ordering-selection) one."""
        return len(self.iterations) - 1

    @property
    def final(self) -> IterationResult:
        return self.iterations[-1]

    @property
    def best_bitstring(self) -> str:
        return self.iterations[-1].best_bitstring

    @property
    def best_energy(self) -> float:
        return self.iterations[-1].best_energy

    def cvar_trace(self) -> list[float]:
        return [it.cvar for it in self.iterations]

    def to_dict(self) -> dict:
        return {
            "kind": "run_record",
            "config": self.config.to_dict(),
            "n": self.n,
            "num_edges": self.num_edges,
            "ordering": {"kind": self.ordering.kind, "permutation": list(self.ordering.permutation)},
            "sorting_trials": self.sorting_trials,
            "iterations": [it.to_dict() for it in self.iterations],
            "converged": self.converged,
            "iterations_to_convergence": self.iterations_to_convergence,
            "circuit_executions": self.circuit_executions,
            "feedback_iterations": self.feedback_iterations,
            "total_shots": self.total_shots,
            "parameter_shots": self.parameter_shots,
            "max_entropy": self.max_entropy,
            "best_bitstring": self.best_bitstring,
            "best_energy": self.best_energy,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"


StateHook = Callable[[int, str, StateVector], None]


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def solve(inst: IsingInstance, config: SolverConfig | None = None,
          state_hook: StateHook | None = None) -> RunRecord:
    """Adaptive ordering selection followed by the feedback iterations.

    ``state_hook(t, ordering_kind, state)`` sees every circuit output state.
    """
    config = config or SolverConfig()
    strategy, fixed_kind = config.sorting_orderings_kind()
    if strategy == "adaptive":
        candidates = gate_orderings(inst)
    elif strategy == "random":
        candidates = [random_ordering(inst, _rng(config.seed, 1 << 20))]
    else:
        candidates = [ordering_of_kind(inst, fixed_kind)]

    n = inst.n
    phi = np.full(n, math.pi / 2)
    best_bits, best_e = None, math.inf
    iterations: list[IterationResult] = []
    executions = total_shots = param_shots = 0
    max_entropy = None
    chosen = candidates[0]
    trials: dict[str, float] = {}
    converged = False
    conv_at = None

    def run_one(t, k, ordering, angles):
        nonlocal executions, total_shots, param_shots, best_bits, best_e, max_entropy
        rng = _rng(config.seed, t, k)
        circuit, state = build_circuit(
            inst, ordering, config.tau, angles, config.mode, rng, config.shots_pauli,
            config.track_entropy, config.entropy_stride,
        )
        if state_hook is not None:
            state_hook(t, ordering.kind, state)
        samples = sample(state, config.shots, rng).bind(inst)
        executions += 1
        param_shots += circuit.parameter_shots
        total_shots += config.shots + circuit.parameter_shots
        bits, e = samples.best()
        if e < best_e:
            best_bits, best_e = format_bitstring(bits), e
        if circuit.entropy_trace:
            peak = max(circuit.entropy_trace)
            max_entropy = peak if max_entropy is None else max(max_entropy, peak)
        if circuit.unconverged_gates:
            log.debug("t=%d %s: %d gate fits flagged", t, ordering.kind, circuit.unconverged_gates)
        shots_used = {"final": config.shots, "parameter": circuit.parameter_shots}
        return circuit, samples, shots_used

    # iteration 0: one circuit per candidate ordering, keep the lowest CVaR
    outcomes = []
    for k, ordering in enumerate(candidates):
        circuit, samples, shots_used = run_one(0, k, ordering, phi)
        cv = cvar(samples, config.alpha)
        trials[ordering.kind] = cv
        outcomes.append((cv, k, circuit, samples, shots_used))
    cv, k, circuit, samples, shots_used = min(outcomes, key=lambda o: (o[0], o[1]))
    chosen = candidates[k]
    if len(candidates) > 1:
        shots_used = dict(shots_used)
        shots_used["adaptive_overhead"] = sum(
            o[4]["final"] + o[4]["parameter"] for o in outcomes if o[1] != k
        )
    sz = sigma_z_alpha(samples, config.alpha)
    iterations.append(IterationResult(
        0, cv, sz, best_bits, best_e, chosen.kind, shots_used,
        circuit.entropy_trace or None,
    ))

    for t in range(1, config.max_iters):
        if inst.num_edges == 0 and n == 1:
            break
        phi = feedback_angles(iterations[-1].sigma_z_alpha)
        circuit, samples, shots_used = run_one(t, 0, chosen, phi)
        cv = cvar(samples, config.alpha)
        sz = sigma_z_alpha(samples, config.alpha)
        iterations.append(IterationResult(
            t, cv, sz, best_bits, best_e, chosen.kind, shots_used,
            circuit.entropy_trace or None,
        ))
        prev = iterations[-2].cvar
        if abs(cv - prev) / max(abs(prev), EPS_DIV) < config.conv_tol:
            converged, conv_at = True, t + 1
            break

    return RunRecord(
        config=config, n=n, num_edges=inst.num_edges, ordering=chosen, sorting_trials=trials,
        iterations=iterations, converged=converged, iterations_to_convergence=conv_at,
        circuit_executions=executions, total_shots=total_shots, parameter_shots=param_shots,
        max_entropy=max_entropy,
    )


def shot_budget(inst: IsingInstance, config: SolverConfig, record: RunRecord) -> dict:
    """Measurement accounting for a finished run.

    Parameter estimation costs ``5 * shots_pauli`` per two-qubit gate in the
    sampled measuring mode, counted as if each circuit prefix were re-prepared.
    """
    per_gate = len(SETTINGS) * config.shots_pauli if config.mode == "measuring_sampled" else 0
    param_per_exec = per_gate * inst.num_edges
    per_exec = config.shots + param_per_exec
    orderings_tried = record.circuit_executions - record.feedback_iterations
    return {
        "M": inst.num_terms,
        "n": inst.n,
        "num_edges": inst.num_edges,
        "mode": config.mode,
        "parameter_estimation": {
            "measuring_sampled": "sampled",
            "measuring_exact": "exact",
            "approximation": "analytic",
        }[config.mode],
        "parameter_shots_per_gate": per_gate,
        "parameter_shots_per_execution": param_per_exec,
        "final_shots_per_execution": config.shots,
        "per_iteration_shots": [
            per_exec * (orderings_tried if it.index == 0 else 1) for it in record.iterations
        ],
        "orderings_tried": orderings_tried,
        "adaptive_overhead_shots": per_exec * (orderings_tried - 1),
        "circuit_executions": record.circuit_executions,
        "feedback_iterations": record.feedback_iterations,
        "total_parameter_shots": param_per_exec * record.circuit_executions,
        "total_final_shots": config.shots * record.circuit_executions,
        "total_shots": per_exec * record.circuit_executions,
    }

"""Dense statevector simulator for the R_y / (YZ + ZY) gate set.

Gates act in place on amplitude blocks addressed through reshaped views, so a
gate costs O(2^n) and no 2^n x 2^n operator is ever built.  States that are
initialized by :func:`init_product_state` stay real (float64) because every
gate in the set is a real orthogonal matrix.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .instance import IsingInstance, bits_to_index, format_bitstring, index_to_bits

MAX_QUBITS = 26

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_TERM_RE = re.compile(r"([XYZ])(\d+)")

SeedLike = int | np.random.Generator | np.random.SeedSequence | None


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class StateVector:
    """Amplitudes of an n-qubit register; qubit ``i`` is bit ``i`` of the index."""

    def __init__(self, amps: np.ndarray, copy: bool = True):
        amps = np.array(amps, copy=copy)
        if amps.ndim != 1 or amps.size < 2 or amps.size & (amps.size - 1):
            raise ValueError("amplitude vector length must be a power of two >= 2")
        if not np.iscomplexobj(amps):
            amps = amps.astype(float, copy=False)
        self.n = amps.size.bit_length() - 1
        _check_size(self.n)
        self.amps = amps

    @classmethod
    def basis(cls, bits: str | Sequence[int], dtype=float) -> "StateVector":
        bits = np.array([int(c) for c in bits], dtype=np.int64)
        amps = np.zeros(1 << bits.size, dtype=dtype)
        amps[int(bits_to_index(bits))] = 1.0
        return cls(amps, copy=False)

    def copy(self) -> "StateVector":
        return StateVector(self.amps, copy=True)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amps, self.amps).real))

    def probabilities(self) -> np.ndarray:
        p = np.abs(self.amps) ** 2 if np.iscomplexobj(self.amps) else self.amps**2
        return p

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amps, other.amps))

    def max_imag(self) -> float:
        return float(np.max(np.abs(self.amps.imag))) if np.iscomplexobj(self.amps) else 0.0

    def dump(self) -> str:
        """Text listing of amplitudes (qubit 0 first in each label), n <= 10 only."""
        if self.n > 10:
            raise ValueError("amplitude dump is limited to n <= 10")
        lines = []
        for b, a in enumerate(self.amps):
            label = format_bitstring(index_to_bits(b, self.n))
            lines.append(f"{label} {complex(a).real:+.12e} {complex(a).imag:+.12e}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"StateVector(n={self.n}, dtype={self.amps.dtype})"


def _check_size(n: int) -> None:
    if n > MAX_QUBITS:
        raise ValueError(f"n={n} exceeds the statevector cap of {MAX_QUBITS} qubits")


def _check_qubit(state: StateVector, q: int) -> None:
    if not (0 <= q < state.n):
        raise IndexError(f"qubit {q} out of range for n={state.n}")


def init_product_state(angles: Sequence[float], dtype=float) -> StateVector:
    """Tensor product of ``cos(phi/2)|0> + sin(phi/2)|1>``, i.e. ``R_y(phi)|0>`` per qubit."""
    angles = np.asarray(angles, dtype=float)
    if angles.ndim != 1 or angles.size < 1:
        raise ValueError("need a 1-d array of angles")
    _check_size(angles.size)
    amps = np.ones(1, dtype=dtype)
    # build from the highest qubit down so that qubit 0 ends up least significant
    for phi in angles[::-1]:
        amps = np.kron(amps, np.array([math.cos(phi / 2), math.sin(phi / 2)], dtype=dtype))
    return StateVector(amps, copy=False)


def _single_view(state: StateVector, q: int) -> np.ndarray:
    return state.amps.reshape(1 << (state.n - 1 - q), 2, 1 << q)


def apply_ry(state: StateVector, qubit: int, theta: float) -> StateVector:
    """In-place ``R_y(theta) = exp(-i theta Y / 2)`` on ``qubit``."""
    _check_qubit(state, qubit)
    if theta == 0.0:
        return state
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    v = _single_view(state, qubit)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = c * a0 - s * a1
    v[:, 1, :] = s * a0 + c * a1
    return state


def _pair_blocks(state: StateVector, qa: int, qb: int) -> tuple[np.ndarray, bool]:
    """View with axes (rest, hi, rest, lo, rest) and whether ``qa`` is the high qubit."""
    hi, lo = max(qa, qb), min(qa, qb)
    v = state.amps.reshape(1 << (state.n - 1 - hi), 2, 1 << (hi - lo - 1), 2, 1 << lo)
    return v, qa == hi


def apply_two_qubit(state: StateVector, qa: int, qb: int, u: np.ndarray) -> StateVector:
    """Apply a 4x4 matrix given in the ``|x_qa x_qb>`` basis (qa is the leading bit)."""
    _check_qubit(state, qa)
    _check_qubit(state, qb)
    if qa == qb:
        raise ValueError("two-qubit gate needs distinct qubits")
    v, qa_high = _pair_blocks(state, qa, qb)
    if not qa_high:
        u = u.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
    if not np.iscomplexobj(state.amps) and np.iscomplexobj(u):
        raise TypeError("complex gate applied to a real state")
    shape = v.shape
    blocks = v.transpose(1, 3, 0, 2, 4).reshape(4, -1)
    new = (u @ blocks).reshape(2, 2, shape[0], shape[2], shape[4])
    v[...] = new.transpose(2, 0, 3, 1, 4)
    return state


def yzzy_matrix(theta0: float, theta1: float) -> np.ndarray:
    """``exp(-i (theta1 Z_i Y_j + theta0 Y_i Z_j) / 2)`` in the ``|x_i x_j>`` basis.

    The generators commute and square to identity, so the exponential is the
    product ``(c1 - i s1 ZY)(c0 - i s0 YZ)``; with ``-iY`` real the matrix is
    real orthogonal.
    """
    c0, s0 = math.cos(theta0 / 2), math.sin(theta0 / 2)
    c1, s1 = math.cos(theta1 / 2), math.sin(theta1 / 2)
    w = np.array([[0.0, -1.0], [1.0, 0.0]])  # -iY
    z = np.diag([1.0, -1.0])
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    return (
        c0 * c1 * np.eye(4)
        + c1 * s0 * np.kron(w, z)
        + s1 * c0 * np.kron(z, w)
        - s1 * s0 * np.kron(x, x)
    )


def apply_yzzy(state: StateVector, i: int, j: int, theta0: float, theta1: float) -> StateVector:
    """In-place two-qubit ITE-mimicking gate on ``(i, j)``."""
    if i == j:
        raise ValueError("apply_yzzy needs i != j")
    if theta0 == 0.0 and theta1 == 0.0:
        _check_qubit(state, i)
        _check_qubit(state, j)
        return state
    return apply_two_qubit(state, i, j, yzzy_matrix(theta0, theta1))


def reduced_density_matrix(state: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Reduced state on ``qubits``; the first listed qubit is the leading index bit."""
    qubits = list(qubits)
    for q in qubits:
        _check_qubit(state, q)
    if len(set(qubits)) != len(qubits):
        raise ValueError("qubits must be distinct")
    n = state.n
    t = state.amps.reshape((2,) * n)
    axes = [n - 1 - q for q in qubits]
    m = np.moveaxis(t, axes, range(len(axes))).reshape(1 << len(qubits), -1)
    return m @ m.conj().T


def _parse_term(term) -> list[tuple[str, int]]:
    if isinstance(term, str):
        compact = term.replace(" ", "").replace("*", "")
        parts = _TERM_RE.findall(compact)
        if "".join(p + q for p, q in parts) != compact:
            raise ValueError(f"cannot parse Pauli word {term!r}")
        parsed = [(p, int(q)) for p, q in parts]
    elif isinstance(term, dict):
        parsed = [(p, int(q)) for q, p in term.items()]
    else:
        parsed = [(p, int(q)) for p, q in term]
    if not (1 <= len(parsed) <= 2):
        raise ValueError(f"Pauli word must act on 1 or 2 qubits, got {len(parsed)}")
    if len({q for _, q in parsed}) != len(parsed):
        raise ValueError("Pauli word acts twice on one qubit")
    if any(p not in "XYZ" for p, _ in parsed):
        raise ValueError(f"unsupported Pauli letters in {term!r}")
    return parsed


def pauli_expectation(state: StateVector, term) -> float:
    """Exact ``<psi|P|psi>`` for a Pauli word such as ``"Z0"`` or ``"Y1 Z3"``."""
    parsed = _parse_term(term)
    rho = reduced_density_matrix(state, [q for _, q in parsed])
    op = _PAULI[parsed[0][0]]
    for p, _ in parsed[1:]:
        op = np.kron(op, _PAULI[p])
    value = np.trace(rho @ op)
    if abs(value.imag) > 1e-10:
        raise AssertionError(f"expectation of Hermitian {term!r} has imaginary part {value.imag}")
    return float(value.real)


@dataclass
class SampleSet:
    """Measured bitstrings (rows of ``bits``) with multiplicities."""

    bits: np.ndarray
    counts: np.ndarray
    energies: np.ndarray | None = None

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.bits.ndim != 2 or self.bits.shape[0] != self.counts.size:
            raise ValueError("bits must be (records, n) matching counts")
        if np.any(self.counts < 1):
            raise ValueError("counts must be positive")
        if self.energies is not None:
            self.energies = np.asarray(self.energies, dtype=float)

    @property
    def n(self) -> int:
        return self.bits.shape[1]

    @property
    def shots(self) -> int:
        return int(self.counts.sum())

    def __len__(self) -> int:
        return self.counts.size

    def records(self) -> list[tuple[str, int]]:
        return [(format_bitstring(b), int(c)) for b, c in zip(self.bits, self.counts)]

    def bind(self, inst: IsingInstance) -> "SampleSet":
        if inst.n != self.n:
            raise ValueError(f"sample width {self.n} does not match instance n={inst.n}")
        return SampleSet(self.bits, self.counts, inst.energies(self.bits))

    def sorted_order(self) -> np.ndarray:
        """Record order by energy, ties by ascending bitstring integer."""
        if self.energies is None:
            raise ValueError("SampleSet has no energies; bind it to an instance first")
        keys = [self.bits[:, i] for i in range(self.n)] + [self.energies]
        return np.lexsort(keys)

    def best(self) -> tuple[np.ndarray, float]:
        k = self.sorted_order()[0]
        return self.bits[k].copy(), float(self.energies[k])

    def to_dict(self) -> dict:
        out = {"n": self.n, "shots": self.shots, "records": []}
        for k in range(len(self)):
            rec = {"bits": format_bitstring(self.bits[k]), "count": int(self.counts[k])}
            if self.energies is not None:
                rec["energy"] = float(self.energies[k])
            out["records"].append(rec)
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "SampleSet":
        recs = doc["records"]
        bits = np.array([[int(c) for c in r["bits"]] for r in recs], dtype=np.uint8)
        counts = [r["count"] for r in recs]
        energies = [r["energy"] for r in recs] if recs and "energy" in recs[0] else None
        return cls(bits.reshape(len(recs), doc["n"]), counts, energies)

    @classmethod
    def from_rows(cls, rows: np.ndarray) -> "SampleSet":
        """Collapse repeated bit rows into counted records (ascending bitstring integer)."""
        rows = np.asarray(rows, dtype=np.uint8)
        uniq, counts = np.unique(rows[:, ::-1], axis=0, return_counts=True)
        return cls(uniq[:, ::-1], counts)


def sample(state: StateVector, shots: int, seed: SeedLike = None) -> SampleSet:
    """Draw ``shots`` computational-basis measurements; deterministic per seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = make_rng(seed)
    p = state.probabilities()
    p = p / p.sum()
    draws = rng.choice(p.size, size=shots, p=p)
    idx, counts = np.unique(draws, return_counts=True)
    return SampleSet(index_to_bits(idx, state.n), counts)


def entanglement_entropy(state: StateVector, partition: Iterable[int]) -> float:
    """Von Neumann entropy (bits) of the reduced state on ``partition``."""
    part = sorted(set(int(q) for q in partition))
    n = state.n
    if not part or len(part) >= n:
        raise ValueError("partition must be a non-empty proper subset of the qubits")
    for q in part:
        _check_qubit(state, q)
    t = state.amps.reshape((2,) * n)
    axes = [n - 1 - q for q in part]
    m = np.moveaxis(t, axes, range(len(axes))).reshape(1 << len(part), -1)
    # eigenvalues of the smaller Gram matrix are the squared Schmidt coefficients
    gram = m @ m.conj().T if m.shape[0] <= m.shape[1] else m.conj().T @ m
    p = np.linalg.eigvalsh(gram)
    p = p[p > 1e-15]
    p = p / p.sum()
    return float(max(0.0, -np.sum(p * np.log2(p))))


def half_partition(n: int) -> list[int]:
    """Default cut: qubits ``0 .. ceil(n/2) - 1``."""
    return list(range((n + 1) // 2))


def apply_ite_exact(state: StateVector, inst: IsingInstance, tau: float,
                    diagonal: np.ndarray | None = None) -> StateVector:
    """Normalized ``exp(-tau H) |psi>`` for the diagonal Ising ``H``; returns a new state."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    if inst.n != state.n:
        raise ValueError("instance and state sizes differ")
    e = inst.energy_diagonal() if diagonal is None else diagonal
    # shifting by the minimum only rescales, keeping exp() in range
    amps = state.amps * np.exp(-tau * (e - e.min()))
    norm = np.sqrt(np.vdot(amps, amps).real)
    if norm == 0.0:
        raise ArithmeticError("ITE image has zero norm")
    return StateVector(amps / norm, copy=False)


def apply_ite_terms(state: StateVector, inst: IsingInstance, tau: float,
                    order: Sequence[int] | None = None) -> StateVector:
    """Same map as :func:`apply_ite_exact`, one diagonal factor per Hamiltonian term.

    Field factors act first, then coupling factors in ``order`` (edge indices).
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    n = state.n
    idx = np.arange(1 << n, dtype=np.int64)
    amps = state.amps.copy()
    for i, h in enumerate(inst.h):
        z = 1.0 - 2.0 * ((idx >> i) & 1)
        amps *= np.exp(-tau * h * z)
    order = range(inst.num_edges) if order is None else order
    for k in order:
        i, j, w = inst.edges[k]
        zz = 1.0 - 2.0 * (((idx >> i) ^ (idx >> j)) & 1)
        amps *= np.exp(-tau * w * zz)
    amps /= np.sqrt(np.vdot(amps, amps).real)
    return StateVector(amps, copy=False)


def expected_energy(state: StateVector, diagonal: np.ndarray) -> float:
    return float(np.dot(state.probabilities(), diagonal))

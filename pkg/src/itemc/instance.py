"""QUBO and Ising problem instances.

Conventions used throughout the package:

* bit ``x_i`` belongs to qubit ``i``; the spin is ``z_i = 1 - 2 x_i`` so that
  ``x_i = 0`` is the basis state ``|0>`` with ``z_i = +1``;
* a basis index ``b`` holds qubit ``i`` in bit ``(b >> i) & 1``;
* the bitstring text form lists qubit 0 first, so ``"10"`` means
  ``x_0 = 1, x_1 = 0``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

GRAPH_KINDS = ("three_regular", "density", "complete", "custom")
_QUANTUM = 4  # decimal digits kept for generated coefficients
_CHUNK = 1 << 20


class InstanceFormatError(ValueError):
    """Raised when an instance document is malformed."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass(frozen=True)
class GraphSpec:
    kind: str
    density: float | None = None

    def __post_init__(self):
        if self.kind not in ("three_regular", "density", "complete"):
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if self.kind == "density":
            if self.density is None or not (0.0 < self.density <= 1.0):
                raise ValueError(f"density must lie in (0, 1], got {self.density!r}")
        elif self.density is not None:
            raise ValueError(f"graph kind {self.kind!r} takes no density")

    @classmethod
    def parse(cls, text: str | float | "GraphSpec") -> "GraphSpec":
        """Parse ``"complete"``, ``"three_regular"``, ``"density:0.5"`` or a bare float."""
        if isinstance(text, GraphSpec):
            return text
        if isinstance(text, (int, float)):
            return cls("density", float(text))
        text = text.strip()
        aliases = {"3reg": "three_regular", "3-regular": "three_regular", "full": "complete"}
        text = aliases.get(text, text)
        if text.startswith("density"):
            _, _, value = text.partition(":")
            return cls("density", float(value))
        try:
            return cls("density", float(text))
        except ValueError:
            return cls(text)

    def __str__(self) -> str:
        return f"density:{self.density:g}" if self.kind == "density" else self.kind


@dataclass(frozen=True)
class GraphMeta:
    graph_kind: str = "custom"
    seed: int | None = None
    density: float | None = None
    generated: bool = False


@dataclass(frozen=True)
class QuboMatrix:
    """Symmetric QUBO matrix; the objective is ``f(x) = x^T Q x``."""

    q: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] < 1:
            raise ValueError(f"Q must be a non-empty square matrix, got shape {q.shape}")
        if not np.allclose(q, q.T, rtol=0.0, atol=1e-12):
            raise ValueError("Q must be symmetric")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    def evaluate(self, x: Sequence[int] | np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.q @ x)


@dataclass(frozen=True)
class IsingInstance:
    """Diagonal Hamiltonian ``sum_i h_i z_i + sum_(i,j) J_ij z_i z_j``.

    ``edges`` keeps its generation order (ascending ``(i, j)`` for generated
    instances); downstream gate orderings are permutations of this sequence.
    """

    n: int
    h: tuple[float, ...]
    edges: tuple[tuple[int, int, float], ...]
    meta: GraphMeta = field(default_factory=GraphMeta)

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(float(v) for v in self.h))
        object.__setattr__(
            self, "edges", tuple((int(i), int(j), float(w)) for i, j, w in self.edges)
        )
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.h) != self.n:
            raise ValueError(f"expected {self.n} fields, got {len(self.h)}")
        seen = set()
        for k, (i, j, _) in enumerate(self.edges):
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge {k} = ({i}, {j}) violates 0 <= i < j < n")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))

    @cached_property
    def h_array(self) -> np.ndarray:
        a = np.array(self.h, dtype=float)
        a.setflags(write=False)
        return a

    @cached_property
    def edge_pairs(self) -> np.ndarray:
        a = np.array([(i, j) for i, j, _ in self.edges], dtype=np.int64).reshape(-1, 2)
        a.setflags(write=False)
        return a

    @cached_property
    def couplings(self) -> np.ndarray:
        a = np.array([w for _, _, w in self.edges], dtype=float)
        a.setflags(write=False)
        return a

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_terms(self) -> int:
        """Number of Hamiltonian terms, ``N + |E|``."""
        return self.n + self.num_edges

    def coupling_matrix(self) -> np.ndarray:
        """Dense symmetric ``J`` with zero diagonal."""
        m = np.zeros((self.n, self.n))
        if self.num_edges:
            i, j = self.edge_pairs.T
            m[i, j] = self.couplings
            m[j, i] = self.couplings
        return m

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edge_pairs.ravel(), minlength=self.n)

    def energies(self, bits: np.ndarray) -> np.ndarray:
        """Energies of a batch of bit rows, shape ``(m, n)``."""
        bits = np.asarray(bits)
        if bits.ndim != 2 or bits.shape[1] != self.n:
            raise ValueError(f"expected bit rows of length {self.n}, got shape {bits.shape}")
        z = 1.0 - 2.0 * bits
        e = z @ self.h_array
        if self.num_edges:
            i, j = self.edge_pairs.T
            e = e + (z[:, i] * z[:, j]) @ self.couplings
        return e

    def energy_diagonal(self) -> np.ndarray:
        """Energy of every basis index ``0 .. 2^n - 1``."""
        if self.n > 30:
            raise ValueError(f"energy diagonal for n={self.n} does not fit in memory")
        size = 1 << self.n
        out = np.empty(size)
        for start in range(0, size, _CHUNK):
            idx = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
            out[start : start + idx.size] = self.energies(index_to_bits(idx, self.n))
        return out


def index_to_bits(index: np.ndarray | int, n: int) -> np.ndarray:
    """Basis indices to bit rows (qubit ``i`` at column ``i``)."""
    idx = np.asarray(index, dtype=np.int64)
    return ((idx[..., None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.uint8)


def bits_to_index(bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape[-1] > 62:
        raise ValueError("bit rows longer than 62 do not fit an int64 index")
    return bits @ (np.int64(1) << np.arange(bits.shape[-1], dtype=np.int64))


def parse_bitstring(text: str | Sequence[int], n: int | None = None) -> np.ndarray:
    if isinstance(text, str):
        if any(c not in "01" for c in text):
            raise ValueError(f"bitstring {text!r} must contain only 0 and 1")
        bits = np.array([int(c) for c in text], dtype=np.uint8)
    else:
        bits = np.asarray(text, dtype=np.uint8)
        if np.any(bits > 1):
            raise ValueError("bits must be 0 or 1")
    if n is not None and bits.size != n:
        raise ValueError(f"bitstring length {bits.size} does not match n={n}")
    return bits


def format_bitstring(bits: Iterable[int]) -> str:
    return "".join(str(int(b)) for b in bits)


def ising_energy(inst: IsingInstance, x: str | Sequence[int] | np.ndarray) -> float:
    bits = parse_bitstring(x, inst.n)
    return float(inst.energies(bits[None, :])[0])


def qubo_to_ising(q: QuboMatrix | np.ndarray) -> tuple[IsingInstance, float]:
    """Substitute ``x = (1 - z) / 2``; returns the instance and constant offset.

    ``f(x) == ising_energy(inst, x) + offset`` for every bitstring.
    """
    if not isinstance(q, QuboMatrix):
        q = QuboMatrix(q)
    m = q.q
    n = q.n
    diag = np.diag(m)
    off = m - np.diag(diag)
    offset = diag.sum() / 2.0 + off.sum() / 4.0
    h = -diag / 2.0 - off.sum(axis=1) / 2.0
    edges = [
        (i, j, m[i, j] / 2.0) for i in range(n) for j in range(i + 1, n) if m[i, j] != 0.0
    ]
    return IsingInstance(n, tuple(h), tuple(edges)), float(offset)


def _quantize(values: np.ndarray) -> np.ndarray:
    return np.round(values, _QUANTUM)


def sample_random_ising(n: int, graph_spec: GraphSpec | str, seed: int) -> IsingInstance:
    """Random spin glass with uniform ``[-1, 1]`` coefficients at 4-digit precision.

    Edge counts: ``3n/2`` (three_regular), ``round(d * n(n-1)/2)`` (density),
    ``n(n-1)/2`` (complete). Edges come out in ascending ``(i, j)`` order.
    """
    spec = GraphSpec.parse(graph_spec)
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    rng = np.random.default_rng(seed)
    pairs_total = n * (n - 1) // 2

    if spec.kind == "three_regular":
        if n < 4 or n % 2:
            raise ValueError(f"a 3-regular graph needs even n >= 4, got n={n}")
        graph_seed = int(rng.integers(2**31 - 1))
        g = nx.random_regular_graph(3, n, seed=graph_seed)
        pairs = sorted((min(u, v), max(u, v)) for u, v in g.edges())
    elif spec.kind == "complete":
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        m = int(round(spec.density * pairs_total))
        if m < 1:
            raise ValueError(f"density {spec.density} on n={n} gives no edges")
        all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        chosen = np.sort(rng.choice(pairs_total, size=m, replace=False))
        pairs = [all_pairs[k] for k in chosen]

    h = _quantize(rng.uniform(-1.0, 1.0, size=n))
    couplings = _quantize(rng.uniform(-1.0, 1.0, size=len(pairs)))
    meta = GraphMeta(spec.kind, int(seed), spec.density, True)
    edges = tuple((i, j, float(w)) for (i, j), w in zip(pairs, couplings))
    return IsingInstance(n, tuple(h), edges, meta)


# -- serialization ---------------------------------------------------------


def instance_to_dict(inst: IsingInstance) -> dict:
    return {
        "n": inst.n,
        "h": list(inst.h),
        "edges": [[i, j, w] for i, j, w in inst.edges],
        "meta": {
            "graph_kind": inst.meta.graph_kind,
            "seed": inst.meta.seed,
            "density": inst.meta.density,
            "generated": inst.meta.generated,
        },
    }


def serialize(inst: IsingInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=1) + "\n"


def _require(doc: dict, key: str, loc: str):
    if key not in doc:
        raise InstanceFormatError(f"missing key {key!r}", loc)
    return doc[key]


def _number(value, loc: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceFormatError(f"expected a number, got {value!r}", loc)
    if not math.isfinite(value):
        raise InstanceFormatError("non-finite number", loc)
    return float(value)


def instance_from_dict(doc) -> IsingInstance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance document must be an object")
    n = _require(doc, "n", "$")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InstanceFormatError(f"n must be a positive integer, got {n!r}", "$.n")
    h = _require(doc, "h", "$")
    if not isinstance(h, list) or len(h) != n:
        raise InstanceFormatError(f"h must be a list of {n} numbers", "$.h")
    h = [_number(v, f"$.h[{k}]") for k, v in enumerate(h)]

    raw_edges = _require(doc, "edges", "$")
    if not isinstance(raw_edges, list):
        raise InstanceFormatError("edges must be a list", "$.edges")
    edges, seen = [], set()
    for k, e in enumerate(raw_edges):
        loc = f"$.edges[{k}]"
        if not isinstance(e, list) or len(e) != 3:
            raise InstanceFormatError("edge must be [i, j, J]", loc)
        i, j, w = e
        for v in (i, j):
            if isinstance(v, bool) or not isinstance(v, int):
                raise InstanceFormatError(f"edge endpoint {v!r} is not an integer", loc)
        if not (0 <= i < j < n):
            raise InstanceFormatError(f"edge ({i}, {j}) violates 0 <= i < j < n", loc)
        if (i, j) in seen:
            raise InstanceFormatError(f"duplicate edge ({i}, {j})", loc)
        seen.add((i, j))
        edges.append((i, j, _number(w, loc + "[2]")))

    meta_doc = doc.get("meta", {}) or {}
    if not isinstance(meta_doc, dict):
        raise InstanceFormatError("meta must be an object", "$.meta")
    kind = meta_doc.get("graph_kind", "custom")
    if kind not in GRAPH_KINDS:
        raise InstanceFormatError(f"unknown graph_kind {kind!r}", "$.meta.graph_kind")
    seed = meta_doc.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int) or seed < 0):
        raise InstanceFormatError("seed must be a non-negative integer", "$.meta.seed")
    density = meta_doc.get("density")
    if density is not None:
        density = _number(density, "$.meta.density")
    meta = GraphMeta(kind, seed, density, bool(meta_doc.get("generated", False)))
    return IsingInstance(n, tuple(h), tuple(edges), meta)


def deserialize(text: str) -> IsingInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return instance_from_dict(doc)


def load_instance(path) -> IsingInstance:
    with open(path) as fh:
        return deserialize(fh.read())


def save_instance(inst: IsingInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize(inst))

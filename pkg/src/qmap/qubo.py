"""QUBO assembly for the circuit mapping objective.

The objective is H(x, lambda) = H_a(x) + lambda * H_t(x), where H_a sums the
per-slice assignment penalties (one core per qubit, capacity with binary
slack variables, cut edges via the graph Laplacian) and H_t charges every
qubit relocation between consecutive slices with its hop distance.

Constant terms from the squared penalties go into ``offset`` so that
energy(x) reproduces the penalty formulas exactly, including constants.
This module also evaluates H_a and H_t directly from the formulas, as an
independent check on the matrix expansion.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from qmap.architecture import CoreTopology
from qmap.circuit import laplacian
from qmap.slicer import SliceSet


class QuboError(ValueError):
    """Infeasible or malformed QUBO construction."""


@dataclass(frozen=True)
class VariableIndex:
    """Flat indexing of assignment (x) and slack (y) variables.

    x variables are grouped by slice, then core, then qubit; slack variables
    for all slices follow after every x variable.
    """

    n: int
    k: int
    T: int
    capacities: tuple[int, ...]

    @property
    def num_assignment(self) -> int:
        return self.T * self.k * self.n

    @property
    def cap_sum(self) -> int:
        return sum(self.capacities)

    @property
    def total(self) -> int:
        return self.num_assignment + self.T * self.cap_sum

    def _cap_offset(self, j: int) -> int:
        return sum(self.capacities[:j])

    def x(self, t: int, i: int, j: int) -> int:
        """Index of x^t_{ij}: qubit i on core j in slice t (all 0-based)."""
        return t * self.k * self.n + j * self.n + i

    def y(self, t: int, j: int, s: int) -> int:
        """Index of slack bit s of core j in slice t."""
        return self.num_assignment + t * self.cap_sum + self._cap_offset(j) + s

    def decode_index(self, flat: int):
        """Inverse of x()/y(): returns ("x", t, i, j) or ("y", t, j, s)."""
        if flat < 0 or flat >= self.total:
            raise IndexError(flat)
        if flat < self.num_assignment:
            t, rem = divmod(flat, self.k * self.n)
            j, i = divmod(rem, self.n)
            return ("x", t, i, j)
        rem = flat - self.num_assignment
        t, rem = divmod(rem, self.cap_sum)
        for j in range(self.k):
            if rem < self.capacities[j]:
                return ("y", t, j, rem)
            rem -= self.capacities[j]
        raise AssertionError("unreachable")


@dataclass
class QuboProblem:
    """Sparse symmetric quadratic form: sum Q_ij x_i x_j (i<j) + sum Q_ii x_i + offset."""

    index: VariableIndex
    q: dict[tuple[int, int], float]
    offset: float
    lam: float
    _arrays: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def num_variables(self) -> int:
        return self.index.total

    def coeff_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Cached (rows, cols, vals) arrays over nonzero entries."""
        if self._arrays is None:
            if self.q:
                rows = np.array([ij[0] for ij in self.q], dtype=np.int64)
                cols = np.array([ij[1] for ij in self.q], dtype=np.int64)
                vals = np.array(list(self.q.values()), dtype=np.float64)
            else:
                rows = np.zeros(0, dtype=np.int64)
                cols = np.zeros(0, dtype=np.int64)
                vals = np.zeros(0, dtype=np.float64)
            self._arrays = (rows, cols, vals)
        return self._arrays


def default_lambda(T: int, n: int) -> float:
    """Transfer weight just below the 1/(T*n) dominance bound (0.99 safety)."""
    if T < 1 or n < 1:
        raise QuboError("T and n must be >= 1")
    return 0.99 / (T * n)


def build(slices: SliceSet, topo: CoreTopology, dist: np.ndarray, lam: float) -> QuboProblem:
    """Assemble the full QUBO for a sliced circuit on a core topology."""
    n, k, T = slices.n, topo.k, slices.T
    if lam < 0:
        raise QuboError(f"lambda must be >= 0, got {lam}")
    if topo.total_capacity < n:
        raise QuboError(
            f"infeasible: total capacity {topo.total_capacity} < {n} qubits"
        )
    idx = VariableIndex(n=n, k=k, T=T, capacities=topo.capacities)
    q: dict[tuple[int, int], float] = defaultdict(float)
    offset = 0.0

    def add(a: int, b: int, coeff: float) -> None:
        q[(a, b) if a <= b else (b, a)] += coeff

    for t in range(T):
        # one core per qubit: (sum_j x_ij - 1)^2
        for i in range(n):
            offset += 1.0
            for j in range(k):
                add(idx.x(t, i, j), idx.x(t, i, j), -1.0)
            for j in range(k):
                for l in range(j + 1, k):
                    add(idx.x(t, i, j), idx.x(t, i, l), 2.0)
        # capacity with slack: (sum_i x_ij - sum_s y_sj)^2
        for j in range(k):
            terms = [(idx.x(t, i, j), 1.0) for i in range(n)]
            terms += [(idx.y(t, j, s), -1.0) for s in range(topo.capacities[j])]
            for a, (va, sa) in enumerate(terms):
                add(va, va, sa * sa)
                for vb, sb in terms[a + 1 :]:
                    add(va, vb, 2.0 * sa * sb)
        # cut edges: per core, x_j^T L x_j
        graph = slices.slices[t].graph
        deg = graph.degrees()
        for j in range(k):
            for i in range(n):
                if deg[i]:
                    add(idx.x(t, i, j), idx.x(t, i, j), float(deg[i]))
            for u, v in graph.edges:
                add(idx.x(t, u, j), idx.x(t, v, j), -2.0)
        # inter-slice transfers: lambda * d_jl * x^{t-1}_{ij} x^t_{il}
        if t >= 1 and lam > 0:
            for i in range(n):
                for j in range(k):
                    for l in range(k):
                        if j != l and dist[j, l]:
                            add(idx.x(t - 1, i, j), idx.x(t, i, l), lam * float(dist[j, l]))

    q = {ij: c for ij, c in q.items() if c != 0.0}
    return QuboProblem(index=idx, q=q, offset=offset, lam=lam)


def energy(problem: QuboProblem, bits: np.ndarray) -> float:
    """x^T Q x + offset over the sparse entries."""
    bits = np.asarray(bits)
    if bits.shape != (problem.num_variables,):
        raise QuboError(
            f"solution length {bits.shape} does not match {problem.num_variables} variables"
        )
    rows, cols, vals = problem.coeff_arrays()
    b = bits.astype(np.float64)
    return float(vals @ (b[rows] * b[cols])) + problem.offset


def eval_Ha(bits: np.ndarray, slices: SliceSet, topo: CoreTopology, index: VariableIndex) -> float:
    """Assignment penalty, evaluated from the literal formulas (not the matrix).

    Valid solutions are exactly those with eval_Ha == 0.
    """
    bits = np.asarray(bits, dtype=np.float64)
    n, k, T = index.n, index.k, index.T
    total = 0.0
    for t in range(T):
        x = np.array([[bits[index.x(t, i, j)] for i in range(n)] for j in range(k)])
        # S: each qubit on exactly one core
        total += float(np.sum((x.sum(axis=0) - 1.0) ** 2))
        # R: per-core load equals its slack count
        for j in range(k):
            ysum = sum(bits[index.y(t, j, s)] for s in range(topo.capacities[j]))
            total += float((x[j].sum() - ysum) ** 2)
        # P: cut edges via the Laplacian quadratic form
        lap = laplacian(slices.slices[t].graph).astype(np.float64)
        for j in range(k):
            total += float(x[j] @ lap @ x[j])
    return total


def eval_Ht(bits: np.ndarray, dist: np.ndarray, index: VariableIndex) -> float:
    """Hop-weighted transfer cost between consecutive slices (unweighted by lambda)."""
    bits = np.asarray(bits, dtype=np.float64)
    n, k, T = index.n, index.k, index.T
    total = 0.0
    for t in range(1, T):
        for i in range(n):
            for j in range(k):
                if bits[index.x(t - 1, i, j)]:
                    for l in range(k):
                        if l != j and bits[index.x(t, i, l)]:
                            total += float(dist[j, l])
    return total


def encode_assignment(
    index: VariableIndex, assignment: np.ndarray, capacities: tuple[int, ...]
) -> np.ndarray:
    """Bits for a per-slice core assignment, with slack set to the core loads.

    ``assignment`` is a T x n table of core indices. Slack bits are chosen so
    the capacity penalty vanishes whenever loads respect the capacities.
    """
    assignment = np.asarray(assignment)
    bits = np.zeros(index.total, dtype=np.int8)
    for t in range(index.T):
        loads = [0] * index.k
        for i in range(index.n):
            j = int(assignment[t, i])
            bits[index.x(t, i, j)] = 1
            loads[j] += 1
        for j in range(index.k):
            for s in range(min(loads[j], capacities[j])):
                bits[index.y(t, j, s)] = 1
    return bits


def export_qubo(problem: QuboProblem, path) -> None:
    """Write the sparse entries as text: header line, then `i j coeff` lines."""
    entries = sorted(problem.q.items())
    with open(path, "w") as fh:
        fh.write(f"# vars {problem.num_variables} offset {problem.offset!r}\n")
        for (i, j), coeff in entries:
            fh.write(f"{i} {j} {coeff!r}\n")

"""Circuit representation: ordered gate lists and interaction graphs.

A circuit is an ordered sequence of gates over n logical qubits. Gate order
is program order. Only multi-qubit gates matter for mapping; single-qubit
gates are parsed and kept but contribute nothing downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

Gate = tuple[int, ...]


class CircuitError(ValueError):
    """Malformed circuit document or invalid gate."""


def _check_gate(gate: Sequence[int], n: int) -> Gate:
    g = tuple(int(q) for q in gate)
    if len(g) < 1:
        raise CircuitError(f"empty gate: {gate!r}")
    if len(set(g)) != len(g):
        raise CircuitError(f"duplicate qubit index within gate {g}")
    for q in g:
        if q < 0 or q >= n:
            raise CircuitError(f"qubit index {q} out of range [0, {n}) in gate {g}")
    return g


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``n`` logical qubits."""

    n: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        if self.n < 1:
            raise CircuitError(f"qubit count must be >= 1, got {self.n}")
        checked = tuple(_check_gate(g, self.n) for g in self.gates)
        object.__setattr__(self, "gates", checked)

    @property
    def multi_qubit_gates(self) -> tuple[Gate, ...]:
        return tuple(g for g in self.gates if len(g) >= 2)

    def to_dict(self) -> dict:
        return {"n": self.n, "gates": [list(g) for g in self.gates]}


def parse_circuit(source) -> Circuit:
    """Parse a circuit document.

    Accepts a dict (already-decoded JSON), a JSON string, or anything with a
    ``read`` method. Schema: ``{"n": <int>, "gates": [[<int>,...], ...]}``.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (str, bytes)):
        try:
            source = json.loads(source)
        except json.JSONDecodeError as exc:
            raise CircuitError(f"invalid circuit JSON: {exc}") from exc
    if not isinstance(source, dict):
        raise CircuitError(f"circuit document must be a JSON object, got {type(source).__name__}")
    try:
        n = int(source["n"])
        gates = source["gates"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CircuitError(f"circuit document missing or malformed 'n'/'gates': {exc}") from exc
    if not isinstance(gates, list):
        raise CircuitError("'gates' must be a list of qubit-index lists")
    return Circuit(n=n, gates=tuple(tuple(g) for g in gates))


def load_circuit(path) -> Circuit:
    with open(path) as fh:
        return parse_circuit(fh)


@dataclass(frozen=True)
class InteractionGraph:
    """Simple graph over qubits; an edge means at least one shared gate."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise CircuitError(f"self-loop on node {u}")
            if not (0 <= u < v < self.n):
                raise CircuitError(f"bad edge ({u},{v}) for n={self.n}")

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


def interaction_graph(n: int, gates: Iterable[Sequence[int]]) -> InteractionGraph:
    """Clique-expand each multi-qubit gate into pairwise edges.

    A gate on m >= 2 qubits contributes all C(m,2) unordered pairs; repeated
    pairs collapse (set semantics). Single-qubit gates contribute nothing.
    """
    edges = set()
    for gate in gates:
        qs = sorted(gate)
        for a in range(len(qs)):
            for b in range(a + 1, len(qs)):
                edges.add((qs[a], qs[b]))
    return InteractionGraph(n=n, edges=frozenset(edges))


def laplacian(g: InteractionGraph) -> np.ndarray:
    """Graph Laplacian L = D - A as an integer matrix."""
    lap = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v in g.edges:
        lap[u, u] += 1
        lap[v, v] += 1
        lap[u, v] -= 1
        lap[v, u] -= 1
    return lap

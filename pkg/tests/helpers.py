"""Shared fixtures-in-plain-function form for the test suite."""

from __future__ import annotations

import numpy as np

from qmap.architecture import CoreTopology
from qmap.circuit import Circuit
from qmap.slicer import SliceSet, slice_circuit

# 5-qubit, 9-gate circuit that slices into 5 slices; slice 1 has edges
# {(0,2),(1,3)} and an isolated qubit 4.
TOY_GATES = ((0, 2), (1, 3), (0, 1), (2, 4), (1, 2), (3, 4), (0, 3), (1, 4), (2, 3))

# 6-qubit, 7-gate circuit with a known 3-slice decomposition and a known
# 2-core assignment requiring 3 transfers.
EX1_GATES = ((0, 1), (2, 4, 5), (0, 4), (2, 5), (1, 3), (0, 3, 5), (2, 4))

EX1_ASSIGNMENT = np.array(
    [
        [0, 0, 1, 0, 1, 1],
        [0, 0, 1, 0, 0, 1],
        [0, 0, 1, 0, 1, 0],
    ]
)


def toy_circuit() -> Circuit:
    return Circuit(n=5, gates=TOY_GATES)


def ex1_circuit() -> Circuit:
    return Circuit(n=6, gates=EX1_GATES)


def random_gate_list(rng: np.random.Generator, n: int, num_gates: int) -> list[tuple[int, int]]:
    gates = []
    for _ in range(num_gates):
        u, v = rng.choice(n, size=2, replace=False)
        gates.append((int(u), int(v)))
    return gates


def random_sliceset(
    rng: np.random.Generator, n_max: int = 8, t_max: int = 5, max_gates: int = 8
) -> SliceSet:
    """Random circuit's slices, regenerated until the slice count fits t_max."""
    while True:
        n = int(rng.integers(2, n_max + 1))
        gates = random_gate_list(rng, n, int(rng.integers(1, max_gates + 1)))
        s = slice_circuit(Circuit(n=n, gates=tuple(gates)))
        if 1 <= s.T <= t_max:
            return s


def random_connected_topology(
    rng: np.random.Generator, k_max: int = 3, cap_range: tuple[int, int] = (2, 4)
) -> CoreTopology:
    """Random spanning tree plus random extra links; capacities >= 2."""
    k = int(rng.integers(1, k_max + 1))
    links = set()
    for v in range(1, k):
        u = int(rng.integers(0, v))
        links.add((u, v))
    for u in range(k):
        for v in range(u + 1, k):
            if rng.random() < 0.3:
                links.add((u, v))
    caps = tuple(int(rng.integers(cap_range[0], cap_range[1] + 1)) for _ in range(k))
    return CoreTopology(capacities=caps, links=frozenset(links))

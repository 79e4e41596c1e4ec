"""Partition a circuit's multi-qubit gates into concurrently executable slices.

Within a slice every qubit participates in at most one gate, so all gates of
a slice can run simultaneously given a valid core assignment. Placement is
the recursive descent procedure with four cases:

  (1) an identical gate is already in the inspected slice -> drop the copy;
  (2) one of the gate's qubits is used by a different gate there -> place the
      gate in the next slice up;
  (3) reached slice 0 with no conflict -> place there;
  (4) otherwise inspect the previous slice.

The descent starts at the first empty slice and only ever moves down, so a
case-(2) placement lands either in a slice the descent already verified
conflict-free or in a fresh slice.
"""

from __future__ import annotations

from dataclasses import dataclass

from qmap.circuit import Circuit, Gate, InteractionGraph, interaction_graph


@dataclass(frozen=True)
class Slice:
    """One circuit slice: its gates and their interaction graph."""

    gates: tuple[Gate, ...]
    graph: InteractionGraph


@dataclass(frozen=True)
class SliceSet:
    """Ordered slices of a circuit, each with a precomputed graph."""

    n: int
    slices: tuple[Slice, ...]
    dropped_duplicates: int = 0

    @property
    def T(self) -> int:
        return len(self.slices)


def slice_circuit(c: Circuit) -> SliceSet:
    """Slice the circuit's multi-qubit gates; single-qubit gates are skipped.

    Deterministic in the gate order. Gates identical (as qubit sets) to one
    already in the slice under inspection are dropped and counted.
    """
    buckets: list[list[Gate]] = []
    keys: list[set[frozenset[int]]] = []
    used: list[set[int]] = []
    dropped = 0

    def place(t: int, gate: Gate, key: frozenset[int]) -> None:
        if t == len(buckets):
            buckets.append([])
            keys.append(set())
            used.append(set())
        buckets[t].append(gate)
        keys[t].add(key)
        used[t].update(key)

    for gate in c.gates:
        if len(gate) < 2:
            continue
        key = frozenset(gate)
        t = len(buckets)  # first empty slice
        while True:
            if t < len(buckets):
                if key in keys[t]:  # case (1)
                    dropped += 1
                    break
                if used[t] & key:  # case (2)
                    place(t + 1, gate, key)
                    break
            if t == 0:  # case (3)
                place(0, gate, key)
                break
            t -= 1  # case (4)

    slices = tuple(
        Slice(gates=tuple(b), graph=interaction_graph(c.n, b)) for b in buckets
    )
    return SliceSet(n=c.n, slices=slices, dropped_duplicates=dropped)


@dataclass(frozen=True)
class SliceStats:
    T: int
    gates_per_slice: tuple[int, ...]
    max_parallelism: int
    dropped_duplicates: int


def slice_stats(s: SliceSet) -> SliceStats:
    counts = tuple(len(sl.gates) for sl in s.slices)
    return SliceStats(
        T=s.T,
        gates_per_slice=counts,
        max_parallelism=max(counts, default=0),
        dropped_duplicates=s.dropped_duplicates,
    )

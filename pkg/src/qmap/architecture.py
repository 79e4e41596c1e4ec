"""Multi-core topology: cores, capacities, links, hop distances."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np


class TopologyError(ValueError):
    """Invalid or disconnected core topology."""


@dataclass(frozen=True)
class CoreTopology:
    """k cores with per-core qubit capacities and undirected inter-core links."""

    capacities: tuple[int, ...]
    links: frozenset[tuple[int, int]]

    def __post_init__(self):
        k = len(self.capacities)
        if k < 1:
            raise TopologyError("need at least one core")
        for c in self.capacities:
            if c < 1:
                raise TopologyError(f"core capacity must be >= 1, got {c}")
        norm = set()
        for a, b in self.links:
            if a == b:
                raise TopologyError(f"self-link on core {a}")
            if not (0 <= a < k and 0 <= b < k):
                raise TopologyError(f"link ({a},{b}) references core >= k={k}")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "links", frozenset(norm))

    @property
    def k(self) -> int:
        return len(self.capacities)

    @property
    def total_capacity(self) -> int:
        return sum(self.capacities)

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.k)]
        for a, b in self.links:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def to_dict(self) -> dict:
        return {
            "cores": self.k,
            "capacities": list(self.capacities),
            "links": sorted([a, b] for a, b in self.links),
        }


def all_to_all(k: int, c: int) -> CoreTopology:
    """Fully connected cores with uniform capacity."""
    links = frozenset((i, j) for i in range(k) for j in range(i + 1, k))
    return CoreTopology(capacities=(c,) * k, links=links)


def grid(rows: int, cols: int, c: int) -> CoreTopology:
    """4-neighbor grid; core index = row * cols + col."""
    if rows < 1 or cols < 1:
        raise TopologyError("grid dimensions must be >= 1")
    links = set()
    for r in range(rows):
        for col in range(cols):
            i = r * cols + col
            if col + 1 < cols:
                links.add((i, i + 1))
            if r + 1 < rows:
                links.add((i, i + cols))
    return CoreTopology(capacities=(c,) * (rows * cols), links=frozenset(links))


def parse_topology(source) -> CoreTopology:
    """Parse topology JSON: {"cores": k, "capacities": [...], "links": [[a,b],...]}."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (str, bytes)):
        source = json.loads(source)
    k = int(source["cores"])
    caps = tuple(int(c) for c in source["capacities"])
    if len(caps) != k:
        raise TopologyError(f"{len(caps)} capacities for {k} cores")
    links = frozenset((int(a), int(b)) for a, b in source.get("links", []))
    return CoreTopology(capacities=caps, links=links)


def load_topology(path) -> CoreTopology:
    with open(path) as fh:
        return parse_topology(fh)


def topology_from_flag(spec: str) -> CoreTopology:
    """Resolve a CLI topology flag: all2all:k,c | grid:r,c,cap | file:<path>."""
    kind, _, rest = spec.partition(":")
    if kind == "all2all":
        k, c = (int(v) for v in rest.split(","))
        return all_to_all(k, c)
    if kind == "grid":
        r, c, cap = (int(v) for v in rest.split(","))
        return grid(r, c, cap)
    if kind == "file":
        return load_topology(rest)
    raise TopologyError(f"unknown topology spec {spec!r}")


def hop_matrix(t: CoreTopology) -> np.ndarray:
    """All-pairs shortest-path hop counts (BFS per core).

    Raises TopologyError naming an unreachable core pair if the link graph
    is disconnected.
    """
    k = t.k
    adj = t.neighbors()
    d = np.full((k, k), -1, dtype=np.int64)
    for src in range(k):
        d[src, src] = 0
        q = deque([src])
        while q:
            u = q.popleft()
            for v in adj[u]:
                if d[src, v] < 0:
                    d[src, v] = d[src, u] + 1
                    q.append(v)
    bad = np.argwhere(d < 0)
    if len(bad):
        a, b = bad[0]
        raise TopologyError(f"topology is disconnected: core {a} cannot reach core {b}")
    return d

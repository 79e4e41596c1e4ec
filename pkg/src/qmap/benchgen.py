"""Benchmark circuit generators.

Only interaction patterns matter for mapping, so controlled-phase gates are
emitted as two consecutive interactions on the same pair and every Toffoli
as a fixed six-interaction pattern on its qubit triple. Gate counts and
angles of any particular transpiler are deliberately not chased.
"""

from __future__ import annotations

import numpy as np

from qmap.circuit import Circuit, Gate

FAMILIES = (
    "qft",
    "multi_target",
    "cuccaro_adder",
    "draper_adder",
    "random",
    "quantum_volume",
)

# depth intervals of the random presets
RANDOM_PRESETS = {
    "xs": (13, 19),
    "s": (38, 54),
    "m": (88, 120),
    "l": (529, 596),
}


class BenchError(ValueError):
    """Invalid benchmark parameters (e.g. wrong register parity)."""


def multi_target(n: int) -> Circuit:
    """Target qubit 0 interacting with every other qubit in turn: n-1 gates."""
    if n < 2:
        raise BenchError("multi_target needs n >= 2")
    return Circuit(n=n, gates=tuple((0, i) for i in range(1, n)))


def qft(n: int) -> Circuit:
    """QFT pattern: each controlled-phase as two interactions on the pair."""
    if n < 2:
        raise BenchError("qft needs n >= 2")
    gates: list[Gate] = []
    for i in range(n):
        for j in range(i + 1, n):
            gates.append((i, j))
            gates.append((i, j))
    return Circuit(n=n, gates=tuple(gates))


def _toffoli(a: int, b: int, c: int) -> list[Gate]:
    # fixed 6-interaction pattern standing in for the textbook decomposition
    return [(b, c), (a, c), (b, c), (a, c), (a, b), (a, b)]


def cuccaro_adder(n: int) -> Circuit:
    """Ripple-carry adder on two m-qubit registers plus one helper (n = 2m+1).

    MAJ/UMA ladder; layout: a_0..a_{m-1}, b_0..b_{m-1}, helper.
    """
    if n < 3 or n % 2 == 0:
        raise BenchError(f"cuccaro_adder needs odd n >= 3, got {n}")
    m = (n - 1) // 2
    a = list(range(m))
    b = list(range(m, 2 * m))
    helper = 2 * m
    gates: list[Gate] = []

    def maj(c: int, y: int, x: int) -> None:
        gates.append((x, y))
        gates.append((x, c))
        gates.extend(_toffoli(c, y, x))

    def uma(c: int, y: int, x: int) -> None:
        gates.extend(_toffoli(c, y, x))
        gates.append((x, c))
        gates.append((c, y))

    carries = [helper] + a[:-1]
    for i in range(m):
        maj(carries[i], b[i], a[i])
    for i in reversed(range(m)):
        uma(carries[i], b[i], a[i])
    return Circuit(n=n, gates=tuple(gates))


def draper_adder(n: int) -> Circuit:
    """QFT adder on two m-qubit registers (n = 2m): QFT(b), controlled
    phases from a onto b, inverse QFT(b)."""
    if n < 4 or n % 2 == 1:
        raise BenchError(f"draper_adder needs even n >= 4, got {n}")
    m = n // 2
    a = list(range(m))
    b = list(range(m, n))
    gates: list[Gate] = []

    def qft_block(reg: list[int]) -> list[Gate]:
        out: list[Gate] = []
        for i in range(len(reg)):
            for j in range(i + 1, len(reg)):
                out.append((reg[i], reg[j]))
                out.append((reg[i], reg[j]))
        return out

    fwd = qft_block(b)
    gates.extend(fwd)
    for i in range(m):
        for j in range(i, m):
            gates.append((a[i], b[j]))
            gates.append((a[i], b[j]))
    gates.extend(reversed(fwd))
    return Circuit(n=n, gates=tuple(gates))


def random_circuit(n: int, depth: int, seed: int = 0) -> Circuit:
    """Per layer, a uniform random maximal pairing of the qubits."""
    if n < 2 or depth < 1:
        raise BenchError("random_circuit needs n >= 2 and depth >= 1")
    rng = np.random.default_rng(seed)
    gates: list[Gate] = []
    for _ in range(depth):
        perm = rng.permutation(n)
        for p in range(0, n - 1, 2):
            gates.append((int(perm[p]), int(perm[p + 1])))
    return Circuit(n=n, gates=tuple(gates))


def random_preset(n: int, preset: str, seed: int = 0) -> Circuit:
    """Random circuit with depth drawn from a named preset interval."""
    try:
        lo, hi = RANDOM_PRESETS[preset.lower()]
    except KeyError:
        raise BenchError(f"unknown preset {preset!r}; choose from {sorted(RANDOM_PRESETS)}")
    rng = np.random.default_rng(seed)
    depth = int(rng.integers(lo, hi + 1))
    return random_circuit(n, depth, seed=seed + 1)


def quantum_volume(n: int, layers: int, seed: int = 0) -> Circuit:
    """Per layer: random permutation, adjacent pairing, three gates per pair."""
    if n < 2 or layers < 1:
        raise BenchError("quantum_volume needs n >= 2 and layers >= 1")
    rng = np.random.default_rng(seed)
    gates: list[Gate] = []
    for _ in range(layers):
        perm = rng.permutation(n)
        for p in range(0, n - 1, 2):
            pair = (int(perm[p]), int(perm[p + 1]))
            gates.extend([pair, pair, pair])
    return Circuit(n=n, gates=tuple(gates))


def generate(
    family: str,
    n: int,
    depth: int | None = None,
    layers: int | None = None,
    preset: str | None = None,
    seed: int = 0,
) -> Circuit:
    """Dispatch on the family name."""
    if family == "multi_target":
        return multi_target(n)
    if family == "qft":
        return qft(n)
    if family == "cuccaro_adder":
        return cuccaro_adder(n)
    if family == "draper_adder":
        return draper_adder(n)
    if family == "random":
        if preset is not None:
            return random_preset(n, preset, seed=seed)
        if depth is None:
            raise BenchError("random needs --depth or --preset")
        return random_circuit(n, depth, seed=seed)
    if family == "quantum_volume":
        if layers is None:
            layers = n  # quantum volume convention: depth equals width
        return quantum_volume(n, layers, seed=seed)
    raise BenchError(f"unknown family {family!r}; choose from {FAMILIES}")

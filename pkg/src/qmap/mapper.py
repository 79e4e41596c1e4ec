"""End-to-end pipeline: slice -> build -> solve -> decode -> validate -> measure."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from qmap.architecture import CoreTopology, hop_matrix
from qmap.circuit import Circuit
from qmap.qubo import (
    VariableIndex,
    build,
    default_lambda,
    encode_assignment,
    energy,
    eval_Ha,
)
from qmap.slicer import SliceSet, slice_circuit
from qmap.solver import AnnealParams, SolverError, anneal, exact_solve, solve_windowed


class MappingError(ValueError):
    """Infeasible mapping request (capacity or unmappable gate)."""


@dataclass(frozen=True)
class Mapping:
    """Per-slice qubit -> core table (T x n)."""

    assignment: np.ndarray

    @property
    def T(self) -> int:
        return self.assignment.shape[0]

    @property
    def n(self) -> int:
        return self.assignment.shape[1]


@dataclass(frozen=True)
class DecodeDiagnosis:
    """Qubits without a unique core bit: list of (slice, qubit, set-bit count)."""

    problems: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class TransferEvent:
    qubit: int
    to_slice: int  # the slice entered; the move happens between to_slice-1 and to_slice
    from_core: int
    to_core: int
    hops: int


@dataclass
class MappingReport:
    valid: bool
    n: int
    T: int
    k: int
    lam: float
    energy: float
    M: float  # hop-weighted inter-core communications
    transfer_count: int
    transfers: list[TransferEvent]
    wall_time: float
    assignment: np.ndarray | None
    loads: list[list[int]]
    two_qubit_gates: int
    relative_m: float | None
    violations: list[str] = field(default_factory=list)
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "n": self.n,
            "T": self.T,
            "k": self.k,
            "lambda": self.lam,
            "energy": self.energy,
            "M": self.M,
            "transfer_count": self.transfer_count,
            "wall_time_s": self.wall_time,
            "assignment": None if self.assignment is None else self.assignment.tolist(),
            "transfers": [
                {
                    "t": e.to_slice,
                    "qubit": e.qubit,
                    "from": e.from_core,
                    "to": e.to_core,
                    "hops": e.hops,
                }
                for e in self.transfers
            ],
            "loads": self.loads,
            "two_qubit_gates": self.two_qubit_gates,
            "relative_m": self.relative_m,
            "violations": self.violations,
            "error": self.error,
        }


def decode(bits: np.ndarray, index: VariableIndex):
    """Read the assignment table out of a solution vector.

    Returns a Mapping when every (slice, qubit) has exactly one set core bit,
    otherwise a DecodeDiagnosis listing the offenders. Slack bits are ignored.
    """
    bits = np.asarray(bits)
    if bits.shape != (index.total,):
        raise ValueError(f"solution length {bits.shape} does not match {index.total}")
    assignment = np.zeros((index.T, index.n), dtype=np.int64)
    problems = []
    for t in range(index.T):
        for i in range(index.n):
            cores = [j for j in range(index.k) if bits[index.x(t, i, j)]]
            if len(cores) == 1:
                assignment[t, i] = cores[0]
            else:
                problems.append((t, i, len(cores)))
    if problems:
        return DecodeDiagnosis(problems=tuple(problems))
    return Mapping(assignment=assignment)


def encode(m: Mapping, index: VariableIndex, capacities: tuple[int, ...]) -> np.ndarray:
    """Inverse of decode, with slack bits set to the per-core loads."""
    return encode_assignment(index, m.assignment, capacities)


@dataclass(frozen=True)
class Verdict:
    valid: bool
    violations: tuple[str, ...]


def validate(m: Mapping, slices: SliceSet, topo: CoreTopology) -> Verdict:
    """Check co-location of every interaction edge and per-core capacity."""
    violations = []
    for t in range(m.T):
        row = m.assignment[t]
        for u, v in sorted(slices.slices[t].graph.edges):
            if row[u] != row[v]:
                violations.append(
                    f"slice {t}: edge ({u},{v}) split across cores {row[u]} and {row[v]}"
                )
        loads = np.bincount(row, minlength=topo.k)
        for j in range(topo.k):
            if loads[j] > topo.capacities[j]:
                violations.append(
                    f"slice {t}: core {j} holds {loads[j]} qubits, capacity {topo.capacities[j]}"
                )
    return Verdict(valid=not violations, violations=tuple(violations))


def transfers(m: Mapping, dist: np.ndarray) -> tuple[list[TransferEvent], float, int]:
    """Transfer events between consecutive slices with (events, M, count)."""
    events = []
    for t in range(1, m.T):
        for i in range(m.n):
            a, b = int(m.assignment[t - 1, i]), int(m.assignment[t, i])
            if a != b:
                events.append(
                    TransferEvent(
                        qubit=i, to_slice=t, from_core=a, to_core=b, hops=int(dist[a, b])
                    )
                )
    m_total = float(sum(e.hops for e in events))
    return events, m_total, len(events)


def _loads(m: Mapping, k: int) -> list[list[int]]:
    return [np.bincount(m.assignment[t], minlength=k).tolist() for t in range(m.T)]


def map_circuit(
    circuit: Circuit,
    topo: CoreTopology,
    lam: float | None = None,
    params: AnnealParams | None = None,
    solver: str = "anneal",
    window_vars_budget: int = 50_000,
) -> MappingReport:
    """Run the full mapping pipeline and always produce a report.

    The valid flag reflects the assignment-penalty check on the solution;
    solver failures are reported with valid=False rather than raised.
    """
    start = time.perf_counter()
    n = circuit.n
    two_qubit = len(circuit.multi_qubit_gates)
    if topo.total_capacity < n:
        raise MappingError(
            f"infeasible: total capacity {topo.total_capacity} < {n} qubits"
        )
    max_cap = max(topo.capacities)
    for g in circuit.multi_qubit_gates:
        if len(g) > max_cap:
            raise MappingError(
                f"unmappable gate {g}: {len(g)} qubits exceed the largest core capacity {max_cap}"
            )
    slices = slice_circuit(circuit)
    if slices.T == 0:
        return MappingReport(
            valid=True, n=n, T=0, k=topo.k, lam=0.0, energy=0.0, M=0.0,
            transfer_count=0, transfers=[], wall_time=time.perf_counter() - start,
            assignment=np.zeros((0, n), dtype=np.int64), loads=[],
            two_qubit_gates=two_qubit, relative_m=None,
        )
    dist = hop_matrix(topo)
    lam = default_lambda(slices.T, n) if lam is None else lam
    params = params or AnnealParams()

    index = VariableIndex(n=n, k=topo.k, T=slices.T, capacities=topo.capacities)
    error = None
    try:
        if solver == "exact":
            result = exact_solve(slices, topo, dist, lam)
        elif index.total > window_vars_budget:
            result = solve_windowed(
                slices, topo, dist, lam, window_vars_budget=window_vars_budget, params=params
            )
        else:
            problem = build(slices, topo, dist, lam)
            result = anneal(problem, params)
    except SolverError as exc:
        error = str(exc)
        result = None

    if result is None:
        return MappingReport(
            valid=False, n=n, T=slices.T, k=topo.k, lam=lam, energy=float("nan"),
            M=float("nan"), transfer_count=0, transfers=[],
            wall_time=time.perf_counter() - start, assignment=None, loads=[],
            two_qubit_gates=two_qubit, relative_m=None, error=error,
        )

    ha = eval_Ha(result.best, slices, topo, index)
    decoded = decode(result.best, index)
    if isinstance(decoded, Mapping):
        verdict = validate(decoded, slices, topo)
        events, m_total, count = transfers(decoded, dist)
        valid = ha == 0.0
        return MappingReport(
            valid=valid, n=n, T=slices.T, k=topo.k, lam=lam,
            energy=result.best_energy, M=m_total, transfer_count=count,
            transfers=events, wall_time=time.perf_counter() - start,
            assignment=decoded.assignment, loads=_loads(decoded, topo.k),
            two_qubit_gates=two_qubit,
            relative_m=(m_total / two_qubit) if two_qubit else None,
            violations=list(verdict.violations),
        )
    problems = ", ".join(f"(t={t}, qubit={i}, bits={c})" for t, i, c in decoded.problems)
    return MappingReport(
        valid=False, n=n, T=slices.T, k=topo.k, lam=lam, energy=result.best_energy,
        M=float("nan"), transfer_count=0, transfers=[],
        wall_time=time.perf_counter() - start, assignment=None, loads=[],
        two_qubit_gates=two_qubit, relative_m=None,
        violations=[f"unassigned or multiply-assigned qubits: {problems}"],
    )


def write_svg(report: MappingReport, path) -> None:
    """Static timeline: slices on the x-axis, cores on the y-axis.

    Qubits that moved since the previous slice are drawn in red.
    """
    if report.assignment is None:
        raise ValueError("report has no assignment to draw")
    assignment = report.assignment
    T, n = assignment.shape
    k = report.k
    moved = {(e.to_slice, e.qubit) for e in report.transfers}
    cell_w, row_h, pad = 90, 60, 40
    width = pad * 2 + cell_w * max(T, 1)
    height = pad * 2 + row_h * k
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        '<style>text{font-family:sans-serif;font-size:12px}</style>',
    ]
    for j in range(k):
        y = pad + j * row_h
        parts.append(
            f'<rect x="{pad}" y="{y}" width="{cell_w * T}" height="{row_h - 8}" '
            'fill="#eef3fa" stroke="#88a"/>'
        )
        parts.append(f'<text x="4" y="{y + row_h // 2}">core {j}</text>')
    for t in range(T):
        x = pad + t * cell_w
        parts.append(f'<text x="{x + cell_w // 2 - 8}" y="{pad - 8}">t={t}</text>')
        per_core: dict[int, int] = {}
        for i in range(n):
            j = int(assignment[t, i])
            slot = per_core.get(j, 0)
            per_core[j] = slot + 1
            cx = x + 16 + (slot % 4) * 18
            cy = pad + j * row_h + 14 + (slot // 4) * 18
            color = "#c33" if (t, i) in moved else "#333"
            parts.append(f'<circle cx="{cx}" cy="{cy}" r="7" fill="{color}"/>')
            parts.append(
                f'<text x="{cx - 4}" y="{cy + 4}" fill="#fff" font-size="9">{i}</text>'
            )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))

"""QUBO solvers: simulated annealing, an exact oracle, and windowed solving.

The annealer runs independent single-bit-flip Metropolis chains over a
geometric inverse-temperature schedule (numba-compiled kernel, incremental
delta-energy updates via adjacency lists).

The exact oracle enumerates, per slice, every assignment with zero penalty
(co-location and capacity respected) and then runs shortest-path dynamic
programming across slices with the hop-weighted transfer cost as the stage
cost. On instances where it runs, it is ground truth.

The windowed driver splits the slice sequence into consecutive windows that
fit a variable budget, fixes each window's final assignment, and charges the
boundary transfer cost to the next window as linear bias terms.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from qmap.architecture import CoreTopology
from qmap.qubo import (
    QuboProblem,
    VariableIndex,
    build,
    encode_assignment,
    energy,
    eval_Ha,
)
from qmap.slicer import SliceSet


class SolverError(RuntimeError):
    """Solve failure: budget exceeded, no valid partition, or invalid window."""


@dataclass(frozen=True)
class AnnealParams:
    sweeps: int = 1000
    reads: int = 50
    beta_min: float | None = None  # derived from coefficients when None
    beta_max: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.sweeps < 1 or self.reads < 1:
            raise ValueError("sweeps and reads must be positive")
        if self.beta_min is not None and self.beta_max is not None:
            if not (0 < self.beta_min < self.beta_max):
                raise ValueError("need 0 < beta_min < beta_max")


@dataclass
class SolveResult:
    best: np.ndarray
    best_energy: float
    read_energies: list[float]
    wall_time: float
    window_energies: list[float] = field(default_factory=list)


def _to_adjacency(problem: QuboProblem):
    """Split Q into a diagonal vector and a symmetric CSR off-diagonal part."""
    nvars = problem.num_variables
    h = np.zeros(nvars, dtype=np.float64)
    pairs: dict[int, list[tuple[int, float]]] = {}
    for (i, j), coeff in problem.q.items():
        if i == j:
            h[i] += coeff
        else:
            pairs.setdefault(i, []).append((j, coeff))
            pairs.setdefault(j, []).append((i, coeff))
    indptr = np.zeros(nvars + 1, dtype=np.int64)
    for i in range(nvars):
        indptr[i + 1] = indptr[i] + len(pairs.get(i, ()))
    indices = np.zeros(indptr[-1], dtype=np.int64)
    data = np.zeros(indptr[-1], dtype=np.float64)
    for i in range(nvars):
        for pos, (j, coeff) in enumerate(pairs.get(i, ())):
            indices[indptr[i] + pos] = j
            data[indptr[i] + pos] = coeff
    return h, indptr, indices, data


def _beta_schedule(params: AnnealParams, h, indptr, data) -> np.ndarray:
    """Geometric schedule with endpoints derived from |Q| row sums."""
    if params.beta_min is not None and params.beta_max is not None:
        lo, hi = params.beta_min, params.beta_max
    else:
        nvars = h.shape[0]
        rowsums = np.abs(h).copy()
        for i in range(nvars):
            rowsums[i] += np.abs(data[indptr[i] : indptr[i + 1]]).sum()
        nz = rowsums[rowsums > 0]
        coeffs = np.abs(np.concatenate([h[h != 0], data[data != 0]]))
        if nz.size == 0 or coeffs.size == 0:
            lo, hi = 1.0, 1.0
        else:
            # hot end from the largest possible flip change, cold end from the
            # smallest nonzero coefficient (the finest energy scale present)
            lo = np.log(2.0) / nz.max()
            hi = np.log(100.0) / coeffs.min()
            if hi <= lo:
                hi = lo * 2.0
        if params.beta_min is not None:
            lo = params.beta_min
        if params.beta_max is not None:
            hi = params.beta_max
    return np.geomspace(lo, hi, params.sweeps)


@njit(cache=True)
def _anneal_read(h, indptr, indices, data, betas, seed):  # pragma: no cover
    np.random.seed(seed)
    nvars = h.shape[0]
    state = np.empty(nvars, dtype=np.int8)
    for i in range(nvars):
        state[i] = 1 if np.random.random() < 0.5 else 0
    # local fields: f_i = sum_j W_ij x_j
    fields = np.zeros(nvars, dtype=np.float64)
    for i in range(nvars):
        if state[i]:
            for p in range(indptr[i], indptr[i + 1]):
                fields[indices[p]] += data[p]
    e = 0.0
    for i in range(nvars):
        if state[i]:
            e += h[i] + 0.5 * fields[i]
    best_e = e
    best_state = state.copy()
    for sweep in range(betas.shape[0]):
        beta = betas[sweep]
        for i in range(nvars):
            sign = 1.0 - 2.0 * state[i]
            delta = sign * (h[i] + fields[i])
            if delta <= 0.0 or np.random.random() < np.exp(-beta * delta):
                upd = sign  # +1 when turning on, -1 when turning off
                state[i] = 1 - state[i]
                e += delta
                for p in range(indptr[i], indptr[i + 1]):
                    fields[indices[p]] += upd * data[p]
                if e < best_e:
                    best_e = e
                    best_state[:] = state
    return best_state, best_e


def anneal(problem: QuboProblem, params: AnnealParams | None = None) -> SolveResult:
    """Run independent annealing reads and return the minimum-energy state.

    Deterministic for a fixed seed; ties between reads break toward the
    lowest read index.
    """
    params = params or AnnealParams()
    start = time.perf_counter()
    h, indptr, indices, data = _to_adjacency(problem)
    betas = _beta_schedule(params, h, indptr, data)
    best_state = None
    best_e = np.inf
    read_energies = []
    for read in range(params.reads):
        state, e = _anneal_read(h, indptr, indices, data, betas, np.int64(params.seed + read))
        read_energies.append(float(e) + problem.offset)
        if e < best_e:
            best_e = e
            best_state = state.copy()
    result_energy = energy(problem, best_state)
    return SolveResult(
        best=best_state,
        best_energy=result_energy,
        read_energies=read_energies,
        wall_time=time.perf_counter() - start,
    )


def _components(graph) -> list[list[int]]:
    seen = [False] * graph.n
    adj: list[list[int]] = [[] for _ in range(graph.n)]
    for u, v in graph.edges:
        adj[u].append(v)
        adj[v].append(u)
    comps = []
    for s in range(graph.n):
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def _slice_assignments(
    graph, capacities: tuple[int, ...], limit: int, canonical: bool
) -> list[np.ndarray]:
    """All zero-penalty assignments for one slice.

    Every connected component of the interaction graph must land wholly on
    one core with enough remaining capacity. With ``canonical`` (uniform
    capacities on an all-to-all topology), core labels are fixed to
    first-use order, since any core relabeling is then a symmetry of the
    whole problem.
    """
    comps = _components(graph)
    k = len(capacities)
    out: list[np.ndarray] = []
    assign = np.zeros(graph.n, dtype=np.int64)
    remaining = list(capacities)

    def rec(ci: int, max_used: int) -> None:
        if len(out) > limit:
            raise SolverError(f"exact oracle budget exceeded ({limit} states per slice)")
        if ci == len(comps):
            out.append(assign.copy())
            return
        comp = comps[ci]
        top = min(k, max_used + 1) if canonical else k
        for j in range(top):
            if remaining[j] >= len(comp):
                for q in comp:
                    assign[q] = j
                remaining[j] -= len(comp)
                rec(ci + 1, max(max_used, j + 1) if canonical else max_used)
                remaining[j] += len(comp)

    rec(0, 0)
    return out


def exact_solve(
    slices: SliceSet,
    topo: CoreTopology,
    dist: np.ndarray,
    lam: float,
    state_limit: int = 200_000,
    transition_limit: int = 50_000_000,
) -> SolveResult:
    """Global optimum over valid assignments via per-slice enumeration + DP.

    By penalty dominance this equals the QUBO optimum whenever a valid
    assignment exists. Small instances only; raises SolverError when the
    enumeration or DP budget is exceeded or some slice has no valid
    partition.
    """
    start = time.perf_counter()
    n, k, T = slices.n, topo.k, slices.T
    uniform = len(set(topo.capacities)) == 1
    a2a = bool(np.all(dist[~np.eye(k, dtype=bool)] == 1)) if k > 1 else True
    per_slice: list[np.ndarray] = []
    for t in range(T):
        canonical = t == 0 and uniform and a2a
        states = _slice_assignments(slices.slices[t].graph, topo.capacities, state_limit, canonical)
        if not states:
            raise SolverError(
                f"slice {t} has no valid partition (a gate group exceeds every core capacity)"
            )
        per_slice.append(np.array(states, dtype=np.int64))
    transitions = sum(
        len(per_slice[t - 1]) * len(per_slice[t]) for t in range(1, T)
    )
    if transitions > transition_limit:
        raise SolverError(f"exact oracle budget exceeded ({transitions} transitions)")

    dist = np.asarray(dist, dtype=np.float64)
    cost = np.zeros(len(per_slice[0]), dtype=np.float64)
    back: list[np.ndarray] = []
    for t in range(1, T):
        prev, cur = per_slice[t - 1], per_slice[t]
        # stage[p, q] = hop-weighted moves between assignment p and q
        stage = dist[prev[:, None, :], cur[None, :, :]].sum(axis=2)
        total = cost[:, None] + stage
        arg = total.argmin(axis=0)
        back.append(arg)
        cost = total[arg, np.arange(len(cur))]
    end = int(cost.argmin())
    path = [end]
    for t in range(T - 1, 0, -1):
        path.append(int(back[t - 1][path[-1]]))
    path.reverse()
    assignment = np.stack([per_slice[t][path[t]] for t in range(T)])

    problem = build(slices, topo, dist, lam)
    bits = encode_assignment(problem.index, assignment, topo.capacities)
    best_energy = energy(problem, bits)
    return SolveResult(
        best=bits,
        best_energy=best_energy,
        read_energies=[best_energy],
        wall_time=time.perf_counter() - start,
    )


def solve_windowed(
    slices: SliceSet,
    topo: CoreTopology,
    dist: np.ndarray,
    lam: float,
    window_vars_budget: int = 50_000,
    params: AnnealParams | None = None,
) -> SolveResult:
    """Divide-and-conquer annealing over consecutive slice windows.

    Each window after the first receives the previous window's final-slice
    assignment as linear bias terms (+lambda * d_jl on its first-slice x
    variables), so boundary transfer costs are charged exactly once. A
    window whose best solution has nonzero assignment penalty is retried
    once with 4x reads, then reported as a failure.
    """
    params = params or AnnealParams()
    start = time.perf_counter()
    n, k, T = slices.n, topo.k, slices.T
    vars_per_slice = k * n + topo.total_capacity
    if window_vars_budget < vars_per_slice:
        raise SolverError(
            f"window budget {window_vars_budget} below one slice ({vars_per_slice} variables)"
        )
    width = min(T, window_vars_budget // vars_per_slice)
    windows = [(lo, min(lo + width, T)) for lo in range(0, T, width)]

    chunks: list[np.ndarray] = []
    window_energies: list[float] = []
    boundary: np.ndarray | None = None  # core per qubit at previous window's last slice
    for widx, (lo, hi) in enumerate(windows):
        sub = SliceSet(n=n, slices=slices.slices[lo:hi])
        problem = build(sub, topo, dist, lam)
        if boundary is not None and lam > 0:
            for i in range(n):
                j = int(boundary[i])
                for l in range(k):
                    if l != j and dist[j, l]:
                        key = (problem.index.x(0, i, l),) * 2
                        problem.q[key] = problem.q.get(key, 0.0) + lam * float(dist[j, l])
            problem._arrays = None
        attempt_params = params
        for attempt in range(2):
            sub_seed = params.seed + 7919 * widx + attempt
            result = anneal(problem, AnnealParams(
                sweeps=attempt_params.sweeps,
                reads=attempt_params.reads * (4 if attempt else 1),
                beta_min=params.beta_min,
                beta_max=params.beta_max,
                seed=sub_seed,
            ))
            if eval_Ha(result.best, sub, topo, problem.index) == 0.0:
                break
        else:
            raise SolverError(f"window {widx} (slices {lo}..{hi - 1}) found no valid assignment")
        chunks.append(result.best)
        window_energies.append(result.best_energy)
        last = hi - lo - 1
        boundary = np.array(
            [
                next(
                    j
                    for j in range(k)
                    if result.best[problem.index.x(last, i, j)]
                )
                for i in range(n)
            ]
        )

    full_problem = build(slices, topo, dist, lam)
    bits = np.zeros(full_problem.num_variables, dtype=np.int8)
    for (lo, hi), chunk in zip(windows, chunks):
        sub_index = VariableIndex(n=n, k=k, T=hi - lo, capacities=topo.capacities)
        for t in range(hi - lo):
            for i in range(n):
                for j in range(k):
                    bits[full_problem.index.x(lo + t, i, j)] = chunk[sub_index.x(t, i, j)]
            for j in range(k):
                for s in range(topo.capacities[j]):
                    bits[full_problem.index.y(lo + t, j, s)] = chunk[sub_index.y(t, j, s)]
    return SolveResult(
        best=bits,
        best_energy=energy(full_problem, bits),
        read_energies=[],
        wall_time=time.perf_counter() - start,
        window_energies=window_energies,
    )

"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.
"""

import itertools
import statistics

import numpy as np
import pytest

from qmap.architecture import all_to_all, grid, hop_matrix
from qmap.benchgen import multi_target, qft, quantum_volume
from qmap.circuit import Circuit, interaction_graph, laplacian
from qmap.mapper import Mapping, decode, encode, map_circuit, validate
from qmap.qubo import (
    VariableIndex,
    build,
    default_lambda,
    encode_assignment,
    energy,
    eval_Ha,
    eval_Ht,
)
from qmap.slicer import Slice, SliceSet, slice_circuit
from qmap.solver import AnnealParams, SolverError, anneal, exact_solve, solve_windowed

from helpers import (
    EX1_ASSIGNMENT,
    TOY_GATES,
    ex1_circuit,
    random_connected_topology,
    random_gate_list,
    random_sliceset,
    toy_circuit,
)


def batched_Ha(bits_matrix, slices, topo, index):
    """Literal S+R+P formulas evaluated over many bit vectors at once."""
    B = np.asarray(bits_matrix, dtype=np.float64)
    n, k, T = index.n, index.k, index.T
    total = np.zeros(B.shape[0])
    for t in range(T):
        x_idx = np.array([[index.x(t, i, j) for i in range(n)] for j in range(k)])
        X = B[:, x_idx]  # (V, k, n)
        total += ((X.sum(axis=1) - 1.0) ** 2).sum(axis=1)
        for j in range(k):
            y_idx = np.array([index.y(t, j, s) for s in range(topo.capacities[j])])
            ysum = B[:, y_idx].sum(axis=1) if len(y_idx) else 0.0
            total += (X[:, j, :].sum(axis=1) - ysum) ** 2
        lap = laplacian(slices.slices[t].graph).astype(np.float64)
        total += np.einsum("vjn,nm,vjm->v", X, lap, X)
    return total


def exhaustive_instances():
    """Every shape with <= 14 total variables, a few edge sets per shape."""
    out = []
    for n in (1, 2, 3, 4):
        for k in (1, 2, 3):
            for c in (1, 2):
                for T in (1, 2):
                    if T * (k * n + k * c) > 14 or k * c < n:
                        continue
                    edge_plans = [[frozenset()] * T]
                    if n >= 2:
                        edge_plans.append([frozenset({(0, 1)})] + [frozenset()] * (T - 1))
                    if n >= 3:
                        edge_plans.append([frozenset({(0, 1), (1, 2)})] + [frozenset()] * (T - 1))
                    if n >= 2 and T >= 2:
                        edge_plans.append([frozenset({(0, 1)})] * T)
                    for plan in edge_plans:
                        slices = SliceSet(
                            n=n,
                            slices=tuple(
                                Slice(
                                    gates=tuple(tuple(sorted(e)) for e in sorted(edges)),
                                    graph=interaction_graph(
                                        n, [tuple(sorted(e)) for e in edges]
                                    ),
                                )
                                for edges in plan
                            ),
                        )
                        topo = all_to_all(k, c)
                        out.append((slices, topo))
    return out


def test_a1_energy_equivalence():
    rng = np.random.default_rng(101)
    instances = 0
    while instances < 10:
        slices = random_sliceset(rng, n_max=8, t_max=5, max_gates=8)
        k = int(rng.integers(2, 5))
        c = int(rng.integers(2, 4))
        topo = all_to_all(k, c)
        if topo.total_capacity < slices.n:
            continue
        instances += 1
        dist = hop_matrix(topo)
        lam = float(rng.uniform(0, 0.5))
        q = build(slices, topo, dist, lam)
        for _ in range(100):
            bits = rng.integers(0, 2, size=q.num_variables)
            direct = eval_Ha(bits, slices, topo, q.index) + lam * eval_Ht(bits, dist, q.index)
            assert abs(energy(q, bits) - direct) <= 1e-9
    print("A1 PASS: matrix energy == H_a + lambda*H_t on 10 instances x 100 vectors (<=1e-9)")


def test_a2_zero_penalty_iff_valid_exhaustive():
    rng = np.random.default_rng(102)
    checked = 0
    for slices, topo in exhaustive_instances():
        index = VariableIndex(slices.n, topo.k, slices.T, topo.capacities)
        vectors = np.array(
            list(itertools.product([0, 1], repeat=index.total)), dtype=np.int8
        )
        ha = batched_Ha(vectors, slices, topo, index)
        # batched evaluator agrees with the shipped formula evaluator
        for row in rng.choice(len(vectors), size=min(25, len(vectors)), replace=False):
            assert batched_Ha(vectors[row : row + 1], slices, topo, index)[0] == pytest.approx(
                eval_Ha(vectors[row], slices, topo, index)
            )
        for bits, h in zip(vectors, ha):
            if h == 0.0:
                m = decode(bits, index)
                assert isinstance(m, Mapping), "H_a=0 but some qubit lacks a unique core"
                assert validate(m, slices, topo).valid, "H_a=0 but assignment invalid"
                checked += 1
        # converse: every valid table has H_a=0 under load-indicator slack
        for flat in itertools.product(range(topo.k), repeat=slices.T * slices.n):
            table = np.array(flat).reshape(slices.T, slices.n)
            m = Mapping(assignment=table)
            bits = encode(m, index, topo.capacities)
            if validate(m, slices, topo).valid:
                assert eval_Ha(bits, slices, topo, index) == 0.0
    assert checked > 0
    print(f"A2 PASS: zero-penalty <=> valid, exhaustive, {checked} zero-penalty vectors, 0 counterexamples")


def test_a3_penalty_dominance():
    for slices, topo in exhaustive_instances():
        index = VariableIndex(slices.n, topo.k, slices.T, topo.capacities)
        dist = hop_matrix(topo)
        lam = default_lambda(slices.T, slices.n)
        q = build(slices, topo, dist, lam)
        vectors = np.array(
            list(itertools.product([0, 1], repeat=index.total)), dtype=np.int8
        )
        ha = batched_Ha(vectors, slices, topo, index)
        rows, cols, vals = q.coeff_arrays()
        B = vectors.astype(np.float64)
        energies = (B[:, rows] * B[:, cols]) @ vals + q.offset
        valid_mask = ha == 0.0
        if valid_mask.any():
            assert energies[~valid_mask].min() > energies[valid_mask].max()
            winner = vectors[int(energies.argmin())]
            m = decode(winner, index)
            assert isinstance(m, Mapping)
            assert validate(m, slices, topo).valid
    print("A3 PASS: penalty dominance with default lambda, global minimum decodes valid")


def test_a4_toy_model_reproduction():
    circuit = toy_circuit()
    slices = slice_circuit(circuit)
    assert slices.T == 5
    assert len(circuit.gates) == 9
    topo = all_to_all(3, 2)
    dist = hop_matrix(topo)
    index = VariableIndex(5, 3, 5, topo.capacities)
    assert index.num_assignment == 75
    assert index.total == 105

    oracle = exact_solve(slices, topo, dist, 1.0)
    optimum = oracle.best_energy

    results = {}
    valid_runs = 0
    for lam in (0.001, 0.1):
        q = build(slices, topo, dist, lam)
        ms = []
        for seed in range(20):
            res = anneal(q, AnnealParams(seed=10_000 * seed + int(lam * 1000)))
            if eval_Ha(res.best, slices, topo, q.index) == 0.0:
                valid_runs += 1
                ms.append(eval_Ht(res.best, dist, q.index))
        results[lam] = ms
    assert valid_runs >= 36  # >= 90% of 40 runs
    med_low = statistics.median(results[0.001])
    med_high = statistics.median(results[0.1])
    assert med_high <= med_low
    assert min(results[0.1]) == optimum
    # reference results for this setup are reported inconsistently elsewhere
    # (12/8 vs 15/10), so no fixed (M_low, M_high) pair is asserted here.
    print(
        f"A4 PASS: toy model 105 vars, {valid_runs}/40 valid, "
        f"median M {med_high} (lam=0.1) <= {med_low} (lam=0.001), best M == oracle {optimum}"
    )


def test_a5_ex1_reproduction():
    slices = slice_circuit(ex1_circuit())
    expected = [
        {frozenset({0, 1}), frozenset({2, 4, 5})},
        {frozenset({0, 4}), frozenset({2, 5}), frozenset({1, 3})},
        {frozenset({0, 3, 5}), frozenset({2, 4})},
    ]
    assert [set(map(frozenset, sl.gates)) for sl in slices.slices] == expected
    topo = all_to_all(2, 4)
    dist = hop_matrix(topo)
    index = VariableIndex(6, 2, 3, topo.capacities)
    bits = encode_assignment(index, EX1_ASSIGNMENT, topo.capacities)
    assert eval_Ha(bits, slices, topo, index) == 0.0
    assert eval_Ht(bits, dist, index) == 3.0
    oracle = exact_solve(slices, topo, dist, 1.0)
    assert oracle.best_energy <= 3.0
    print(
        f"A5 PASS: 6-qubit example slices exact, H_a=0, H_t=3, "
        f"oracle optimum {oracle.best_energy} <= 3"
    )


def test_a6_annealer_vs_oracle():
    rng = np.random.default_rng(106)
    hits = 0
    total = 0
    while total < 20:
        slices = random_sliceset(rng, n_max=6, t_max=4, max_gates=6)
        topo = random_connected_topology(rng, k_max=3)
        if topo.total_capacity < slices.n:
            continue
        dist = hop_matrix(topo)
        lam = default_lambda(slices.T, slices.n)
        try:
            oracle = exact_solve(slices, topo, dist, lam)
        except SolverError:
            continue
        total += 1
        q = build(slices, topo, dist, lam)
        res = anneal(q, AnnealParams(sweeps=2000, reads=100, seed=500 + total))
        assert eval_Ha(res.best, slices, topo, q.index) == 0.0, "annealer returned invalid"
        if abs(res.best_energy - oracle.best_energy) <= 1e-9:
            hits += 1
    assert hits >= 18
    print(f"A6 PASS: annealer optimal on {hits}/20 random instances, valid on 20/20")


def test_a7_windowed_stitching():
    circuit = Circuit(n=5, gates=TOY_GATES + ((2, 4),))
    slices = slice_circuit(circuit)
    assert slices.T == 6
    topo = all_to_all(3, 2)
    dist = hop_matrix(topo)
    lam = 0.1
    q = build(slices, topo, dist, lam)
    oracle = exact_solve(slices, topo, dist, 1.0)
    vars_per_slice = topo.k * slices.n + topo.total_capacity
    for width in (2, 3):
        res = solve_windowed(
            slices,
            topo,
            dist,
            lam,
            window_vars_budget=width * vars_per_slice,
            params=AnnealParams(seed=70 + width),
        )
        assert eval_Ha(res.best, slices, topo, q.index) == 0.0
        assert abs(res.best_energy - sum(res.window_energies)) <= 1e-9
        stitched_m = eval_Ht(res.best, dist, q.index)
        assert stitched_m >= oracle.best_energy
    print("A7 PASS: 2- and 3-slice windows valid, energy bookkeeping exact, M >= oracle optimum")


def test_a8_scaled_end_to_end():
    topo = grid(2, 2, 5)
    budget = 2 * (topo.k * 16 + topo.total_capacity)
    rep = map_circuit(
        qft(16), topo, params=AnnealParams(seed=0), window_vars_budget=budget
    )
    assert rep.valid
    assert np.isfinite(rep.M)

    def rel_m(circuit, seed):
        r = map_circuit(
            circuit, topo, params=AnnealParams(seed=seed), window_vars_budget=budget
        )
        assert r.valid
        return r.relative_m

    qv_rel = statistics.median(
        rel_m(quantum_volume(16, 8, seed=s), seed=s) for s in range(5)
    )
    mt_rel = statistics.median(rel_m(multi_target(16), seed=s) for s in range(5))
    assert qv_rel < mt_rel
    print(
        f"A8 PASS: qft(16) valid on 2x2 grid (M={rep.M}); "
        f"relative M quantum_volume {qv_rel:.3f} < multi_target {mt_rel:.3f}"
    )


def test_a9_slicing_properties():
    from test_slicer import occurrence_slices, oracle_slices, slice_keys

    rng = np.random.default_rng(109)
    for _ in range(1000):
        n = int(rng.integers(2, 11))
        gates = random_gate_list(rng, n, int(rng.integers(1, 25)))
        circuit = Circuit(n=n, gates=tuple(gates))
        s = slice_circuit(circuit)
        assert slice_keys(s) == oracle_slices(gates)
        for sl in s.slices:
            qubits = [q for g in sl.gates for q in g]
            assert len(qubits) == len(set(qubits))
        placed = sum(len(sl.gates) for sl in s.slices)
        assert placed + s.dropped_duplicates == len(gates)
        assert slice_keys(slice_circuit(circuit)) == slice_keys(s)
        for _ in occurrence_slices(gates):  # asserts monotonicity inside
            pass
    print("A9 PASS: 1000 random circuits, all slicing properties hold, matches oracle")

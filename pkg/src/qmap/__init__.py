"""Quantum circuit mapping for multi-core architectures via QUBO."""

from qmap.circuit import Circuit, InteractionGraph, interaction_graph, laplacian, parse_circuit
from qmap.slicer import Slice, SliceSet, slice_circuit, slice_stats
from qmap.architecture import CoreTopology, all_to_all, grid, hop_matrix
from qmap.qubo import QuboProblem, VariableIndex, build, default_lambda, energy, eval_Ha, eval_Ht
from qmap.solver import AnnealParams, SolveResult, anneal, exact_solve, solve_windowed
from qmap.mapper import Mapping, MappingReport, TransferEvent, decode, map_circuit, transfers, validate

__all__ = [
    "Circuit",
    "InteractionGraph",
    "interaction_graph",
    "laplacian",
    "parse_circuit",
    "Slice",
    "SliceSet",
    "slice_circuit",
    "slice_stats",
    "CoreTopology",
    "all_to_all",
    "grid",
    "hop_matrix",
    "QuboProblem",
    "VariableIndex",
    "build",
    "default_lambda",
    "energy",
    "eval_Ha",
    "eval_Ht",
    "AnnealParams",
    "SolveResult",
    "anneal",
    "exact_solve",
    "solve_windowed",
    "Mapping",
    "MappingReport",
    "TransferEvent",
    "decode",
    "map_circuit",
    "transfers",
    "validate",
]

"""Command-line interface: generate benchmarks, map circuits, run sweeps."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from qmap import benchgen
from qmap.architecture import TopologyError, hop_matrix, topology_from_flag
from qmap.circuit import CircuitError, load_circuit
from qmap.mapper import MappingError, map_circuit, write_svg
from qmap.qubo import build, export_qubo
from qmap.slicer import slice_circuit
from qmap.solver import AnnealParams


def _error_json(message: str) -> str:
    return json.dumps({"error": message})


def cmd_gen(args) -> int:
    circuit = benchgen.generate(
        args.family,
        args.n,
        depth=args.depth,
        layers=args.layers,
        preset=args.preset,
        seed=args.seed,
    )
    doc = json.dumps(circuit.to_dict())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(doc + "\n")
    else:
        print(doc)
    return 0


def _anneal_params(args) -> AnnealParams:
    return AnnealParams(sweeps=args.sweeps, reads=args.reads, seed=args.seed)


def cmd_map(args) -> int:
    circuit = load_circuit(args.circuit)
    topo = topology_from_flag(args.topology)
    report = map_circuit(
        circuit,
        topo,
        lam=args.lam,
        params=_anneal_params(args),
        solver=args.solver,
        window_vars_budget=args.window_budget,
    )
    doc = json.dumps(report.to_dict(), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(doc + "\n")
    else:
        print(doc)
    if args.svg and report.assignment is not None:
        write_svg(report, args.svg)
    if args.export_qubo:
        slices = slice_circuit(circuit)
        lam = report.lam
        problem = build(slices, topo, hop_matrix(topo), lam)
        export_qubo(problem, args.export_qubo)
    return 0 if report.valid else 1


SWEEP_FIELDS = [
    "family",
    "n",
    "depth",
    "two_qubit_gates",
    "lambda",
    "seed",
    "valid",
    "M",
    "transfer_count",
    "relative_m",
    "wall_time_s",
    "error",
]


def _sweep_row(job) -> dict:
    family, n, topology_spec, lam, seed, sweeps, reads, window_budget = job
    row = {f: "" for f in SWEEP_FIELDS}
    row.update({"family": family, "n": n, "lambda": "" if lam is None else lam, "seed": seed})
    try:
        circuit = benchgen.generate(family, n, seed=seed)
        topo = topology_from_flag(topology_spec)
        report = map_circuit(
            circuit,
            topo,
            lam=lam,
            params=AnnealParams(sweeps=sweeps, reads=reads, seed=seed),
            window_vars_budget=window_budget,
        )
        row.update(
            {
                "depth": report.T,
                "two_qubit_gates": report.two_qubit_gates,
                "lambda": report.lam,
                "valid": report.valid,
                "M": report.M,
                "transfer_count": report.transfer_count,
                "relative_m": "" if report.relative_m is None else report.relative_m,
                "wall_time_s": round(report.wall_time, 3),
                "error": report.error or "",
            }
        )
    except (MappingError, TopologyError, CircuitError, benchgen.BenchError, ValueError) as exc:
        row["valid"] = False
        row["error"] = str(exc)
    return row


def cmd_sweep(args) -> int:
    families = [f for f in args.families.split(",") if f] if args.families else []
    ns = [int(v) for v in args.ns.split(",")] if args.ns else []
    seeds = [int(v) for v in args.seeds.split(",")]
    lams = [None if v == "default" else float(v) for v in args.lambdas.split(",")]
    jobs = [
        (family, n, args.topology, lam, seed, args.sweeps, args.reads, args.window_budget)
        for family in families
        for n in ns
        for lam in lams
        for seed in seeds
    ]
    workers = args.jobs or int(os.environ.get("QMAP_JOBS", "1"))
    if workers > 1 and jobs:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(job) for job in jobs]
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=SWEEP_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a benchmark circuit as JSON")
    p_gen.add_argument("--family", required=True, choices=benchgen.FAMILIES)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--depth", type=int, default=None)
    p_gen.add_argument("--layers", type=int, default=None)
    p_gen.add_argument("--preset", default=None, choices=sorted(benchgen.RANDOM_PRESETS))
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=cmd_gen)

    p_map = sub.add_parser("map", help="map a circuit JSON onto a topology")
    p_map.add_argument("--circuit", required=True)
    p_map.add_argument("--topology", required=True, help="all2all:k,c | grid:r,c,cap | file:<path>")
    p_map.add_argument("--lambda", dest="lam", type=float, default=None)
    p_map.add_argument("--solver", choices=["anneal", "exact"], default="anneal")
    p_map.add_argument("--sweeps", type=int, default=1000)
    p_map.add_argument("--reads", type=int, default=50)
    p_map.add_argument("--seed", type=int, default=0)
    p_map.add_argument("--window-budget", type=int, default=50_000)
    p_map.add_argument("--out", default=None)
    p_map.add_argument("--svg", default=None)
    p_map.add_argument("--export-qubo", default=None)
    p_map.set_defaults(func=cmd_map)

    p_sweep = sub.add_parser("sweep", help="run a benchmark sweep, one CSV row per run")
    p_sweep.add_argument("--families", default="")
    p_sweep.add_argument("--ns", default="")
    p_sweep.add_argument("--topology", required=True)
    p_sweep.add_argument("--lambdas", default="default")
    p_sweep.add_argument("--seeds", default="0")
    p_sweep.add_argument("--sweeps", type=int, default=1000)
    p_sweep.add_argument("--reads", type=int, default=50)
    p_sweep.add_argument("--window-budget", type=int, default=50_000)
    p_sweep.add_argument("--jobs", type=int, default=0)
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MappingError, TopologyError, CircuitError, benchgen.BenchError, OSError, ValueError) as exc:
        print(_error_json(str(exc)), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``dagchain <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import bench
from .decompose import dumps_chains, read_chains
from .exceptions import DagChainError
from .generators import GenSpec, generate
from .graph import Dag, dumps_dag, read_dag, sort_adjacency, topo_sort
from .index import build_index, read_index
from .oracles import tc_dfs, width_fulkerson
from .prune import prune_transitive

log = logging.getLogger("dagchain")


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_gen(args) -> int:
    params = {}
    for key, attr in (("p", "p"), ("m", "m"), ("k", "k"), ("b", "b"), ("paths", "paths")):
        value = getattr(args, attr)
        if value is not None:
            params[key] = value
    g = generate(GenSpec(args.model, args.n, args.avg_degree, args.seed, params))
    _emit(dumps_dag(g), args.output)
    return 0


def cmd_decompose(args) -> int:
    g = read_dag(args.input)
    t = topo_sort(g)
    d, stats = bench.run_pipeline(g, t, args.algo)
    _emit(dumps_chains(d, stats), args.output)
    return 0


def cmd_prune(args) -> int:
    g = read_dag(args.input)
    d = read_chains(args.chains, g.n)
    result = prune_transitive(g, d)
    _emit(dumps_dag(Dag(g.n, result.kept, validate=False)), args.output)
    if args.removed:
        lines = [f"{len(result.removed)}"] + [f"{u} {v} {result.reasons[(u, v)]}" for u, v in result.removed]
        Path(args.removed).write_text("\n".join(lines) + "\n")
    log.info("kept %d of %d edges", len(result.kept), g.m)
    return 0


def cmd_index(args) -> int:
    g = read_dag(args.input)
    t = topo_sort(g)
    if args.chains:
        d = read_chains(args.chains, g.n)
        d.validate(g, t)
    else:
        d, _ = bench.run_pipeline(g, t, args.algo)
    ix = build_index(g, t, d, sort_adjacency(g, t))
    ix.save(args.output)
    s = ix.stats
    log.info("k_c=%d e_tr=%d e_red=%d build_ms=%.2f", s.k_c, s.e_tr, s.e_red, s.build_ms)
    return 0


def cmd_query(args) -> int:
    ix = read_index(args.index)
    print("true" if ix.query(args.s, args.t) else "false")
    return 0


def cmd_width(args) -> int:
    g = read_dag(args.input)
    print(f"width {width_fulkerson(g, cap=args.cap).width}")
    return 0


def cmd_tc(args) -> int:
    g = read_dag(args.input)
    Path(args.output).write_bytes(tc_dfs(g, cap=args.cap, method=args.method).to_bytes())
    return 0


def cmd_bench(args) -> int:
    grid = bench.load_grid(args.grid)
    records = bench.sweep(grid, workers=args.workers)
    if args.output in (None, "-"):
        bench.write_csv(records, sys.stdout)
    else:
        bench.write_csv(records, args.output)
    failed = sum(r.error is not None for r in records)
    if failed:
        log.warning("%d row(s) failed", failed)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dagchain", description="DAG chain decomposition and reachability tools")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random DAG")
    p.add_argument("--model", choices=["er", "ba", "ws", "pb"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--avg-degree", type=float, default=5.0)
    p.add_argument("--p", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--b", type=float)
    p.add_argument("--paths", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("decompose", help="compute a path or chain decomposition")
    p.add_argument("--algo", choices=bench.ALGORITHMS, default="h3-conc")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("prune", help="remove detectable transitive edges")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-c", "--chains", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--removed")
    p.set_defaults(func=cmd_prune)

    p = sub.add_parser("index", help="build a binary reachability index")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-c", "--chains", help="chain file; computed with --algo when omitted")
    p.add_argument("--algo", choices=bench.ALGORITHMS, default="h3-conc")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="answer one reachability query")
    p.add_argument("--index", required=True)
    p.add_argument("s", type=int)
    p.add_argument("t", type=int)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("width", help="exact width via maximum matching")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--cap", type=int, default=5000)
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("tc", help="dump the transitive closure bit matrix")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--cap", type=int, default=20000)
    p.add_argument("--method", choices=["bitset", "dfs"], default="bitset")
    p.set_defaults(func=cmd_tc)

    p = sub.add_parser("bench", help="run an experiment grid and write CSV")
    p.add_argument("--grid", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (DagChainError, OSError) as exc:
        print(f"dagchain: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

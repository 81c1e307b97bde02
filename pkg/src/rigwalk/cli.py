"""``rigwalk`` command line: generate graphs, predict, simulate, verify,
compare against G(n, q) and emit the ratio grid and the exact-oracle table.

Exit codes: 0 success, 2 invalid input, 3 capacity exceeded, 4 a property
pass frequency fell below ``--min-frequency``.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from . import experiments, theory, verify, walk
from .genrand import RngStream, intersection_of, large_clique_warning, sample_bipartite
from .model import (
    CapacityError,
    GraphParams,
    ParameterError,
    derive,
    derive_params,
    dumps_bipartite,
    dumps_graph,
    loads_bipartite,
    loads_graph,
)

EXIT_OK, EXIT_INVALID, EXIT_CAPACITY, EXIT_FREQUENCY = 0, 2, 3, 4


def tool_version() -> str:
    try:
        return version("rigwalk")
    except PackageNotFoundError:
        return "0+unknown"


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _resolved(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output")}


def _envelope(args, body: dict) -> dict:
    cfg = _resolved(args)
    return {"schema": "report-v1", "version": tool_version(), "config": cfg,
            "config_hash": config_hash(cfg), **body}


def _emit(text: str, output) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj: dict, output) -> None:
    _emit(json.dumps(obj, indent=2, allow_nan=True) + "\n", output)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _params(args, seed=None) -> GraphParams:
    """(n, m, p) given directly, or (n, c, np) turned into (m, p)."""
    seed = args.seed if seed is None else seed
    if args.n is None:
        raise ParameterError("-n is required")
    if args.m is not None or args.p is not None:
        if args.m is None or args.p is None:
            raise ParameterError("give both -m and -p, or -c and --np")
        return GraphParams(args.n, args.m, args.p, seed)
    if args.c is None or args.np is None:
        raise ParameterError("give -c and --np (or -m and -p)")
    return derive_params(args.n, args.c, args.np, seed)[0]


# -- commands ----------------------------------------------------------------

def cmd_gen(args) -> int:
    params = _params(args)
    b = sample_bipartite(params, RngStream(params.seed, 0, "bipartite"))
    g = intersection_of(b)
    prefix = args.output or f"rig-n{params.n}-s{params.seed}"
    Path(f"{prefix}.bip").write_text(dumps_bipartite(b))
    Path(f"{prefix}.graph").write_text(dumps_graph(g))
    warn = large_clique_warning(b)
    if warn:
        print(f"warning: {warn}", file=sys.stderr)
    print(f"{prefix}.bip {prefix}.graph edges={g.edge_count}")
    return EXIT_OK


def cmd_predict(args) -> int:
    q = derive(_params(args))
    _emit_json(_envelope(args, theory.theory_report(q).to_dict()), args.output)
    return EXIT_OK


def _load_graph(path: str):
    text = Path(path).read_text()
    if text.startswith("rig-v1"):
        b = loads_bipartite(text)
        return b, intersection_of(b)
    return None, loads_graph(text)


def cmd_simulate(args) -> int:
    if args.graph:
        b, g = _load_graph(args.graph)
        q = derive(b.params) if b is not None else None
    else:
        params = _params(args)
        b = sample_bipartite(params, RngStream(params.seed, 0, "bipartite"))
        g = intersection_of(b)
        q = derive(params)
    body = {"kind": "simulation", "n": g.n, "edges": g.edge_count}
    if args.exact:
        if g.n > walk.EXACT_MAX_N:
            raise CapacityError(f"exact cover time needs n <= {walk.EXACT_MAX_N}, got {g.n}")
        per_start = [walk.exact_cover_time(g, v) for v in range(g.n)]
        body.update({"method": "exact", "per_start": per_start, "c_exact": max(per_start)})
        mean = max(per_start)
    else:
        starts = [int(s) for s in args.starts.split(",")] if args.starts else None
        est = walk.estimate_cover_time(g, starts=starts, trials_per_start=args.trials, master=args.seed)
        body.update({"method": "monte-carlo", **est.to_dict()})
        mean = est.c_empirical
    if args.eps is not None:
        body["mixing_time"] = walk.mixing_time(g, args.eps, master=args.seed)
    if args.t is not None:
        body["unvisit"] = _unvisit_table(g, args)
    if q is not None:
        pred = theory.cover_prediction(q)
        body.update({"params": q.as_dict(), "prediction": pred, "ratio": mean / pred})
    _emit_json(_envelope(args, body), args.output)
    return EXIT_OK


def _unvisit_table(g, args) -> dict:
    """Empirical avoidance of each start during steps T..t against (1+p_v)^-t."""
    if args.eps is not None:
        T, capped = max(2, walk.mixing_time(g, args.eps, master=args.seed)), False
    else:
        T, capped = walk.default_horizon(g, args.seed)
    starts = [int(s) for s in args.starts.split(",")] if args.starts else walk.default_starts(g, args.seed)
    emp = walk.unvisit_probability(g, starts, T, args.t, trials=args.trials, master=args.seed)
    rows = []
    for v, e in zip(starts, emp):
        rs = walk.return_stats(g, v, T, trials=max(2, args.trials), master=args.seed)
        rows.append({"vertex": v, "p_v": rs.p_v, "empirical": float(e),
                     "predicted": walk.unvisit_prediction(rs.p_v, args.t)})
    return {"T": T, "T_capped": capped, "t": args.t, "rows": rows}


def _properties(args):
    props = tuple(p.strip() for p in args.properties.split(",")) if args.properties else verify.ALL_PROPERTIES
    unknown = set(props) - set(verify.ALL_PROPERTIES)
    if unknown:
        raise ParameterError(f"unknown properties {sorted(unknown)}; choose from {verify.ALL_PROPERTIES}")
    return props


def cmd_verify(args) -> int:
    props = _properties(args)
    if args.seeds is None:
        params = _params(args)
        b = sample_bipartite(params, RngStream(params.seed, 0, "bipartite"))
        g = intersection_of(b)
        rep = verify.property_report(b, g, a_star=args.a_star, properties=props, master=params.seed)
        _emit_json(_envelope(args, rep.to_dict()), args.output)
        freq = {k: (int(bool(v.passed)), 1) for k, v in rep.verdicts.items()}
    else:
        params = _params(args)
        seeds = range(args.seed, args.seed + args.seeds)
        freq = verify.verify_frequencies(params, seeds, props, a_star=args.a_star)
        _emit(_csv([(k, *freq[k]) for k in props], ("property", "passes", "trials")), args.output)
    if args.min_frequency is not None:
        low = [k for k, (ok, tot) in freq.items() if tot and ok / tot < args.min_frequency]
        if low:
            print(f"pass frequency below {args.min_frequency}: {', '.join(low)}", file=sys.stderr)
            return EXIT_FREQUENCY
    return EXIT_OK


def cmd_compare(args) -> int:
    params = _params(args)
    seeds = range(args.seed, args.seed + (args.seeds or 1))
    rows = experiments.compare(params, seeds, trials=args.trials)
    _emit(_csv([(r.seed, repr(r.cover_rig), repr(r.cover_er), r.winner) for r in rows],
               ("seed", "cover_rig", "cover_er", "winner")), args.output)
    return EXIT_OK


def cmd_figure1(args) -> int:
    _emit(theory.figure1_csv(), args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    rows = experiments.oracle_rows(experiments.oracle_corpus(seed=args.seed))
    keys = ("graph", "n", "edges", "cover_from_0", "cover_max", "closed_form")
    _emit(_csv([[("" if r[k] is None else repr(r[k]) if isinstance(r[k], float) else r[k]) for k in keys]
                for r in rows], keys), args.output)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def _probability(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{v} is not in [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rigwalk", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {tool_version()}")
    sub = ap.add_subparsers(dest="command", required=True)

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("-n", type=int, help="number of vertices")
    graph.add_argument("-m", type=int, help="number of attributes")
    graph.add_argument("-p", type=float, help="attribute probability")
    graph.add_argument("-c", type=float, help="threshold multiplier (> 1)")
    graph.add_argument("--np", type=float, help="mean clique size n p")
    graph.add_argument("--seed", type=int, default=0)
    graph.add_argument("-o", "--output", help="output path (stdout if omitted)")

    def add(name, func, help_, **kw):
        p = sub.add_parser(name, parents=[graph], help=help_, **kw)
        p.set_defaults(func=func)
        return p

    add("gen", cmd_gen, "sample B and G and write <prefix>.bip / <prefix>.graph")
    add("predict", cmd_predict, "theory report as JSON")
    p = add("simulate", cmd_simulate, "Monte Carlo (or exact) cover time as JSON")
    p.add_argument("--graph", help="load a .bip or .graph file instead of sampling")
    p.add_argument("--trials", type=int, default=50, help="trials per start")
    p.add_argument("--starts", help="comma-separated start vertices")
    p.add_argument("--exact", action="store_true", help="dynamic-programming oracle (n <= 12)")
    p.add_argument("--eps", type=float, help="also report the mixing time at this accuracy")
    p.add_argument("--t", type=int, help="also report unvisit probabilities of the starts up to step t")
    p = add("verify", cmd_verify, "property verdicts (JSON) or pass frequencies over seeds (CSV)")
    p.add_argument("--seeds", type=int, help="number of consecutive seeds from --seed")
    p.add_argument("--a-star", type=float, default=verify.DEFAULT_A_STAR)
    p.add_argument("--properties", help="comma-separated subset of " + ",".join(verify.ALL_PROPERTIES))
    p.add_argument("--min-frequency", type=_probability, help="exit 4 if any pass frequency is below this")
    p = add("compare", cmd_compare, "paired cover times against G(n, p_I) as CSV")
    p.add_argument("--seeds", type=int, help="number of consecutive seeds from --seed")
    p.add_argument("--trials", type=int, default=50, help="trials per start")
    add("figure1", cmd_figure1, "ratio grid CSV for c in {1.1, 2, 10}")
    add("oracle", cmd_oracle, "exact cover times of the small-graph corpus as CSV")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, walk.WalkError, verify.IntegrityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except BrokenPipeError:
        return EXIT_OK
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Exit codes: 0 on success, 2 when some replicates or methods failed, 1 on a
configuration or input error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .baselines import seq_bic_zg
from .errors import ParameterError
from .gmm import EmOptions, em_fit, map_labels
from .harness import (METHOD_NAMES, ConfigError, default_output_dir, generate, load_config,
                      run_obsstats, run_pipeline)
from .metrics import ari
from .selection import SelectionOptions, sms, sms_reduced, sms_two_step
from .spectral import extended_ase

log = logging.getLogger("smsclust")

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2


def _load_adjacency(path, largest_component=False):
    el = io.read_edge_list(path)
    edges, n = el.edges, el.n
    if largest_component:
        keep, edges = io.largest_component(n, edges)
        n = keep.size
    return io.edges_to_adjacency(n, edges)


def _em_options(args) -> EmOptions:
    return EmOptions(tol=args.tol, max_iter=args.max_iter, restarts=args.restarts)


def _add_em_args(p):
    p.add_argument("--tol", type=float, default=EmOptions.tol, help="relative log-likelihood tolerance")
    p.add_argument("--max-iter", type=int, default=EmOptions.max_iter)
    p.add_argument("--restarts", type=int, default=EmOptions.restarts)


def _overrides(args) -> dict:
    out = {}
    for key in ("replicates", "seed", "workers", "D", "K_max"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    if getattr(args, "out", None):
        out["output_dir"] = args.out
    if getattr(args, "n", None):
        out["n"] = args.n
    if getattr(args, "methods", None):
        out["methods"] = args.methods
    return out


def cmd_generate(args) -> int:
    cfg = load_config(args.config, _overrides(args))
    paths = generate(cfg, args.out or cfg.output_dir, n=None, value=args.param, rep=args.replicate)
    for k, p in paths.items():
        print(f"{k}: {p}")
    return EXIT_OK


def cmd_embed(args) -> int:
    A = _load_adjacency(args.graph, args.largest_component)
    emb = extended_ase(A, args.D)
    io.write_embedding(args.out, emb.Z)
    print(f"wrote {emb.n} x {emb.D} embedding to {args.out}")
    return EXIT_OK


def cmd_fit(args) -> int:
    if args.embedding:
        Z = io.read_embedding(args.embedding)
    elif args.graph:
        if args.D is None:
            raise ParameterError("--D is required with --graph")
        Z = extended_ase(_load_adjacency(args.graph), args.D).Z
    else:
        raise ParameterError("give --embedding or --graph")
    fit = em_fit(Z, args.d, args.K, _em_options(args), args.seed)
    print(f"d={fit.d} K={fit.K} status={fit.status} loglik={io.fmt(fit.loglik)} "
          f"bic={io.fmt(fit.bic)} iterations={fit.n_iter} converged={fit.converged}")
    if not fit.ok:
        return EXIT_PARTIAL
    if args.out:
        io.write_params(args.out, fit.params,
                        extra={"loglik": fit.loglik, "bic": fit.bic, "n": fit.n})
    if args.labels:
        io.write_labels(args.labels, map_labels(Z, fit.params))
    return EXIT_OK


def cmd_select(args) -> int:
    A = _load_adjacency(args.graph, args.largest_component)
    opts = SelectionOptions(em=_em_options(args), workers=args.workers)
    if args.method.startswith("bic-zg"):
        res = seq_bic_zg(A, args.D, int(args.method.rsplit("-", 1)[1]), args.K_max, opts, args.seed)
    else:
        fn = {"sms": sms, "sms-reduced": sms_reduced, "two-step": sms_two_step}[args.method]
        res = fn(A, args.D, args.K_max, opts, args.seed)
    out = Path(args.out or default_output_dir())
    io.write_selection(out, res)
    print(f"method={res.method} d_hat={res.d_hat} K_hat={res.K_hat} -> {out}")
    if args.truth:
        for name, truth in io.read_labels(args.truth).items():
            print(f"ari[{name}]={io.fmt(ari(truth, res.labels))}")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    cfg = load_config(args.config, _overrides(args))
    res = run_pipeline(cfg)
    failed = sum(not r.ok for r in res.records)
    print(f"{len(res.records)} records, {failed} failed -> {res.output_dir}")
    return res.exit_code


def cmd_obsstats(args) -> int:
    cfg = load_config(args.config, _overrides(args))
    res = run_obsstats(cfg)
    if res.empty:
        print("no redundant dimensions (d == D); wrote empty outputs")
    else:
        print(f"{len(res.summary)} replicate summaries -> {cfg.output_dir}")
    return EXIT_OK


def cmd_ari(args) -> int:
    a = io.read_labels(args.a)
    b = io.read_labels(args.b)
    col_a = a[args.column_a] if args.column_a else next(iter(a.values()))
    col_b = b[args.column_b] if args.column_b else next(iter(b.values()))
    print(io.fmt(ari(col_a, col_b)))
    return EXIT_OK


def cmd_ingest(args) -> int:
    el = io.read_edge_list(args.edges)
    out = Path(args.out or default_output_dir())
    out.mkdir(parents=True, exist_ok=True)
    n, edges = el.n, el.edges
    keep = np.arange(n)
    n_comp = np.unique(io.components(n, edges)).size if n else 0
    if args.largest_component:
        keep, edges = io.largest_component(n, edges)
    elif n_comp > 1:
        log.warning("graph has %d connected components; pass --largest-component to keep the largest",
                    n_comp)
    io.write_edge_list(out / "graph.edges", io.edges_to_adjacency(keep.size, edges))
    io.write_csv(out / "remap.csv", ["old", "new"], [[int(o), i] for i, o in enumerate(keep)])
    if args.labels:
        cols = io.read_labels(args.labels)
        names = list(cols)
        for name in names:
            if cols[name].size != n:
                raise ParameterError(f"{args.labels}: {cols[name].size} labels for {n} vertices")
        io.write_csv(out / "truth.csv", ["vertex"] + names,
                     [[i] + [cols[c][o] for c in names] for i, o in enumerate(keep)])
    print(f"n={keep.size} edges={len(edges)} components={n_comp} "
          f"duplicates_or_loops_dropped={len(el.warnings)} -> {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="smsclust", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def experiment(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="YAML experiment file")
        p.add_argument("--out", help="output directory (overrides the config)")
        p.add_argument("--seed", type=int)
        p.add_argument("--replicates", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--n", type=int, nargs="+")
        p.add_argument("--D", type=int)
        p.set_defaults(func=func)
        return p

    p = experiment("generate", cmd_generate, "write one sampled graph and its truth labels")
    p.add_argument("--param", type=float, help="sweep value (default: the first)")
    p.add_argument("--replicate", type=int, default=0)

    p = experiment("pipeline", cmd_pipeline, "replicated Monte Carlo selection experiment")
    p.add_argument("--K-max", dest="K_max", type=int)
    p.add_argument("--methods", nargs="+", choices=METHOD_NAMES)

    experiment("obsstats", cmd_obsstats, "within-block statistics of redundant embedding columns")

    p = sub.add_parser("embed", help="extended spectral embedding of an edge list")
    p.add_argument("graph")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--out", required=True, help="CSV path")
    p.add_argument("--largest-component", action="store_true")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("fit", help="single constrained-mixture fit at (d, K)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--embedding", help="embedding CSV")
    src.add_argument("--graph", help="edge list (embedded with --D)")
    p.add_argument("--D", type=int)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="parameter JSON path")
    p.add_argument("--labels", help="MAP labels CSV path")
    _add_em_args(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("select", help="run one selection method on one graph")
    p.add_argument("graph")
    p.add_argument("--method", choices=METHOD_NAMES, default="sms")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--K-max", dest="K_max", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--truth", help="labels CSV to score against")
    p.add_argument("--out")
    p.add_argument("--largest-component", action="store_true")
    _add_em_args(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("ari", help="adjusted Rand index between two label CSVs")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--column-a")
    p.add_argument("--column-b")
    p.set_defaults(func=cmd_ari)

    p = sub.add_parser("ingest", help="validate an edge list, optionally keep the largest component")
    p.add_argument("edges")
    p.add_argument("--labels", help="CSV with vertex column plus one column per truth")
    p.add_argument("--largest-component", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ingest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ParameterError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

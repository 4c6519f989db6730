"""Katz and eigenvector centrality of very dense graphs, from the command line.

Exit codes: 0 on success, 1 on usage errors, 2 on numerical or
validation failures.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .exceptions import DenseKatzError
from .experiments import ExperimentConfig, bench, experiment_random, experiment_sufficiency, synthetic_graph
from .graph import (
    Graph,
    complement_unweighted,
    complement_weighted,
    rescale_to_unit_max,
    weight_scale,
)
from .io import (
    correlation_to_adjacency,
    read_correlation_csv,
    read_edge_list,
    read_scores,
    write_matrix_market,
    write_result,
)
from .katz import (
    complement_view_for,
    eigenvector_centrality_complement,
    eigenvector_centrality_resolvent,
    katz,
    katz_complement,
    mode_for,
)
from .linalg import require_converged, spectral_radius_view
from .ranking import TIE_RTOL, kendall_tau, same_ranking
from .threshold import check_sufficient, sparsify

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _policy(flag: str) -> str:
    return {"with": "with_loops", "without": "loopless", "with_loops": "with_loops",
            "loopless": "loopless"}[flag]


def _add_input(p, eta=True):
    p.add_argument("--input", required=True, help="graph file")
    p.add_argument("--format", choices=["mtx", "tsv", "csv"], help="input format (default: from suffix)")
    p.add_argument("--loops", choices=["with", "without"], default="without")
    p.add_argument("--weighted", action="store_true", help="treat the input as weighted")
    if eta:
        p.add_argument("--eta", type=float, help="correlation threshold for csv input")


def _add_t(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--t", type=float, help="Katz parameter")
    g.add_argument("--t-frac", type=float, help="Katz parameter as a fraction of 1/rho(A)")


def _add_output(p):
    p.add_argument("--output", help="result file")
    p.add_argument("--output-format", choices=["json", "csv"], default="json")


def _load(args) -> Graph:
    policy = _policy(args.loops)
    fmt = args.format
    if fmt is None:
        suffix = args.input.rsplit(".", 1)[-1].lower()
        fmt = {"mtx": "mtx", "csv": "csv"}.get(suffix, "tsv")
    if fmt == "csv":
        if args.eta is None:
            raise UsageError("--eta is required for a csv correlation matrix")
        C = read_correlation_csv(args.input)
        mode = "weighted" if args.weighted else "unweighted"
        return correlation_to_adjacency(C, args.eta, mode, policy)
    return read_edge_list(
        args.input, "matrix_market" if fmt == "mtx" else "tsv", policy,
        weighted=True if args.weighted else None if fmt == "mtx" else False,
    )


def _emit(result, args):
    if args.output:
        write_result(result, args.output, args.output_format)


def _print_scores(v):
    print("scores: " + " ".join(f"{x:.10g}" for x in v))


def cmd_katz(args) -> int:
    if args.t is None and args.t_frac is None:
        raise UsageError("give --t or --t-frac")
    G = _load(args)
    start = time.perf_counter()
    if args.complement_of:
        # the input is the complement B of the graph to rank
        policy = _policy(args.complement_of)
        if G.loop_policy != policy:
            G = Graph(G.n, policy, G.weighted, G.adj, G.directed)
        if G.weighted:
            raise UsageError("--complement-of needs an unweighted complement")
        mode = mode_for(policy, False)
        view = complement_view_for(G.adj, mode, None)
        rho = require_converged(spectral_radius_view(view))
        t = args.t if args.t is not None else args.t_frac / rho
        res = katz_complement(G.adj, t, mode, rho=rho)
        nnz = G.num_edges
    else:
        res = katz(G, t=args.t, route=args.route, t_frac=args.t_frac)
        nnz = G.num_edges if res.route == "direct" else G.max_edges - G.num_edges
    elapsed = time.perf_counter() - start
    print(f"route: {res.route}")
    print(f"nnz: {nnz}")
    print(f"time: {elapsed:.6f} s")
    _print_scores(res.v)
    print("ranking: " + " ".join(map(str, res.ranking)))
    _emit(res, args)
    return EXIT_OK


def _complement_of_input(G: Graph):
    if not G.weighted:
        return complement_unweighted(G), None
    if G.loop_policy == "with_loops":
        G, _ = rescale_to_unit_max(G)
    scale = weight_scale(G)
    comp, _ = complement_weighted(G, scale)
    return comp, scale


def cmd_eig(args) -> int:
    G = _load(args)
    if args.complement_of:
        policy = _policy(args.complement_of)
        B = Graph(G.n, policy, G.weighted, G.adj, G.directed).adj
        scale = None
    else:
        policy = G.loop_policy
        comp, scale = _complement_of_input(G)
        B = comp.adj
    if args.method == "power":
        res = eigenvector_centrality_complement(B, policy, tol=args.tol, max_iter=args.max_iter, scale=scale)
    else:
        res = eigenvector_centrality_resolvent(B, None, policy, scale=scale)
    print(f"route: {res.route}")
    _print_scores(res.v)
    print("ranking: " + " ".join(map(str, res.ranking)))
    _emit(res, args)
    return EXIT_OK


def cmd_complement(args) -> int:
    G = _load(args)
    comp, scale = _complement_of_input(G)
    if not args.output:
        raise UsageError("complement needs --output")
    write_matrix_market(comp, args.output)
    print(f"nnz(A): {G.num_edges}")
    print(f"nnz(B): {comp.num_edges}")
    if scale is not None:
        print(f"omega: {scale.omega:.17g}")
    return EXIT_OK


def cmd_threshold(args) -> int:
    if args.epsilon is None:
        raise UsageError("threshold needs --epsilon")
    G = _load(args)
    B = G if args.is_complement else _complement_of_input(G)[0]
    thr = sparsify(B.adj, args.epsilon)
    print(f"epsilon: {thr.epsilon:.6g}")
    print(f"dropped: {thr.dropped_count}")
    print(f"density_before: {thr.density_before:.6f}")
    print(f"density_after: {thr.density_after:.6f}")
    if args.output:
        write_matrix_market(Graph(G.n, B.loop_policy, True, thr.B0, B.directed), args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    if args.epsilon is None:
        raise UsageError("check needs --epsilon")
    if args.t is None and args.t_frac is None:
        raise UsageError("give --t or --t-frac")
    G = _load(args)
    if not G.weighted:
        raise UsageError("check needs a weighted graph (--weighted)")
    if G.loop_policy == "with_loops":
        G, _ = rescale_to_unit_max(G)
    scale = weight_scale(G)
    comp, _ = complement_weighted(G, scale)
    view = complement_view_for(comp.adj, mode_for(G.loop_policy, True), scale)
    rho = require_converged(spectral_radius_view(view))
    t = args.t if args.t is not None else args.t_frac / rho
    thr = sparsify(comp.adj, args.epsilon)
    rep = check_sufficient(G, comp.adj, thr.B0, args.epsilon, t, G.loop_policy)
    for k, v in rep.as_dict().items():
        print(f"{k}: {v}")
    _emit(rep, args)
    return EXIT_OK


def cmd_compare(args) -> int:
    a, b = read_scores(args.first), read_scores(args.second)
    tau = kendall_tau(a, b, TIE_RTOL)
    same = same_ranking(a, b)
    print(f"kendall_tau: {tau:.12g}")
    print(f"same_ranking: {same}")
    return EXIT_OK


def _dump(report, args):
    text = json.dumps(report, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_experiment_random(args) -> int:
    cfg = ExperimentConfig(
        n=args.n, trials=args.trials, seed=args.seed, t_frac=args.t_frac or 0.5,
        epsilon=0.1 if args.epsilon is None else args.epsilon,
    )
    report = experiment_random(cfg)
    if not args.full:
        report.pop("tau")
    _dump(report, args)
    return EXIT_OK


def cmd_experiment_sufficiency(args) -> int:
    cfg = ExperimentConfig(n=args.n, trials=1, seed=args.seed, t_frac=args.t_frac or 0.5)
    extra = [] if args.epsilon is None else [args.epsilon]
    report = experiment_sufficiency(cfg, tuple(args.powers), extra)
    _dump(report, args)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.input:
        G = _load(args)
    else:
        G = synthetic_graph(args.n, args.nnz_per_row, args.generator == "dense", args.seed)
    report = bench(G, args.t_frac or 0.9, args.repeats)
    _dump(report, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="densekatz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("katz", help="Katz centrality")
    _add_input(p)
    _add_t(p)
    p.add_argument("--route", choices=["direct", "complement", "auto"], default="auto")
    p.add_argument("--complement-of", choices=["with", "without", "with_loops", "loopless"],
                   help="the input is the unweighted complement of the graph to rank")
    _add_output(p)
    p.set_defaults(func=cmd_katz)

    p = sub.add_parser("eig", help="eigenvector centrality through the complement")
    _add_input(p)
    p.add_argument("--method", choices=["power", "resolvent"], default="power")
    p.add_argument("--complement-of", choices=["with", "without", "with_loops", "loopless"])
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10_000)
    _add_output(p)
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("complement", help="write the complement graph")
    _add_input(p)
    p.add_argument("--output")
    p.set_defaults(func=cmd_complement)

    p = sub.add_parser("threshold", help="sparsify a weighted complement")
    _add_input(p)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--is-complement", action="store_true", help="the input already is B")
    p.add_argument("--output")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("check", help="exact-recovery certificate for a threshold")
    _add_input(p)
    _add_t(p)
    p.add_argument("--epsilon", type=float)
    _add_output(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("compare", help="Kendall tau between two result files")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("experiment-random", help="random dense-matrix thresholding experiment")
    p.add_argument("--n", type=int, default=100, help="base size; matrices are 3n x 3n")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, help="threshold (default 0.1)")
    p.add_argument("--t-frac", type=float)
    p.add_argument("--full", action="store_true", help="include per-trial tau values")
    p.add_argument("--output")
    p.set_defaults(func=cmd_experiment_random)

    p = sub.add_parser("experiment-sufficiency", help="sparsity against recovery certificates")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--powers", type=int, nargs="+", default=[1, 2, 3, 4])
    p.add_argument("--epsilon", type=float, help="an extra fixed threshold")
    p.add_argument("--t-frac", type=float)
    p.add_argument("--output")
    p.set_defaults(func=cmd_experiment_sufficiency)

    p = sub.add_parser("bench", help="direct against complement solve times")
    p.add_argument("--input")
    p.add_argument("--format", choices=["mtx", "tsv", "csv"])
    p.add_argument("--loops", choices=["with", "without"], default="without")
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--eta", type=float)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--nnz-per-row", type=int, default=5)
    p.add_argument("--generator", choices=["dense", "sparse"], default="dense")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=100)
    p.add_argument("--t-frac", type=float)
    p.add_argument("--output")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"densekatz {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DenseKatzError, np.linalg.LinAlgError) as exc:
        print(f"densekatz {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"densekatz {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

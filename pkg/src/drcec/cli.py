"""Command-line front end.

Data goes to stdout (or ``--out``), logs go to stderr. Exit codes: 0 ok,
2 input error, 3 enumeration budget exceeded, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import dynamics as dyn
from .hypergraph import Clustering, HypergraphFormatError, LabeledHypergraph, parse_clustering, parse_hypergraph, write_clustering
from .lp_encode import algorithm1, solve_relaxation
from .metrics import (
    diversity_experience_scores,
    drcec_objective,
    edge_satisfaction,
    experience_homogeneity,
    f_within,
    f_within_normalized,
)
from .sensitivity import beta_hat
from .simplex import SimplexError
from .vote import DEFAULT_BUDGET, DEFAULT_NODE_CAP, EnumerationBudgetExceeded, exact_ilp, majority_vote, minority_vote

log = logging.getLogger("drcec")

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_NUMERIC = 0, 2, 3, 4
CLUSTER_METHODS = ("majority", "minority", "exact", "lp-round")

SWEEP_HEADER = (
    "beta", "lp_value", "rounded_total", "exact_total", "approx_ratio",
    "edge_satisfaction", "f_within", "experience_penalty",
)
DYNAMICS_HEADER = ("t", "exchanges", "edge_cost", "experience_penalty", "mean_uniformity_gap")
STATS_HEADER = (
    "color", "size", "diversity", "experience", "experience_homogeneity",
    "f_within", "f_within_normalized", "edge_satisfaction",
)


class InputError(Exception):
    pass


def fmt(value) -> str:
    """Locale-free CSV cell: 9 significant digits for floats, blank for missing."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".9g")


def write_csv(stream, header, rows) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])


def parse_grid(text: str) -> list[float]:
    try:
        a, b, step = (float(part) for part in text.split(":"))
    except ValueError:
        raise InputError(f"grid must look like a:b:step, got {text!r}") from None
    if a < 0 or b < a or step <= 0:
        raise InputError("grid needs 0 <= a <= b and step > 0")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + i * step, 12) for i in range(count)]


def load_hypergraph(path: str) -> LabeledHypergraph:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_hypergraph(data)
    except (HypergraphFormatError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def cluster_with(h: LabeledHypergraph, method: str, beta: float, args) -> Clustering:
    if method == "majority":
        return majority_vote(h)
    if method == "minority":
        return minority_vote(h)
    if method == "exact":
        return exact_ilp(h, beta, node_cap=args.node_cap, budget=args.budget)[0]
    return algorithm1(h, beta)[0]


class _Output:
    def __init__(self, path: str | None):
        self.path = path
        self.buffer = io.StringIO()

    def __enter__(self):
        return self.buffer

    def __exit__(self, exc_type, *_):
        if exc_type is not None:
            return False
        text = self.buffer.getvalue()
        if self.path:
            Path(self.path).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return False


def cmd_cluster(args) -> int:
    h = load_hypergraph(args.file)
    if h.k < 1:
        raise InputError("hypergraph has no colors to cluster into")
    c = cluster_with(h, args.method, args.beta, args)
    br = drcec_objective(h, c, args.beta)
    log.info(
        "method=%s beta=%s edge_cost=%d experience_penalty=%d total=%s",
        args.method, fmt(args.beta), br.edge_cost, br.experience_penalty, fmt(br.total),
    )
    with _Output(args.out) as out:
        out.write(write_clustering(c, h.colors))
    return EXIT_OK


def cmd_sweep(args) -> int:
    h = load_hypergraph(args.file)
    if h.k < 1:
        raise InputError("hypergraph has no colors to cluster into")
    rows = []
    exact_ok = not args.no_exact
    for beta in parse_grid(args.betas):
        clustering, br, relaxed = algorithm1(h, beta)
        exact_total = None
        if exact_ok:
            try:
                exact_total = exact_ilp(h, beta, node_cap=args.node_cap, budget=args.budget)[1].total
            except EnumerationBudgetExceeded as exc:
                log.info("exact column skipped: %s", exc)
                exact_ok = False
        ratio = None
        if exact_total is not None:
            if exact_total > 0:
                ratio = br.total / exact_total
            elif br.total == 0:
                ratio = 1.0
        rows.append((
            beta, relaxed.objective_with_offset, br.total, exact_total, ratio,
            edge_satisfaction(h, clustering) if h.edges else None,
            f_within(h, clustering), br.experience_penalty,
        ))
    with _Output(args.out) as out:
        write_csv(out, SWEEP_HEADER, rows)
    return EXIT_OK


def cmd_beta_hat(args) -> int:
    h = load_hypergraph(args.file)
    if h.k < 1:
        raise InputError("hypergraph has no colors")
    if args.beta0 is not None and args.beta0 <= h.d_max:
        raise InputError(f"--beta0 must exceed d_max = {h.d_max}")
    res = beta_hat(h, args.beta0)
    fields = [
        ("beta0", res.beta0), ("theta_plus", res.theta_plus), ("beta_hat", res.beta_hat),
        ("clamped", res.clamped), ("d_max", h.d_max), ("unique_minority", res.unique_minority),
        ("epsilon", res.epsilon), ("residual_above", res.residual_above),
        ("gap_below", res.gap_below), ("aux_dual_violation", res.aux_dual_violation),
        ("aux_equality_residual", res.aux_equality_residual), ("verified", res.verified),
    ]
    with _Output(args.out) as out:
        for key, value in fields:
            out.write(f"{key}={fmt(value)}\n")
    if args.csv:
        buf = io.StringIO()
        write_csv(buf, [k for k, _ in fields], [[v for _, v in fields]])
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
    if not res.verified:
        log.error("re-solve verification failed around beta_hat=%s", fmt(res.beta_hat))
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_dynamics(args) -> int:
    h = load_hypergraph(args.file)
    if h.k < 1:
        raise InputError("hypergraph has no colors")
    try:
        cfg = dyn.DynamicsConfig(
            beta=args.beta, window=args.window, steps=args.steps,
            warm_start=args.warm_start, method=args.method, seed=args.seed,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    trace = dyn.run(h, cfg)
    rows = []
    for t in range(trace.steps):
        br = trace.breakdowns[t]
        rows.append((
            t + 1, int(trace.exchanged[t].sum()), br.edge_cost, br.experience_penalty,
            float(dyn.uniformity_gap(trace, t + 1).mean()) if h.num_nodes else 0.0,
        ))
    with _Output(args.out) as out:
        write_csv(out, DYNAMICS_HEADER, rows)
    if args.assignments_out:
        buf = io.StringIO()
        header = ["t"] + [str(v) for v in range(h.num_nodes)]
        matrix = [[t + 1] + [h.colors[c] for c in cl.assignment] for t, cl in enumerate(trace.clusterings)]
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(matrix)
        Path(args.assignments_out).write_text(buf.getvalue(), encoding="utf-8")
    if trace.steps >= 2:
        log.info("mean_exchanges=%s", fmt(dyn.mean_exchanges(trace)))
    return EXIT_OK


def cmd_stats(args) -> int:
    h = load_hypergraph(args.file)
    if h.k < 1:
        raise InputError("hypergraph has no colors")
    if args.assignment:
        try:
            text = Path(args.assignment).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {args.assignment}: {exc.strerror}") from None
        try:
            c = parse_clustering(text, h)
        except HypergraphFormatError as exc:
            raise InputError(f"{args.assignment}: {exc}") from None
    else:
        c = cluster_with(h, args.method, args.beta, args)
    scores = diversity_experience_scores(h, c)
    fw, fwn = f_within(h, c), f_within_normalized(h, c)
    sat = edge_satisfaction(h, c) if h.edges else None
    rows = [
        (h.colors[i], len(c.members(i)), d, e, experience_homogeneity(h, c, i), fw, fwn, sat)
        for i, (d, e) in enumerate(scores)
    ]
    with _Output(args.out) as out:
        write_csv(out, STATS_HEADER, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drcec", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_beta=True):
        p.add_argument("file", help="hypergraph text file")
        p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
        p.add_argument("--out", help="write data here instead of stdout")
        p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max assignments to enumerate")
        if with_beta:
            p.add_argument("--beta", type=float, default=0.0)

    p = sub.add_parser("cluster", help="cluster one hypergraph")
    common(p)
    p.add_argument("--method", choices=CLUSTER_METHODS, default="lp-round")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("sweep", help="LP, rounded and exact values over a grid of weights")
    common(p, with_beta=False)
    p.add_argument("--betas", required=True, help="grid a:b:step")
    p.add_argument("--no-exact", action="store_true", help="skip the enumeration column")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("beta-hat", help="smallest weight keeping the minority LP solution optimal")
    common(p, with_beta=False)
    p.add_argument("--beta0", type=float, default=None, help="starting weight (default d_max + 1)")
    p.add_argument("--csv", help="also write the result as a one-row CSV")
    p.set_defaults(func=cmd_beta_hat)

    p = sub.add_parser("dynamics", help="iterated group formation")
    common(p)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--warm-start", type=int, default=None, help="steps before recording (default: window)")
    p.add_argument("--method", choices=dyn.METHODS, default="lp-round")
    p.add_argument("--assignments-out", help="per-step node color matrix CSV")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("stats", help="diversity/experience metrics of a clustering")
    common(p)
    p.add_argument("--assignment", help="clustering file of '<node> <color>' lines")
    p.add_argument("--method", choices=CLUSTER_METHODS, default="lp-round",
                   help="cluster with this method when no --assignment is given")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "beta", 0.0) is not None and getattr(args, "beta", 0.0) < 0:
        parser.error("--beta must be non-negative")
    try:
        return args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except EnumerationBudgetExceeded as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except SimplexError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Every subcommand writes CSV (to ``--out`` or stdout) followed by
``#``-prefixed JSON footer lines. The first footer line is the run
manifest, which records every argument needed to reproduce the file.
Exit status is 0 on success, 1 on a usage error and 2 on a data error.
Set ``SAPHYRA_LOG`` (e.g. ``INFO`` or ``DEBUG``) for progress logging on
stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import math
import os
import sys
import time
from typing import IO, Iterator, Sequence

import numpy as np

from .decomposition import decompose, out_reach, weights
from .estimator import EstimatorConfig
from .evaluation import relative_error_report
from .exact import exact_two_hop
from .graph import Graph, GraphFormatError, load_edge_list
from .oracles import brandes_bc
from .ranker import prepare, rank_subset
from .sampler import NothingToSample, PathSampler, RejectionCapExceeded, build_sampler

logger = logging.getLogger("bcrank")

SUBCOMMANDS = ("rank", "exact-bc", "exact", "decompose", "eval", "sample-debug", "bench")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser, graph=True, subset=False, sampling=False):
    if graph:
        p.add_argument("--graph", required=True, help="edge list, one 'u v' pair per line")
    if subset:
        p.add_argument("--subset", required=True, help="target node labels, one per line")
    if sampling:
        p.add_argument("--epsilon", type=float, default=0.05)
        p.add_argument("--delta", type=float, default=0.01)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        p.add_argument("--no-partition", action="store_true", help="direct estimation baseline")
        p.add_argument("--probes", type=int, default=3, help="BFS probes for diameter bounds")
        p.add_argument("--rejection-cap", type=int, default=10**6)
        p.add_argument("--max-samples", type=int, default=None, help="override the sample budget")
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bcrank", description="Subset betweenness estimation and ranking.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    _add_common(sub.add_parser("rank", help="estimate and rank betweenness of a subset"), subset=True, sampling=True)
    p = sub.add_parser("exact-bc", help="exact betweenness of every node")
    _add_common(p)
    p.add_argument("--subset", default=None, help="restrict the output to these labels")
    _add_common(sub.add_parser("exact", help="exact 2-hop subspace risks"), subset=True)
    _add_common(sub.add_parser("decompose", help="bi-components and out-reach"))
    p = sub.add_parser("eval", help="compare an estimate CSV with a truth CSV")
    p.add_argument("--est", required=True)
    p.add_argument("--truth", required=True)
    _add_common(p, graph=False)
    p = sub.add_parser("sample-debug", help="dump sampled paths")
    _add_common(p, subset=True, sampling=True)
    p.add_argument("--samples", type=int, default=100)
    p = sub.add_parser("bench", help="partitioned estimator against the direct baseline")
    _add_common(p, subset=True, sampling=True)
    p.add_argument("--truth", default=None, help="truth CSV (computed exactly when omitted)")
    return parser


# ---------------------------------------------------------------- input


def _read_graph(path: str) -> Graph:
    try:
        with open(path) as fh:
            return load_edge_list(fh)
    except OSError as exc:
        raise DataError(f"cannot read graph: {exc}") from None
    except GraphFormatError as exc:
        raise DataError(f"{path}: {exc}") from None


def read_subset(path: str, g: Graph) -> list[int]:
    """Dense ids for the labels listed in ``path``.

    Unknown labels are an error. Labels that were in the edge list but
    fall outside the kept component are dropped with a warning.
    """
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read subset: {exc}") from None
    dropped = set(g.report.dropped_labels)
    ids, outside = [], []
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            label = int(s)
        except ValueError:
            raise DataError(f"{path}: line {lineno}: expected one integer label, got {s!r}") from None
        if g.has_label(label):
            ids.append(g.node_of(label))
        elif label in dropped:
            outside.append(label)
        else:
            raise DataError(f"{path}: line {lineno}: label {label} is not in the graph")
    if outside:
        logger.warning("%d subset labels lie outside the largest component and are excluded", len(outside))
    ids = sorted(set(ids))
    if not ids:
        raise DataError(f"{path}: subset is empty")
    return ids


def read_values(path: str) -> dict[int, float]:
    """``node_id -> value`` from the first two columns of a CSV, skipping footers."""
    try:
        with open(path) as fh:
            rows = [line for line in fh.read().splitlines() if line.strip() and not line.startswith("#")]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise DataError(f"{path}: no rows")
    out = {}
    for lineno, row in enumerate(csv.reader(rows[1:]), 2):
        try:
            out[int(row[0])] = float(row[1])
        except (ValueError, IndexError):
            raise DataError(f"{path}: row {lineno}: expected node_id,value") from None
    return out


# ---------------------------------------------------------------- output


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return "inf" if math.isinf(x) and x > 0 else repr(float(x))
    return str(x)


@contextlib.contextmanager
def _output(path: str | None) -> Iterator[IO[str]]:
    if path is None:
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from None
    with fh:
        yield fh


def _write_table(fh: IO[str], header: Sequence[str], rows, footers: Sequence[dict]):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    for f in footers:
        fh.write("# " + json.dumps(f, sort_keys=True) + "\n")


def manifest(args: argparse.Namespace) -> dict:
    keys = ("graph", "subset", "epsilon", "delta", "seed", "workers", "no_partition", "probes",
            "rejection_cap", "max_samples", "samples", "truth", "est", "out")
    return {"manifest": {"command": args.command, **{k: getattr(args, k) for k in keys if hasattr(args, k)}}}


def _config(args) -> EstimatorConfig:
    try:
        return EstimatorConfig(
            epsilon=args.epsilon, delta=args.delta, seed=args.seed, max_workers=args.workers,
            rejection_cap=args.rejection_cap, max_samples=args.max_samples,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------- commands


def cmd_rank(args) -> None:
    cfg = _config(args)
    g = _read_graph(args.graph)
    A = read_subset(args.subset, g)
    est = rank_subset(g, A, cfg, probes=args.probes, partition=not args.no_partition)
    logger.info("rank finished in %.0f ms", est.elapsed_s * 1e3)
    rows = zip(est.labels.tolist(), est.tilde_bc, est.bc_a, est.hat_share, est.ranks.tolist())
    run = {"run": {
        "epsilon": est.epsilon, "delta": est.delta, "samples": est.samples_used, "vc_bound": est.vc_bound,
        "seed": cfg.seed, "gamma": est.gamma, "eta": est.eta, "halted_by": est.meta["halted_by"],
    }}
    with _output(args.out) as fh:
        _write_table(fh, ["node_id", "tilde_bc", "bc_a", "hat_share", "rank"], rows, [manifest(args), run])


def cmd_exact_bc(args) -> None:
    g = _read_graph(args.graph)
    bc = brandes_bc(g)
    ids = read_subset(args.subset, g) if args.subset else range(g.n)
    rows = ((int(g.labels[v]), bc[v]) for v in ids)
    with _output(args.out) as fh:
        _write_table(fh, ["node_id", "bc"], rows, [manifest(args), {"run": {"n": g.n, "m": g.m}}])


def cmd_exact(args) -> None:
    g = _read_graph(args.graph)
    A = read_subset(args.subset, g)
    d = decompose(g)
    r = out_reach(d)
    ex = exact_two_hop(g, d, r, weights(d, r, A), A)
    rows = zip(g.labels[ex.nodes].tolist(), ex.hat_ell)
    footer = {"run": {"hat_lambda": ex.hat_lambda, "K": ex.work_bound}}
    with _output(args.out) as fh:
        _write_table(fh, ["node_id", "hat_ell"], rows, [manifest(args), footer])


def cmd_decompose(args) -> None:
    g = _read_graph(args.graph)
    d = decompose(g)
    r = out_reach(d)
    w = weights(d, r, range(g.n))
    rows = (
        (i, int(g.labels[v]), int(rv))
        for i, nodes in enumerate(d.components)
        for v, rv in zip(nodes.tolist(), r.values[i].tolist())
    )
    footer = {"run": {"components": d.ell, "cutpoints": len(d.cutpoints), "gamma": w.gamma}}
    with _output(args.out) as fh:
        _write_table(fh, ["component_id", "node_id", "r_value"], rows, [manifest(args), footer])


def cmd_eval(args) -> None:
    est = read_values(args.est)
    truth = read_values(args.truth)
    missing = sorted(set(est) - set(truth))
    if missing:
        raise DataError(f"{len(missing)} estimated nodes have no truth value (first: {missing[0]})")
    ids = sorted(est)
    if len(ids) < 2:
        raise DataError("need at least two nodes to evaluate a ranking")
    e = np.array([est[v] for v in ids])
    t = np.array([truth[v] for v in ids])
    rep = relative_error_report(e, t, ids)
    print(rep.summary(), file=sys.stderr)
    rows = zip(ids, e, t, rep.relative_error)
    footer = {"report": {
        "k": rep.k, "spearman": rep.spearman, "true_zeros": rep.true_zeros, "false_zeros": rep.false_zeros,
        "nonzero_truth": rep.nonzero_truth, "nonzero_estimated": rep.nonzero_estimated,
        "max_abs_error": rep.max_abs_error,
    }}
    with _output(args.out) as fh:
        _write_table(fh, ["node_id", "estimate", "truth", "relative_error_pct"], rows, [manifest(args), footer])


def cmd_sample_debug(args) -> None:
    if args.samples < 0:
        raise UsageError("--samples must be nonnegative")
    g = _read_graph(args.graph)
    A = read_subset(args.subset, g)
    p = prepare(g)
    part = not args.no_partition
    w = weights(p.decomposition, p.out_reach, A if part else range(g.n))
    tables = build_sampler(p.decomposition, p.out_reach, w, A, seed=args.seed)
    sampler = PathSampler(p.decomposition, tables, A, reject_exact=part, rejection_cap=args.rejection_cap)
    rng = np.random.default_rng(args.seed)
    lab = g.labels
    rows = []
    for _ in range(args.samples):
        path = sampler.draw(rng)
        rows.append((path.component, int(lab[path.nodes[0]]), int(lab[path.nodes[-1]]),
                     " ".join(str(int(lab[v])) for v in path.nodes)))
    with _output(args.out) as fh:
        _write_table(fh, ["component", "s", "t", "path"], rows,
                     [manifest(args), {"run": {"rejections": sampler.rejections}}])


def cmd_bench(args) -> None:
    cfg = _config(args)
    g = _read_graph(args.graph)
    A = read_subset(args.subset, g)
    p = prepare(g)
    if args.truth:
        truth = read_values(args.truth)
        missing = [int(g.labels[v]) for v in A if int(g.labels[v]) not in truth]
        if missing:
            raise DataError(f"{len(missing)} subset nodes have no truth value")
        t = np.array([truth[int(g.labels[v])] for v in A])
    else:
        t0 = time.perf_counter()
        t = brandes_bc(g)[A]
        logger.info("exact betweenness in %.1fs", time.perf_counter() - t0)
    rows = []
    for mode, part in (("partitioned", True), ("direct", False)):
        est = rank_subset(p, A, cfg, probes=args.probes, partition=part)
        rep = relative_error_report(est.tilde_bc, t, g.labels[A])
        rows.append((mode, est.samples_used, est.vc_bound, est.elapsed_s, rep.spearman,
                     rep.max_abs_error, rep.false_zeros))
    with _output(args.out) as fh:
        _write_table(
            fh, ["mode", "samples", "vc_bound", "wall_s", "spearman", "max_abs_error", "false_zeros"],
            rows, [manifest(args)],
        )


COMMANDS = {
    "rank": cmd_rank,
    "exact-bc": cmd_exact_bc,
    "exact": cmd_exact,
    "decompose": cmd_decompose,
    "eval": cmd_eval,
    "sample-debug": cmd_sample_debug,
    "bench": cmd_bench,
}


def _configure_logging() -> None:
    raw = os.environ.get("SAPHYRA_LOG", "WARNING").strip().upper()
    level = int(raw) if raw.isdigit() else logging.getLevelName(raw)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


def run(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"bcrank: usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, NothingToSample, RejectionCapExceeded) as exc:
        print(f"bcrank: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return 0


def main() -> None:
    sys.exit(run())

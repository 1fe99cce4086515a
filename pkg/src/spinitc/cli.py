"""Command-line interface.

    spinitc chain --kind heisenberg --n 7 --itc --geometry --out report.json
    spinitc network --spec net.json --cluster --csv run1

Node indices on the command line and in every output file are 1-based.
Exit codes: 0 success, 2 invalid arguments or spec, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import os
import sys

import numpy as np

from . import __version__
from .cluster import hierarchical_clusters
from .control import (OptimizerConfig, control_hamiltonian, effective_hamiltonian, effective_itc,
                      optimize_switching, piecewise_evolution, roundtrip_error)
from .geometry import (NonEuclideanError, embedding_dimension, equivalence_classes, gram_matrix,
                       gromov_delta, inertia, quotient_metric, triangle_audit)
from .io import dumps, load_network_spec, write_csv, write_matrix_csv
from .itc import (BudgetExceededError, attainment_time_estimate, default_dt, find_attainment_time,
                  itc_from_spectrum, max_transfer_probability, phase_tolerance,
                  rational_independence_check)
from .model import InvalidNetworkError, build_chain, single_excitation_hamiltonian
from .spectral import NumericalError, eigendecompose, probability_time_series

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


class UsageError(ValueError):
    pass


def _matrix(M):
    M = np.asarray(M)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]) if M.ndim > 1 else 0, "data": M}


def _one_based(groups):
    return [[int(k) + 1 for k in g] for g in groups]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinitc", description="Information transfer capacity of spin networks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    chain = sub.add_parser("chain", help="uniform nearest-neighbour chain")
    chain.add_argument("--kind", required=True, choices=["xx", "heisenberg"])
    chain.add_argument("--n", required=True, type=int)
    chain.add_argument("--j", type=float, default=1.0)

    net = sub.add_parser("network", help="network from a JSON spec file")
    net.add_argument("--spec", required=True)

    for sp in (chain, net):
        a = sp.add_argument_group("analyses")
        a.add_argument("--itc", action="store_true", help="pairwise transfer maxima and distances")
        a.add_argument("--geometry", action="store_true")
        a.add_argument("--alpha", type=float, default=2.0, help="inertia exponent")
        a.add_argument("--anchor", type=int, default=None, help="Gram anchor class (1-based, default last)")
        a.add_argument("--gromov-budget", type=int, default=2_000_000)
        a.add_argument("--cluster", action="store_true")
        a.add_argument("--control", action="store_true")
        a.add_argument("--attain", action="store_true")
        a.add_argument("--series", action="store_true")
        a.add_argument("--from", dest="src", type=int)
        a.add_argument("--to", dest="dst", type=int)
        a.add_argument("--site", type=int, default=1)
        a.add_argument("--strength", type=float, default=2.0)
        a.add_argument("--segments", type=int, default=8)
        a.add_argument("--horizon", type=float, default=30.0)
        a.add_argument("--restarts", type=int, default=20)
        a.add_argument("--seed", type=int, default=0)
        a.add_argument("--eps", type=float)
        a.add_argument("--tmax", type=float)
        a.add_argument("--dt", type=float)
        t = sp.add_argument_group("tolerances")
        t.add_argument("--zero-tol", type=float, default=1e-6)
        t.add_argument("--rank-tol", type=float, default=1e-8)
        t.add_argument("--max-coeff", type=int, default=5)
        t.add_argument("--tol-relation", type=float, default=1e-9)
        o = sp.add_argument_group("output")
        o.add_argument("--out", help="write the JSON report here (default: stdout)")
        o.add_argument("--csv", metavar="PREFIX", help="write PREFIX_*.csv tables")
    return p


def _pair(args, n, what):
    if args.src is None or args.dst is None:
        raise UsageError(f"--{what} needs --from and --to")
    for k in (args.src, args.dst):
        if not 1 <= k <= n:
            raise UsageError(f"node {k} out of range 1..{n}")
    return args.src - 1, args.dst - 1


def run_analysis(args) -> tuple[dict, dict]:
    """Build the report bundle and the CSV tables for parsed arguments."""
    if args.command == "chain":
        net = build_chain(args.n, args.kind, args.j)
    else:
        net = load_network_spec(args.spec)
    n = net.n
    H = single_excitation_hamiltonian(net)
    spec = eigendecompose(H)
    itc = itc_from_spectrum(spec)
    if not any((args.itc, args.geometry, args.cluster, args.control, args.attain, args.series)):
        args.itc = True

    report = {
        "metadata": {
            "version": __version__,
            "command": args.command,
            "seed": args.seed,
            "tolerances": {
                "zero_tol": args.zero_tol,
                "rank_tol": args.rank_tol,
                "degenerate_tol": spec.tol,
                "tol_relation": args.tol_relation,
                "max_coeff": args.max_coeff,
                "triangle_tol": 1e-9,
            },
            "node_indexing": "1-based",
        },
        "network": {"n": n, "kind": net.kind.value, "couplings": _matrix(net.couplings)},
    }
    tables = {"dist": (None, itc.dist)}

    if args.itc:
        report["itc"] = {"n": n, "p_max": _matrix(itc.p_max), "dist": _matrix(itc.dist)}

    if args.geometry:
        classes = equivalence_classes(itc.dist, args.zero_tol)
        q = quotient_metric(itc.dist, classes, args.zero_tol)
        audit = triangle_audit(q.dist)
        geo = {
            "classes": _one_based(classes),
            "quotient_dist": _matrix(q.dist),
            "max_block_spread": float(q.spread.max(initial=0.0)),
            "well_defined": q.well_defined,
            "triangle_audit": {
                "min_excess": audit.min_excess,
                "violation_count": len(audit.violations),
                "violations": [[i + 1, j + 1, k + 1, v] for i, j, k, v in audit.violations[:100]],
            },
        }
        if len(classes) >= 2:
            anchor = -1 if args.anchor is None else args.anchor - 1
            G = gram_matrix(q.dist, anchor)
            geo["gram_eigenvalues"] = np.linalg.eigvalsh(G)[::-1]
            try:
                emb = embedding_dimension(G, args.rank_tol)
                geo["embedding"] = {"euclidean": True, "dim": emb.dim, "coordinates": _matrix(emb.coordinates)}
            except NonEuclideanError as exc:
                geo["embedding"] = {"euclidean": False, "min_eigenvalue": exc.min_eigenvalue}
        gro = gromov_delta(q.dist, args.gromov_budget, seed=args.seed)
        geo["gromov"] = {
            "delta_max": gro.delta_max,
            "scaled_delta_max": gro.scaled_delta_max,
            "quadruple_count": gro.quadruple_count,
            "sampled": gro.sampled,
        }
        inr = inertia(itc.dist, args.alpha)
        geo["inertia"] = {
            "alpha": inr.alpha,
            "values": inr.inertia,
            "gravity_centers": [k + 1 for k in inr.gravity_centers],
            "anti_gravity_centers": [k + 1 for k in inr.anti_gravity_centers],
        }
        report["geometry"] = geo
        recs = gro.records
        tables["gromov"] = (["w", "x", "y", "z", "L", "M", "S", "delta", "scaled_delta"],
                            [[int(r[0]) + 1, int(r[1]) + 1, int(r[2]) + 1, int(r[3]) + 1, *r[4:]] for r in recs])
        tables["inertia"] = (["node", "inertia"], [[k + 1, v] for k, v in enumerate(inr.inertia)])

    if args.cluster:
        tree = hierarchical_clusters(itc.dist)
        report["clusters"] = tree.to_dict(one_based=True)
        tables["dendrogram"] = tree

    if args.series:
        i, j = _pair(args, n, "series")
        if args.tmax is None or args.dt is None:
            raise UsageError("--series needs --tmax and --dt")
        t, p = probability_time_series(spec, i, j, args.tmax, args.dt)
        report["series"] = {"from": i + 1, "to": j + 1, "p_max": itc.p_max[i, j],
                            "max": float(p.max()), "t_at_max": float(t[np.argmax(p)]),
                            "count": len(t), "t": t, "p": p}
        tables["series"] = (["t", "p"], np.column_stack([t, p]))

    if args.attain:
        i, j = _pair(args, n, "attain")
        if args.eps is None:
            raise UsageError("--attain needs --eps")
        distinct = [float(spec.eigenvalues[g].mean()) for g in spec.groups]
        att = {"from": i + 1, "to": j + 1, "epsilon": args.eps, "eigenvalues": distinct}
        for key, unit in (("relations", False), ("relations_with_unit", True)):
            try:
                rel = rational_independence_check(distinct, unit, args.max_coeff, args.tol_relation)
                att[key + "_count"] = len(rel)
                att[key] = [{"coefficients": list(r.coefficients), "residual": r.residual} for r in rel[:50]]
            except BudgetExceededError as exc:
                att[key] = None
                att[key + "_error"] = str(exc)
        tmax = args.tmax if args.tmax is not None else 1e4
        dt = args.dt if args.dt is not None else default_dt(spec)
        hit = find_attainment_time(spec, i, j, args.eps, tmax, dt)
        att.update({"p_max": max_transfer_probability(spec, i, j), "tmax": tmax, "dt": dt})
        att["found"] = hit is not None
        if hit is not None:
            att.update({"t": hit.t, "p": hit.p, "phase_residuals": hit.phase_residuals,
                        "aligned_phase_residuals": hit.aligned_residuals})
        att["phase_tolerance"] = phase_tolerance(args.eps, n) if args.eps <= 2 * n else None
        att["time_estimate_steps"] = attainment_time_estimate(args.eps, n)
        report["attainability"] = att

    if args.control:
        i, j = _pair(args, n, "control")
        if not 1 <= args.site <= n:
            raise UsageError(f"--site {args.site} out of range 1..{n}")
        H1 = control_hamiltonian(n, args.site - 1, args.strength)
        cfg = OptimizerConfig(restarts=args.restarts, seed=args.seed)
        seq = optimize_switching(H, H1, i, j, args.segments, args.horizon, cfg,
                                 site=args.site - 1, strength=args.strength)
        seq_d = seq.to_dict()
        seq_d["site"] = args.site
        ctl = {"from": i + 1, "to": j + 1, "sequence": seq_d, "free_p_max": itc.p_max[i, j],
               "segments": args.segments, "horizon": args.horizon, "restarts": args.restarts}
        if seq.final_time > 0:
            U = piecewise_evolution(H, H1, seq)
            he = effective_hamiltonian(U, seq.final_time)
            eff = effective_itc(he)
            ctl.update({"p_eff": _matrix(eff.p_max), "roundtrip_error": roundtrip_error(he, U),
                        "near_branch_cut": he.near_branch_cut})
        report["control"] = ctl

    return report, tables


def write_tables(prefix: str, tables: dict):
    for name, tab in tables.items():
        path = f"{prefix}_{name}.csv"
        if name == "dendrogram":
            with open(path, "w", newline="") as fh:
                fh.write(tab.to_csv(one_based=True))
        elif tab[0] is None:
            write_matrix_csv(path, tab[1])
        else:
            write_csv(path, tab[0], tab[1])


@contextlib.contextmanager
def _thread_cap():
    cap = os.environ.get("ITC_THREADS")
    if not cap:
        yield
        return
    from threadpoolctl import threadpool_limits
    with threadpool_limits(limits=max(1, int(cap))):
        yield


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with _thread_cap():
            report, tables = run_analysis(args)
    except (UsageError, InvalidNetworkError, FileNotFoundError) as exc:
        print(f"spinitc: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"spinitc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        write_tables(args.csv, tables)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

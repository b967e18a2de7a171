"""Command-line front end.

Structured JSON goes to stdout (deterministic for fixed flags and seed, apart
from wall_time fields); short human-readable summaries go to stderr.  Exit
codes:

  0  success
  2  flag parsing / validation (argparse)
  3  I/O error (missing or unreadable file)
  4  graph file parse error
  5  domain precondition violated
  6  verification failed (witness found, bound violated, equality mismatch)
  7  enumeration budget exceeded

Pipeline stage failures use distinct codes: 10 spectral certification,
11 gadget verification, 12 product construction, 13 unique-neighbour audit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from expanderlab import bigraph, gadget, nbwalk, params, product, spectral

EXIT_OK = 0
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_PRECONDITION = 5
EXIT_VERIFICATION = 6
EXIT_BUDGET = 7
EXIT_STAGE_SPECTRAL = 10
EXIT_STAGE_GADGET = 11
EXIT_STAGE_PRODUCT = 12
EXIT_STAGE_AUDIT = 13


def _emit(payload: dict, summary: str) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))
    print(summary, file=sys.stderr)


def _parse_vertex_set(text: str) -> bigraph.VertexSet:
    members = [int(t) for t in text.split(",") if t != ""]
    return bigraph.VertexSet.left(members)


def _resolve_precision(args) -> int:
    if getattr(args, "precision", None) is not None:
        return args.precision
    env = os.environ.get("UNE_PRECISION")
    return int(env) if env else 30


def cmd_spectrum(args) -> int:
    g = bigraph.read_graph(args.infile)
    report = spectral.spectrum(g, tolerance=args.tolerance)
    _emit(report.to_dict(), f"ramanujan={report.ramanujan} trivial={report.trivial_multiplicity}")
    return EXIT_OK


def cmd_incidence(args) -> int:
    g = spectral.read_regular_graph(args.infile)
    inc = spectral.incidence_graph(g)
    identity = spectral.incidence_spectrum_identity_check(g)
    report = spectral.spectrum(inc, tolerance=args.tolerance)
    if args.out:
        bigraph.write_graph(inc, args.out)
    _emit(
        {"identity": identity.to_dict(), "spectrum": report.to_dict(),
         "n_left": inc.n_left, "n_right": inc.n_right},
        f"incidence ({inc.n_left}+{inc.n_right}) ramanujan={report.ramanujan} "
        f"residual={identity.max_residual:.2e}",
    )
    return EXIT_OK


def cmd_nbops(args) -> int:
    g = bigraph.read_graph(args.infile)
    ops = nbwalk.build_nb_operators(g, args.max_len)
    dump = {
        f"{kind}_{l}": ops.operator(kind, l).tolist()
        for kind in ("LL", "LR", "RL", "RR")
        for l in range(ops.max_len + 1)
    }
    _emit({"c": ops.c, "d": ops.d, "max_len": ops.max_len, "operators": dump},
          f"built operators up to length {ops.max_len}")
    return EXIT_OK


def cmd_nbcount(args) -> int:
    g = bigraph.read_graph(args.infile)
    s = _parse_vertex_set(args.set)
    payload: dict = {"set": list(s.members), "len": args.length, "mode": args.mode}
    if args.mode in ("operator", "both"):
        ops = nbwalk.build_nb_operators(g, args.length)
        payload["operator_count"] = nbwalk.count_nb_paths_operator(ops, s, args.length)
    if args.mode in ("brute", "both"):
        payload["brute_count"] = nbwalk.count_nb_paths_bruteforce(
            g, s, args.length, mode=args.brute_mode
        )
    code = EXIT_OK
    if args.mode == "both" and payload["operator_count"] != payload["brute_count"]:
        payload["mismatch"] = True
        code = EXIT_VERIFICATION
    _emit(payload, f"count={payload.get('operator_count', payload.get('brute_count'))}")
    return code


def cmd_poly(args) -> int:
    p = nbwalk.p_polynomial(args.c, args.d, args.n)
    _emit(
        {"c": args.c, "d": args.d, "n": args.n,
         "coefficients": [str(c) for c in p.coefficients]},
        f"p_{args.n} degree {p.degree}",
    )
    return EXIT_OK


def cmd_boundcheck(args) -> int:
    if args.kind == "lemma6":
        if args.c is None or args.d is None or args.ell is None:
            raise ValueError("lemma6 needs --c, --d and --ell")
        report = nbwalk.lemma6_bound_check(
            args.c, args.d, args.ell, samples=args.samples, seed=args.seed,
            precision=_resolve_precision(args),
        )
        entry = report.entries[-1]
        _emit(report.to_dict(),
              f"lemma6 ell={args.ell} asserted={entry.asserted} "
              f"violations={entry.violations} worst={entry.worst_ratio:.4f}")
        return EXIT_VERIFICATION if entry.asserted and entry.violations else EXIT_OK
    if args.kind == "lemma8":
        if args.infile is None or args.set is None or args.ell is None:
            raise ValueError("lemma8 needs --in, --set and --ell")
        g = bigraph.read_graph(args.infile)
        s = _parse_vertex_set(args.set)
        report = nbwalk.lemma8_upper_check(g, s, args.ell, tolerance=args.tolerance)
        _emit(report.to_dict(), f"lemma8 lhs={report.lhs} rhs={report.rhs:.4f} ok={report.ok}")
        return EXIT_OK if report.ok else EXIT_VERIFICATION
    # lemma9
    if args.infile is None:
        raise ValueError("lemma9 needs --in")
    g = bigraph.read_graph(args.infile)
    report = nbwalk.lemma9_lower_check(g, ell_max=args.ell_max)
    _emit(report.to_dict(), f"lemma9 ok={report.ok}")
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_gadget_sample(args) -> int:
    p = gadget.GadgetParams(L=args.L, R=args.R, c=args.c, d=args.d, seed=args.seed)
    g = gadget.sample_gadget(p)
    bigraph.write_graph(g, args.out)
    _emit({"params": p.to_dict(), "out": str(args.out), "edges": len(g.edges)},
          f"sampled ({args.c},{args.d})-biregular gadget with {len(g.edges)} edges")
    return EXIT_OK


def cmd_gadget_verify(args) -> int:
    g = bigraph.read_graph(args.infile)
    t0 = time.perf_counter()
    cert = gadget.verify_unique_neighbour_upto(
        g, args.k, budget=args.budget, method=args.method, audit_pruning=args.audit_pruning
    )
    payload = cert.to_dict()
    payload["params"] = {"n_left": g.n_left, "n_right": g.n_right}
    payload["wall_time"] = time.perf_counter() - t0
    _emit(payload, f"verified_k={cert.verified_k} witness={cert.witness}")
    if cert.budget_exhausted:
        return EXIT_BUDGET
    return EXIT_OK if cert.verified_k == cert.target_k else EXIT_VERIFICATION


def cmd_product(args) -> int:
    big = bigraph.read_graph(args.big)
    small = bigraph.read_graph(args.gadget)
    rp = product.routed_product(big, small)
    bigraph.write_graph(rp.product, args.out)
    if args.export_pcm:
        product.export_parity_check(rp.product, args.export_pcm)
    _emit(
        {"left": rp.product.n_left, "right": rp.product.n_right,
         "edges": len(rp.product.edges),
         "left_degree": rp.c * rp.c0, "right_degree": rp.d0, "out": str(args.out)},
        f"product ({rp.c * rp.c0},{rp.d0})-biregular on "
        f"{rp.product.n_left}+{rp.product.n_right}",
    )
    return EXIT_OK


def cmd_qhat(args) -> int:
    report = params.qhat(
        args.c0, args.alpha, interpretation=args.interpretation,
        boundary=args.boundary, scan_margin=args.margin,
        precision=_resolve_precision(args),
    )
    _emit(report.to_dict(), f"q_hat({args.c0}, {args.alpha}) = {report.q_hat}")
    return EXIT_OK


def cmd_constants(args) -> int:
    consts = params.theorem2_constants(args.c, args.d, args.eps)
    _emit(consts.to_dict(), f"ell={consts.ell} delta={consts.delta:.3e}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    t2 = params.theorem2_bound(args.c, args.d, args.eps)
    eml, eml_delta = params.eml_bound(args.c, args.d, args.eps)
    payload = {"c": args.c, "d": args.d, "eps": args.eps,
               "walk_bound": t2, "eml_bound": eml, "eml_delta": eml_delta,
               "dominance": t2 < eml}
    _emit(payload, f"walk={t2:.4f} < eml={eml:.4f}: {t2 < eml}")
    return EXIT_OK


def _pipeline_payload(stages: list[dict]) -> dict:
    return {"stages": stages, "passed": all(s["ok"] for s in stages)}


def cmd_pipeline(args) -> int:
    stages: list[dict] = []

    big = bigraph.read_graph(args.big)
    report = spectral.spectrum(big, tolerance=args.tolerance)
    stages.append({"stage": "spectral", "ok": report.ramanujan,
                   "report": report.to_dict()})
    if not report.ramanujan:
        _emit(_pipeline_payload(stages), "pipeline: spectral certification failed")
        return EXIT_STAGE_SPECTRAL
    c, d = report.c, report.d

    alpha = None
    if args.alpha is not None:
        alpha = Fraction(args.alpha)

    required_k = args.k
    if args.gadget:
        small = bigraph.read_graph(args.gadget)
        if small.n_left != d:
            stages.append({"stage": "gadget", "ok": False,
                           "reason": f"port-count mismatch: gadget left {small.n_left} != d {d}"})
            _emit(_pipeline_payload(stages), "pipeline: gadget port mismatch")
            return EXIT_STAGE_PRODUCT
        cert = gadget.verify_unique_neighbour_upto(small, required_k, budget=args.budget)
        attempts = [cert.to_dict()]
    else:
        L0, R0, c0, d0 = (int(t) for t in args.gadget_params.split(","))
        if L0 != d:
            stages.append({"stage": "gadget", "ok": False,
                           "reason": f"port-count mismatch: gadget left {L0} != d {d}"})
            _emit(_pipeline_payload(stages), "pipeline: gadget port mismatch")
            return EXIT_STAGE_PRODUCT
        small = None
        cert = None
        attempts = []
        for retry in range(args.retries):
            p = gadget.GadgetParams(L=L0, R=R0, c=c0, d=d0, seed=args.seed + retry)
            candidate = gadget.sample_gadget(p)
            cand_cert = gadget.verify_unique_neighbour_upto(
                candidate, required_k, budget=args.budget
            )
            attempts.append({"seed": p.seed, **cand_cert.to_dict()})
            if cand_cert.verified_k == required_k:
                small, cert = candidate, cand_cert
                break
        if small is None:
            stages.append({"stage": "gadget", "ok": False, "attempts": attempts})
            _emit(_pipeline_payload(stages),
                  f"pipeline: no sampled gadget verified to k={required_k}")
            return EXIT_STAGE_GADGET

    gadget_ok = cert.verified_k >= required_k
    stages.append({"stage": "gadget", "ok": gadget_ok, "required_k": required_k,
                   "attempts": attempts})
    if not gadget_ok:
        _emit(_pipeline_payload(stages),
              f"pipeline: gadget verified only to k={cert.verified_k} < {required_k}")
        return EXIT_STAGE_GADGET

    if alpha is not None:
        expected_r0 = Fraction(d, 1) / (alpha * c)
        if expected_r0 != small.n_right:
            stages.append({"stage": "product", "ok": False,
                           "reason": f"gadget right side {small.n_right} != d/(alpha c) = {expected_r0}"})
            _emit(_pipeline_payload(stages), "pipeline: alpha inconsistent with gadget size")
            return EXIT_STAGE_PRODUCT
    else:
        alpha = Fraction(d, 1) / (c * small.n_right)

    rp = product.routed_product(big, small)
    if args.out:
        bigraph.write_graph(rp.product, args.out)
    stages.append({"stage": "product", "ok": True, "alpha": str(alpha),
                   "left": rp.product.n_left, "right": rp.product.n_right,
                   "edges": len(rp.product.edges)})

    rng = np.random.Generator(np.random.Philox(args.seed))
    audit = {"trials": 0, "conclusive": 0, "inconclusive": 0, "failures": 0}
    verified_k = cert.verified_k
    for _ in range(args.audit_trials):
        size = int(rng.integers(1, verified_k + 1))
        size = min(size, big.n_left)
        members = sorted(int(x) for x in rng.choice(big.n_left, size=size, replace=False))
        s = bigraph.VertexSet.left(members)
        audit["trials"] += 1
        chosen = None
        for v in bigraph.neighbourhood(big, s):
            ports = product.port_set(big, v, s)
            if 1 <= len(ports) <= verified_k:
                chosen = v
                break
        if chosen is None:
            audit["inconclusive"] += 1
            continue
        audit["conclusive"] += 1
        check = product.inheritance_check(rp, s, chosen)
        direct = bigraph.unique_neighbours(rp.product, s)
        if check.vacuous or not check.ok or len(direct) == 0:
            audit["failures"] += 1
    audit_ok = audit["failures"] == 0 and audit["conclusive"] > 0
    stages.append({"stage": "audit", "ok": audit_ok, **audit})
    _emit(_pipeline_payload(stages),
          f"pipeline: {'PASS' if audit_ok else 'FAIL'} "
          f"(audit {audit['conclusive']}/{audit['trials']} conclusive)")
    return EXIT_OK if audit_ok else EXIT_STAGE_AUDIT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expanderlab",
        description="Build and verify bipartite unique-neighbour expanders at desk scale.",
    )
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (Philox 4x64)")
    parser.add_argument("--precision", type=int, default=None,
                        help="working precision in decimal digits (default: UNE_PRECISION or 30)")
    parser.add_argument("--budget", type=int, default=gadget.DEFAULT_SUBSET_BUDGET,
                        help="subset enumeration cap")
    parser.add_argument("--tolerance", type=float, default=spectral.DEFAULT_TOLERANCE,
                        help="spectral classification tolerance")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker cap (results are worker-count independent)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="singular spectrum + Ramanujan verdict")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("incidence", help="edge-vertex incidence graph of a regular graph")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_incidence)

    p = sub.add_parser("nbops", help="non-backtracking path operators")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--max-len", dest="max_len", type=int, required=True)
    p.set_defaults(func=cmd_nbops)

    p = sub.add_parser("nbcount", help="count non-backtracking paths")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--set", required=True, help="comma-separated left vertices")
    p.add_argument("--len", dest="length", type=int, required=True)
    p.add_argument("--mode", choices=["operator", "brute", "both"], default="both")
    p.add_argument("--brute-mode", dest="brute_mode",
                   choices=[nbwalk.ENDPOINTS_IN_S, nbwalk.ALL_IN_S],
                   default=nbwalk.ENDPOINTS_IN_S)
    p.set_defaults(func=cmd_nbcount)

    p = sub.add_parser("poly", help="path-count polynomial p_n")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("boundcheck", help="numeric checks of the path-count bounds")
    p.add_argument("--kind", choices=["lemma6", "lemma8", "lemma9"], required=True)
    p.add_argument("--c", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--in", dest="infile")
    p.add_argument("--set")
    p.add_argument("--ell-max", dest="ell_max", type=int, default=8)
    p.set_defaults(func=cmd_boundcheck)

    p = sub.add_parser("gadget", help="sample / verify unique-neighbour gadgets")
    gsub = p.add_subparsers(dest="gadget_command", required=True)
    ps = gsub.add_parser("sample")
    ps.add_argument("--L", type=int, required=True)
    ps.add_argument("--R", type=int, required=True)
    ps.add_argument("--c", type=int, required=True)
    ps.add_argument("--d", type=int, required=True)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_gadget_sample)
    pv = gsub.add_parser("verify")
    pv.add_argument("--in", dest="infile", required=True)
    pv.add_argument("--k", type=int, required=True)
    pv.add_argument("--budget", type=int, default=gadget.DEFAULT_SUBSET_BUDGET)
    pv.add_argument("--method", choices=[gadget.METHOD_PRUNED, gadget.METHOD_NAIVE],
                    default=gadget.METHOD_PRUNED)
    pv.add_argument("--audit-pruning", action="store_true")
    pv.set_defaults(func=cmd_gadget_verify)

    p = sub.add_parser("product", help="routed product of big graph and gadget")
    p.add_argument("--big", required=True)
    p.add_argument("--gadget", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--export-pcm", dest="export_pcm", default=None)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("qhat", help="threshold q_hat(c0, alpha)")
    p.add_argument("--c0", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--interpretation",
                   choices=[params.ALL_INTEGERS, params.PRIME_POWERS],
                   default=params.ALL_INTEGERS)
    p.add_argument("--boundary", choices=[params.LAST_FAIL, params.FIRST_HOLD],
                   default=params.FIRST_HOLD)
    p.add_argument("--margin", type=int, default=params.DEFAULT_SCAN_MARGIN)
    p.set_defaults(func=cmd_qhat)

    p = sub.add_parser("constants", help="walk length and delta for given (c, d, eps)")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("bounds", help="walk-based vs expander-mixing average degree bounds")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("pipeline", help="certify -> verify gadget -> product -> audit")
    p.add_argument("--big", required=True)
    p.add_argument("--gadget", default=None, help="gadget graph file")
    p.add_argument("--gadget-params", dest="gadget_params", default=None,
                   help="L,R,c,d to sample a gadget instead of loading one")
    p.add_argument("--alpha", default=None, help="declared imbalance (checked against gadget)")
    p.add_argument("--k", type=int, default=1, help="required verified unique-neighbour size")
    p.add_argument("--retries", type=int, default=16, help="seeds to try when sampling")
    p.add_argument("--audit-trials", dest="audit_trials", type=int, default=50)
    p.add_argument("--out", default=None, help="write the product graph here")
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "pipeline" and not (args.gadget or args.gadget_params):
        parser.error("pipeline needs --gadget or --gadget-params")
    try:
        return args.func(args)
    except bigraph.GraphFormatError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, f"parse error: {exc}")
        return EXIT_PARSE
    except FileNotFoundError as exc:
        _emit({"error": {"type": "FileNotFoundError", "message": str(exc)}}, f"I/O error: {exc}")
        return EXIT_IO
    except OSError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, f"I/O error: {exc}")
        return EXIT_IO
    except nbwalk.EnumerationBudgetError as exc:
        _emit({"error": {"type": "EnumerationBudgetError", "message": str(exc)}},
              f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except ValueError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}},
              f"precondition violated: {exc}")
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface tying the verification suites and tables together.

Exit codes: 0 all checks pass, 1 a mathematical counterexample was found,
2 invalid configuration or usage.  All rationals are written "num/den";
matrices are JSON arrays of such strings.  Identical configurations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import io
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import dims as dims_mod
from . import repcat, vertexops
from .exactmath import RatMatrix, rat, rat_str
from .fock import ModuleSpec, State, enumerate_basis, grading
from .vertexops import Truncation

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2


class ConfigError(Exception):
    pass


def _parse_range(text):
    """Parse "3" or "-1..4" into an inclusive list of integers."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ConfigError("empty range %r" % text)
        return list(range(lo, hi + 1))
    return [int(text)]


def _parse_lambda(text):
    return tuple(rat(part.strip()) for part in text.split(","))


def _parse_matrices(text):
    """Parse --H: either one JSON matrix (d=1) or a JSON list of matrices."""
    data = json.loads(text)
    if not isinstance(data, list) or not data:
        raise ConfigError("--H must be a JSON matrix or list of matrices")
    if isinstance(data[0][0], list):
        return [RatMatrix(m) for m in data]
    return [RatMatrix(data)]


def _build_spec(args):
    kind = getattr(args, "kind", "adjoint")
    d = args.d
    l = rat(args.l)
    if l == 0:
        raise ConfigError("the level l must be nonzero")
    if kind == "adjoint":
        return ModuleSpec.adjoint(d, l)
    if args.c is None:
        raise ConfigError("evaluation modules need --c")
    lam = _parse_lambda(args.lam) if args.lam else tuple(Fraction(0) for _ in range(d))
    if len(lam) != d:
        raise ConfigError("--lambda must list exactly d values")
    H = _parse_matrices(args.H) if getattr(args, "H", None) else None
    try:
        return ModuleSpec.evaluation(d, l, rat(args.c), lam, H=H)
    except ValueError as err:
        raise ConfigError(str(err))


def _truncation(args):
    try:
        return Truncation(args.max_wt, args.max_nwt, getattr(args, "j_max", 0))
    except ValueError as err:
        raise ConfigError(str(err))


def _write_output(text, args):
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _report_text(report):
    lines = [
        "identity: %s" % report.identity,
        "params: %s" % json.dumps(report.params, sort_keys=True),
        "states_checked: %d" % report.states_checked,
        "defect_zero: %s" % ("true" if report.defect_zero else "false"),
        "max_defect: %s" % rat_str(report.max_defect),
        "counterexample: %s"
        % (
            "null"
            if report.counterexample is None
            else json.dumps(report.counterexample.to_json(), sort_keys=True)
        ),
    ]
    return "\n".join(lines) + "\n"


def _emit_report(report, args):
    if args.format == "json":
        _write_output(json.dumps(report.to_json(), sort_keys=True) + "\n", args)
    elif args.format == "csv":
        row = [
            report.identity,
            json.dumps(report.params, sort_keys=True),
            str(report.states_checked),
            "true" if report.defect_zero else "false",
            rat_str(report.max_defect),
        ]
        header = "identity,params,states_checked,defect_zero,max_defect\n"
        _write_output(header + ",".join('"%s"' % f.replace('"', '""') for f in row) + "\n", args)
    else:
        _write_output(_report_text(report), args)
    return EXIT_OK if report.defect_zero else EXIT_COUNTEREXAMPLE


def _run_jobs(jobs, threads):
    """Run thunks, possibly fanned out; results keep submission order."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return [f.result() for f in [pool.submit(job) for job in jobs]]
    return [job() for job in jobs]


def _sample_modes(spec, args, rng):
    """Doubly homogeneous mode labels (v, j) for the strong-grading sweep."""
    sample = []
    for wt_v in range(1, args.v_max_wt + 1):
        for nwt_v in range(args.v_max_nwt + 1):
            for mono in enumerate_basis(spec.d, nwt_v, wt_v):
                for j in _parse_range(args.j_range):
                    sample.append((State.term(mono), j))
    if args.sample_size is not None and args.sample_size < len(sample):
        sample = rng.sample(sample, args.sample_size)
        sample.sort(key=lambda vj: (json.dumps(vj[0].to_json()), vj[1]))
    return sample


def _cmd_verify(args):
    spec = _build_spec(args)
    tr = _truncation(args)
    identity = args.identity

    if identity == "virasoro":
        pairs = [
            (m, n)
            for m in _parse_range(args.m_range)
            for n in _parse_range(args.n_range)
            if m + n >= -1 or m == n
        ]
        jobs = [
            (lambda m=m, n=n: vertexops.check_virasoro(m, n, spec, tr))
            for m, n in pairs
        ]
        reports = _run_jobs(jobs, args.threads)
        report = vertexops.merge_reports(
            reports,
            "virasoro",
            {"m_range": args.m_range, "n_range": args.n_range, "spec": spec.to_json()},
        )
    elif identity == "e1":
        i, j = (int(part) for part in args.gen.split(","))
        combos = [
            (n, k) for n in _parse_range(args.n_range) for k in _parse_range(args.k_range)
        ]
        jobs = [
            (lambda n=n, k=k: vertexops.check_l_mode_commutator(n, (i, j), k, spec, tr))
            for n, k in combos
        ]
        reports = _run_jobs(jobs, args.threads)
        report = vertexops.merge_reports(
            reports,
            "l-mode-commutator",
            {
                "gen": [i, j],
                "n_range": args.n_range,
                "k_range": args.k_range,
                "spec": spec.to_json(),
            },
        )
    elif identity == "field-commutator":
        if args.a_state:
            labels = [State.from_json(json.loads(args.a_state))]
        else:
            labels = [
                State.term(mono)
                for wt_a in range(args.a_max_wt + 1)
                for nwt_a in range(args.a_max_nwt + 1)
                for mono in enumerate_basis(spec.d, nwt_a, wt_a)
            ]
        combos = [
            (a, n, k)
            for a in labels
            for n in _parse_range(args.n_range)
            for k in _parse_range(args.k_range)
        ]
        jobs = [
            (lambda a=a, n=n, k=k: vertexops.check_field_commutator(n, a, k, spec, tr))
            for a, n, k in combos
        ]
        reports = _run_jobs(jobs, args.threads)
        report = vertexops.merge_reports(
            reports,
            "field-commutator",
            {
                "a_count": len(labels),
                "n_range": args.n_range,
                "k_range": args.k_range,
                "spec": spec.to_json(),
            },
        )
    elif identity == "strong-grading":
        rng = random.Random(args.seed)
        sample = _sample_modes(spec, args, rng)
        report = dims_mod.check_strong_grading(spec, tr, sample)
        report.params["spec"] = spec.to_json()
    elif identity == "l0-grading":
        report = _check_l0_grading(
            spec, tr, _parse_range(args.j_range), allow_truncated=args.j_max > 0
        )
    elif identity == "d-equals-lminus1":
        report = _check_d_equals_lminus1(spec, tr)
    else:
        raise ConfigError("unknown identity %r" % identity)

    return _emit_report(report, args)


def _check_l0_grading(spec, tr, j_values, allow_truncated=False):
    """L(0) eigenvalues match weights (adjoint) and every L(j) preserves the bigrade.

    Truncated L(-1) tails are refused unless --j-max gates them in, in which
    case the report is tagged "truncated": true.
    """
    hit_truncation = False

    def defect_of(w):
        nonlocal hit_truncation
        wt_w, nwt_w = grading(w)
        if spec.is_adjoint():
            l0w, _ = vertexops.l_apply(0, w, spec, tr)
            mismatch = l0w - w.scale(wt_w)
            if not mismatch.is_zero():
                return mismatch
        for j in j_values:
            image, exact = vertexops.l_apply(j, w, spec, tr)
            if not exact:
                if not allow_truncated:
                    raise ConfigError(
                        "l0-grading hit a truncated L(-1) tail; pass --j-max N "
                        "to run the truncated computation"
                    )
                hit_truncation = True
            for (mono, _top), coeff in image.terms.items():
                if mono.nwt() != nwt_w or mono.weight() != wt_w - j:
                    return State.term(mono, _top, coeff)
        return State.zero()

    params = {"j_values": j_values, "spec": spec.to_json()}
    report = vertexops._sweep("l0-grading", params, spec, tr, defect_of)
    if hit_truncation:
        report.params["truncated"] = True
    return report


def _check_d_equals_lminus1(spec, tr):
    """L(-1) agrees with the translation derivation on the adjoint module."""
    if not spec.is_adjoint():
        raise ConfigError("d-equals-lminus1 is an adjoint-module identity")

    def defect_of(w):
        lw, _ = vertexops.l_apply(-1, w, spec, tr)
        return lw - vertexops.d_apply(w)

    params = {"spec": spec.to_json()}
    return vertexops._sweep("d-equals-lminus1", params, spec, tr, defect_of)


def _cmd_dims(args):
    if args.d < 1 or args.max_p < 0 or args.max_q < 0:
        raise ConfigError("dims needs d >= 1 and nonnegative bounds")
    d, P, Q = args.d, args.max_p, args.max_q
    product = dims_mod.gf_product_count(d, P, Q)
    paper = dims_mod.gf_paper_ct(P, Q) if d == 1 else None
    rows = []
    agree = True
    for m in range(Q + 1):
        for n in range(P + 1):
            enum = len(enumerate_basis(d, m, n))
            dp = dims_mod.bipartite_count(d, m, n)
            gf = product.get(m, n)
            if not (enum == dp == gf):
                agree = False
            if paper is not None:
                ct = paper.get(m, n)
                rows.append((m, n, enum, dp, gf, str(ct), str(enum - ct)))
            else:
                rows.append((m, n, enum, dp, gf, "", ""))
    meta = {"d": d, "max_p": P, "max_q": Q}
    if args.format == "json":
        payload = {
            "meta": meta,
            "rows": [
                {
                    "m": m,
                    "n": n,
                    "enum": enum,
                    "dp": dp,
                    "gf_product": gf,
                    "gf_paper_ct": None if ct == "" else int(ct),
                    "diff": None if diff == "" else int(diff),
                }
                for m, n, enum, dp, gf, ct, diff in rows
            ],
        }
        _write_output(json.dumps(payload, sort_keys=True) + "\n", args)
    else:
        out = io.StringIO()
        out.write("# d=%d,max_p=%d,max_q=%d\n" % (d, P, Q))
        out.write("m,n,enum,dp,gf_product,gf_paper_ct,diff\n")
        for m, n, enum, dp, gf, ct, diff in rows:
            out.write("%d,%d,%d,%d,%d,%s,%s\n" % (m, n, enum, dp, gf, ct, diff))
        _write_output(out.getvalue(), args)
    return EXIT_OK if agree else EXIT_COUNTEREXAMPLE


def _parse_top(token):
    """Parse a top space: "r{R}:{d}@{lam1,lam2,...}" or a JSON object."""
    token = token.strip()
    if token.startswith("{"):
        return repcat.TopSpace.from_json(json.loads(token))
    try:
        head, lam_text = token.split("@", 1)
        r_text, d_text = head.split(":", 1)
        if not r_text.startswith("r"):
            raise ValueError
        r = int(r_text[1:])
        d = int(d_text)
        lam = _parse_lambda(lam_text)
        if len(lam) != d:
            raise ValueError
    except ValueError:
        raise ConfigError(
            "top space %r not understood; use r{R}:{d}@{lambda,...} or JSON" % token
        )
    H = tuple(RatMatrix.scalar(r, x) for x in lam)
    return repcat.TopSpace(r=r, lam=lam, H=H)


def _cmd_module(args):
    action = args.action
    if action == "casimir":
        if args.lam is None or args.c is None:
            raise ConfigError("casimir needs --lambda and --c")
        try:
            value = repcat.casimir_scalar(_parse_lambda(args.lam), rat(args.c))
        except ValueError as err:
            raise ConfigError(str(err))
        _write_output(json.dumps(rat_str(value)) + "\n", args)
        return EXIT_OK
    if action == "vacuum":
        spec = _build_spec(args)
        tr = _truncation(args)
        states = repcat.vacuum_space(spec, tr)
        payload = {
            "dimension": len(states),
            "bigrades_scanned": {"max_wt": tr.max_wt, "max_nwt": tr.max_nwt},
            "basis": [s.to_json() for s in states],
        }
        _write_output(json.dumps(payload, sort_keys=True) + "\n", args)
        return EXIT_OK
    if action == "logcheck":
        if args.H is None or args.c is None:
            raise ConfigError("logcheck needs --H and --c")
        H = _parse_matrices(args.H)
        r = H[0].rows
        if args.lam is not None:
            lam = _parse_lambda(args.lam)
        else:
            # trace/r is exact: each H_i has a single eigenvalue of multiplicity r
            lam = tuple(
                sum((m[t, t] for t in range(r)), Fraction(0)) / r for m in H
            )
        try:
            spec = ModuleSpec.evaluation(len(H), rat(args.l), rat(args.c), lam, H=H)
            genuine, blocks = repcat.is_genuine_logarithmic(spec)
        except ValueError as err:
            raise ConfigError(str(err))
        _write_output(
            json.dumps({"blocks": blocks, "genuine": genuine}, sort_keys=True) + "\n",
            args,
        )
        return EXIT_OK
    if action == "homdim":
        if len(args.tops) != 3:
            raise ConfigError("homdim needs exactly three top spaces")
        source, middle, target = (_parse_top(tok) for tok in args.tops)
        try:
            dim = repcat.intertwiner_dim(
                repcat.HomProblem(source=source, middle=middle, target=target)
            )
        except ValueError as err:
            raise ConfigError(str(err))
        _write_output(json.dumps(dim) + "\n", args)
        return EXIT_OK
    raise ConfigError("unknown module action %r" % action)


def _add_common(parser):
    parser.add_argument("--format", choices=["json", "csv", "text"], default="json")
    parser.add_argument("--out", default=None, help="write output to a file")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps")


def _add_spec_flags(parser):
    parser.add_argument("--kind", choices=["adjoint", "evaluation"], default="adjoint")
    parser.add_argument("--d", type=int, default=1)
    parser.add_argument("--l", default="1", help='level, e.g. "1/2"')
    parser.add_argument("--c", default=None, help="evaluation point")
    parser.add_argument("--lambda", dest="lam", default=None, help='e.g. "1,0"')
    parser.add_argument("--H", default=None, help="JSON matrix or list of matrices")


def _add_truncation_flags(parser, wt=4, nwt=3):
    parser.add_argument("--max-wt", type=int, default=wt)
    parser.add_argument("--max-nwt", type=int, default=nwt)
    parser.add_argument("--j-max", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="currentfock",
        description="Exact verification suites for the abelian current-algebra "
        "vertex algebra, its modules and dimension tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run an identity sweep")
    verify.add_argument(
        "identity",
        choices=[
            "e1",
            "virasoro",
            "field-commutator",
            "strong-grading",
            "l0-grading",
            "d-equals-lminus1",
        ],
    )
    _add_spec_flags(verify)
    _add_truncation_flags(verify)
    verify.add_argument("--m-range", default="-1..3")
    verify.add_argument("--n-range", default="-1..3")
    verify.add_argument("--k-range", default="-3..3")
    verify.add_argument("--gen", default="1,0", help="generator as i,j")
    verify.add_argument("--k", default=None, help="single mode (overrides --k-range)")
    verify.add_argument("--n", default=None, help="single index (overrides --n-range)")
    verify.add_argument("--a-state", default=None, help="JSON state labeling Y(A,z)")
    verify.add_argument("--a-max-wt", type=int, default=2)
    verify.add_argument("--a-max-nwt", type=int, default=1)
    verify.add_argument("--v-max-wt", type=int, default=2)
    verify.add_argument("--v-max-nwt", type=int, default=2)
    verify.add_argument("--j-range", default="-2..2")
    verify.add_argument("--sample-size", type=int, default=None)
    _add_common(verify)

    table = sub.add_parser("dims", help="emit the cross-checked dimension table")
    table.add_argument("--d", type=int, default=1)
    table.add_argument("--max-p", type=int, default=8)
    table.add_argument("--max-q", type=int, default=6)
    _add_common(table)

    module = sub.add_parser("module", help="module-level quantities")
    module.add_argument("action", choices=["casimir", "vacuum", "logcheck", "homdim"])
    _add_spec_flags(module)
    _add_truncation_flags(module)
    module.add_argument("--tops", nargs="*", default=[], help="three top spaces")
    _add_common(module)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code not in (0, None) else 0
    try:
        if args.command == "verify":
            if args.k is not None:
                args.k_range = args.k
            if args.n is not None:
                args.n_range = args.n
            return _cmd_verify(args)
        if args.command == "dims":
            return _cmd_dims(args)
        if args.command == "module":
            return _cmd_module(args)
        raise ConfigError("unknown command %r" % args.command)
    except (ConfigError, ValueError, json.JSONDecodeError) as err:
        sys.stderr.write("error: %s\n" % err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``spinkit <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys

from . import hadamard as hd
from .errors import ParseError, SpinkitError
from .linalg import SpinMatrix
from .models import build_model
from .nomura import lemma2_check, lemma3_check, lemma4_check, lemma5_check, nomura_algebra
from .numbers import make_context
from .report import jsonable, make_report
from .schemes import (
    coherent_config_check,
    directed_family,
    fuse_rho_orbits,
    rho_automorphism_check,
    scheme_check,
    symmetric_family,
)
from .verify import (
    RunManifest,
    error_report,
    exit_code,
    report_emit,
    summary,
    verify_all,
    verify_remark,
    verify_theorem,
)


def _write(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(report, out):
    if out:
        report_emit(report, out)
    else:
        sys.stdout.write(report.to_json())
    print(report.summary_line(), file=sys.stderr)
    return exit_code([report])


def _hadamard(args):
    if getattr(args, "hadamard", None):
        return hd.load(args.hadamard)
    return hd.standard(args.k)


def _context(args, k):
    return make_context(k, omega=args.omega, xi=args.xi, backend=args.backend,
                        tolerance=args.tol)


def cmd_gen_hadamard(args):
    if args.method == "sylvester":
        m = args.order.bit_length() - 1
        if args.order < 1 or 2**m != args.order:
            raise SystemExit(f"sylvester needs a power of two, got {args.order}")
        H = hd.sylvester(m)
    else:
        H = hd.paley1(args.order - 1)
    _write(hd.serialize(H), args.out)
    return 0


def cmd_build_model(args):
    H = _hadamard(args)
    ctx = _context(args, H.k)
    M = build_model(args.kind, H, ctx)
    _write(M.to_json() + "\n", args.out)
    return 0


def cmd_check_scheme(args):
    H = _hadamard(args)
    try:
        if args.which == "A":
            rep, _ = scheme_check(symmetric_family(H))
        elif args.which == "Aprime":
            rep, _ = scheme_check(directed_family(H))
        elif args.which == "cc":
            rep, _ = coherent_config_check(H)
        elif args.which == "rho":
            rep = rho_automorphism_check(H)
        else:
            spec = fuse_rho_orbits(H)
            rep = make_report("scheme.fusion", True, k=H.k, names=spec.names, p=spec.tensor)
    except SpinkitError as exc:
        rep = error_report(f"scheme.{args.which}", exc, k=H.k)
    return _emit(rep, args.out)


def cmd_nomura(args):
    if args.model:
        with open(args.model) as fh:
            text = fh.read()
        side = json.loads(text)["n"]
        k = args.k or max(1, side // 4)
        ctx = _context(args, k)
        M = SpinMatrix.from_json(text, k=k, label=args.model)
    else:
        args.k = args.k or 4
        H = _hadamard(args)
        ctx = _context(args, H.k)
        M = build_model(args.kind, H, ctx)
    try:
        res = nomura_algebra(M, ctx, skip_connected=not args.exhaustive_edges)
        part = res.partition
        rep = make_report("nomura.algebra", True, ctx, model=M.label, dimension=res.dimension,
                          sizes=part.sizes, representatives=part.representatives(),
                          ambiguous_tests=part.ambiguous, evaluated=part.evaluated,
                          orientation=res.orientation)
    except SpinkitError as exc:
        rep = error_report("nomura.algebra", exc, ctx)
    return _emit(rep, args.out)


def _single(check_id, fn, ctx=None, k=None):
    try:
        return fn()
    except SpinkitError as exc:
        return error_report(check_id, exc, ctx, k)


def cmd_verify(args):
    ks = [int(x) for x in args.k.split(",")] if args.k else None
    if args.all:
        manifest = RunManifest(omega=args.omega, xi=args.xi, backend=args.backend,
                               tolerance=args.tol, outdir=args.out)
        if ks:
            manifest.ks = ks
        if args.hadamard:
            if not ks or len(ks) != 1:
                raise SystemExit("--hadamard with --all needs exactly one --k")
            manifest.hadamard = {ks[0]: args.hadamard}
        reports = verify_all(manifest)
        for r in reports:
            print(r.summary_line())
        if not args.out:
            sys.stdout.write(json.dumps(jsonable(summary(reports)), sort_keys=True, indent=2) + "\n")
        return exit_code(reports)
    if args.remark:
        k = args.remark
        rep = _single("verify.remark", lambda: verify_remark(k, args.omega, args.xi), k=k)
        return _emit(rep, args.out)
    k = ks[0] if ks else 4
    args.k = k
    H = _hadamard(args)
    ctx = _context(args, H.k)
    if args.theorem:
        rep = _single("verify.theorem", lambda: verify_theorem(H, ctx), ctx)
    else:
        fns = {
            2: lambda: lemma2_check(H, ctx, sample=args.sample),
            3: lambda: lemma3_check(H),
            4: lambda: lemma4_check(H, ctx, sample=args.sample),
            5: lambda: lemma5_check(H, ctx, sample=args.sample),
        }
        rep = _single(f"nomura.lemma{args.lemma}", fns[args.lemma], ctx)
    return _emit(rep, args.out)


def _add_model_opts(p):
    p.add_argument("--omega", type=int, default=0, choices=range(4), help="omega = i^N")
    p.add_argument("--xi", type=int, default=1, choices=(1, 3, 5, 7), help="xi = zeta_8^N")
    p.add_argument("--backend", choices=("cyclotomic", "laurent_hybrid", "numeric"))
    p.add_argument("--tol", type=float, default=1e-8)


def build_parser():
    ap = argparse.ArgumentParser(prog="spinkit", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-hadamard", help="write a Hadamard matrix in +/- format")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--method", choices=("sylvester", "paley"), default="sylvester")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_hadamard)

    p = sub.add_parser("build-model", help="dump a model matrix as JSON")
    p.add_argument("--kind", choices=("W", "Wp", "Wt", "Wtp", "Potts"), required=True)
    p.add_argument("--hadamard")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--out")
    _add_model_opts(p)
    p.set_defaults(func=cmd_build_model)

    p = sub.add_parser("check-scheme", help="association scheme / coherent configuration checks")
    p.add_argument("--which", choices=("A", "Aprime", "cc", "rho", "fusion"), default="A")
    p.add_argument("--hadamard")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_scheme)

    p = sub.add_parser("nomura", help="basis of the Nomura algebra of a model")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", help="JSON matrix file from build-model")
    src.add_argument("--kind", choices=("W", "Wp", "Wt", "Wtp"))
    p.add_argument("--hadamard")
    p.add_argument("--k", type=int)
    p.add_argument("--exhaustive-edges", action="store_true",
                   help="evaluate every inner product instead of skipping connected pairs")
    p.add_argument("--out")
    _add_model_opts(p)
    p.set_defaults(func=cmd_nomura)

    p = sub.add_parser("verify", help="theorem, lemma, remark or full verification runs")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--all", action="store_true")
    what.add_argument("--theorem", action="store_true")
    what.add_argument("--lemma", type=int, choices=(2, 3, 4, 5))
    what.add_argument("--remark", type=int, choices=(1, 2))
    p.add_argument("--k", help="comma separated orders, e.g. 1,2,4,8")
    p.add_argument("--hadamard")
    p.add_argument("--sample", type=int, help="random sample size for lemma checks")
    p.add_argument("--out", help="output directory (--all) or report file")
    _add_model_opts(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except SpinkitError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

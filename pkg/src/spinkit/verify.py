"""End-to-end verification runs and report emission."""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import hadamard as hd
from .errors import AmbiguousZero, ConstraintViolation, Failed, SpinkitError
from .models import NEG_UINV, U3, build_model, gauge_identity_check, type2_check, type3_check
from .nomura import (
    lemma2_check,
    lemma3_check,
    lemma4_check,
    lemma5_check,
    membership_test,
    nomura_algebra,
)
from .numbers import Verdict, make_context
from .report import AMBIGUOUS, FAIL, PASS, jsonable, make_report, timed
from .schemes import (
    coherent_config_check,
    cyclic_scheme,
    directed_family,
    fuse_rho_orbits,
    rho_automorphism_check,
    same_family,
    scheme_check,
    symmetric_family,
)

EXIT_PASS, EXIT_FAIL, EXIT_AMBIGUOUS = 0, 1, 2


# ---------------------------------------------------------------------------
# theorem
# ---------------------------------------------------------------------------

def _summary(res):
    part = res.partition
    return {
        "dimension": res.dimension,
        "sizes": part.sizes,
        "representatives": part.representatives(),
        "evaluated": part.evaluated,
        "ambiguous_tests": part.ambiguous,
        "orientation": res.orientation,
    }


def coefficients_distinct(ctx):
    """Pairwise distinctness of the W' coefficients xi, -u^-1, -xi, u^3."""
    coeffs = {"xi": ctx.xi_mono, "-u^-1": NEG_UINV, "-xi": -ctx.xi_mono, "u^3": U3}
    equal, amb = [], []
    for (n1, c1), (n2, c2) in itertools.combinations(coeffs.items(), 2):
        v = ctx.is_zero(ctx.embed(c1) - ctx.embed(c2))
        if v == Verdict.ZERO:
            equal.append([n1, n2])
        elif v == Verdict.AMBIGUOUS:
            amb.append([n1, n2])
    return equal, amb


def verify_theorem(H, ctx, skip_connected=True):
    """N(W) = A and N(W') = A' for a Hadamard matrix of order k >= 4.

    Raises Failed naming the first broken clause; the witness carries the
    outcome of every clause.
    """
    k = H.k
    if k < 4:
        raise ConstraintViolation(f"the theorem assumes k >= 4, got k={k}", witness={"k": k})
    W, Wp = build_model("W", H, ctx), build_model("Wp", H, ctx)
    rW = nomura_algebra(W, ctx, skip_connected=skip_connected)
    rWp = nomura_algebra(Wp, ctx, skip_connected=skip_connected)
    clauses = {
        "i": same_family(rW.basis, symmetric_family(H)),
        "ii": same_family(rWp.basis, directed_family(H)),
    }
    bad_members = []
    for name, M, res in (("W", W, rW), ("Wp", Wp, rWp)):
        for idx, B in enumerate(res.basis):
            rep = membership_test(B, M, ctx)
            if not rep.passed:
                bad_members.append({"model": name, "class": idx, **rep.witnesses[0]})
    clauses["iii"] = not bad_members
    equal, amb = coefficients_distinct(ctx)
    if amb:
        raise AmbiguousZero("coefficient comparison is ambiguous", witness={"pairs": amb})
    clauses["iv"] = not equal
    data = {"W": _summary(rW), "Wp": _summary(rWp), "clauses": clauses,
            "source": H.source}
    broken = [c for c in ("i", "ii", "iii", "iv") if not clauses[c]]
    if broken:
        raise Failed(
            f"theorem clause ({broken[0]}) fails at k={k}",
            witness={"clause": broken[0], "clauses": clauses,
                     "dimension_W": rW.dimension, "dimension_Wp": rWp.dimension,
                     "sizes_W": rW.sizes, "sizes_Wp": rWp.sizes,
                     "membership_failures": bad_members[:1], "equal_coefficients": equal},
        )
    return make_report("verify.theorem", True, ctx, **data)


# ---------------------------------------------------------------------------
# remark (k = 1, 2)
# ---------------------------------------------------------------------------

def _relabel_to(family, target):
    """Vertex ordering pi with {P_pi B P_pi^T} = target, or None."""
    n = family[0].shape[0]
    for perm in itertools.permutations(range(n)):
        p = list(perm)
        moved = [B[np.ix_(p, p)] for B in family]
        if same_family(moved, target):
            return p
    return None


def _tensor_match(spec, target):
    """Class relabeling (identity fixed) carrying spec's tensor onto target's."""
    r = spec.rank
    if r != target.rank:
        return None
    rest = [i for i in range(r) if i != spec.identity]
    trest = [i for i in range(r) if i != target.identity]
    perms = np.array(list(itertools.permutations(rest)), dtype=np.int64)
    sig = np.empty((len(perms), r), dtype=np.int64)
    sig[:, target.identity] = spec.identity
    sig[:, trest] = perms
    p = spec.tensor
    moved = p[sig[:, :, None, None], sig[:, None, :, None], sig[:, None, None, :]]
    hits = np.flatnonzero(np.all(moved == target.tensor, axis=(1, 2, 3)))
    if not hits.size:
        return None
    return sig[hits[0]].tolist()


def verify_remark(k, omega=0, xi=1):
    """k=1: N(W) = N(W') = Z/4Z scheme; k=2: both carry the Z/8Z intersection tensor."""
    if k not in (1, 2):
        raise ValueError("the remark concerns k = 1 and k = 2 only")
    ctx = make_context(k, omega=omega, xi=xi)
    H = hd.standard(k)
    n = 4 * k
    target = cyclic_scheme(n)
    results, problems = {}, []
    bases = {}
    for name in ("W", "Wp"):
        res = nomura_algebra(build_model(name, H, ctx), ctx)
        bases[name] = res.basis
        entry = {"dimension": res.dimension, "sizes": res.sizes,
                 "all_classes_symmetric": all(np.array_equal(B, B.T) for B in res.basis)}
        if res.dimension != n:
            problems.append(f"dim N({name}) = {res.dimension}, expected {n}")
        elif k == 1:
            perm = _relabel_to(res.basis, target.matrices)
            entry["relabeling"] = perm
            if perm is None:
                problems.append(f"N({name}) matches no vertex relabeling of Z/4Z")
        else:
            try:
                _, spec = scheme_check(res.basis)
            except SpinkitError as exc:
                problems.append(f"N({name}) is not a Bose-Mesner algebra: {exc}")
                results[name] = entry
                continue
            sig = _tensor_match(spec, target)
            entry["class_relabeling"] = sig
            if sig is None:
                problems.append(f"N({name}) tensor differs from Z/8Z under every relabeling")
        results[name] = entry
    same = same_family(bases["W"], bases["Wp"])
    if k == 1 and not same:
        problems.append("N(W) and N(W') differ as sets")
    data = {"models": results, "equal_as_sets": same, "side": n,
            "isomorphism": "vertex relabeling" if k == 1 else
            "intersection tensor equality up to class relabeling (identity fixed)"}
    if problems:
        raise Failed(problems[0], witness={"problems": problems, **data})
    return make_report(f"verify.remark{k}", True, ctx, **data)


# ---------------------------------------------------------------------------
# manifests
# ---------------------------------------------------------------------------

CHECKS = (
    "hadamard.validate",
    "models.type2",
    "models.type3",
    "models.gauge",
    "scheme.A",
    "scheme.Aprime",
    "scheme.cc",
    "scheme.rho",
    "scheme.fusion",
    "nomura.lemmas",
    "verify.theorem",
    "verify.remark",
)


@dataclass
class RunManifest:
    ks: list = field(default_factory=lambda: [1, 2, 4, 8])
    checks: list = field(default_factory=lambda: list(CHECKS))
    hadamard: dict = field(default_factory=dict)  # k -> path; default Sylvester/bundled
    outdir: str | None = None
    omega: int = 0
    xi: int = 1
    backend: str | None = None
    tolerance: float = 1e-8
    precision: int | None = None
    lemma_sample: int = 2000
    type3_samples: int = 10_000

    def __post_init__(self):
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ValueError(f"unknown check ids: {unknown}")

    def load_hadamard(self, k):
        path = self.hadamard.get(k)
        return hd.load(path) if path else hd.standard(k)


def error_report(check_id, exc, ctx=None, k=None):
    witness = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, SpinkitError) and exc.witness is not None:
        witness["witness"] = jsonable(exc.witness)
    amb = 0
    if isinstance(exc, AmbiguousZero):
        w = exc.witness if isinstance(exc.witness, dict) else {}
        amb = int(w.get("ambiguous", w.get("unresolved", 1)) or 1)
    kw = {} if ctx is not None else {"k": k}
    return make_report(check_id, False, ctx, witnesses=[witness], ambiguity_count=amb, **kw)


def _run(check_id, fn, ctx=None, k=None):
    holder = {}
    try:
        with timed(holder):
            rep = fn()
    except Exception as exc:  # a failing check becomes a report
        rep = error_report(check_id, exc, ctx, k)
    if rep.check_id != check_id:
        rep.check_id = check_id
    rep.timing = holder.get("seconds")
    return rep


def _gauge_all(H, ctx):
    subs = [gauge_identity_check(kind, H, ctx) for kind in ("W", "Wp", "WpT")]
    return make_report("models.gauge", True, ctx, identities=[r.check_id for r in subs],
                       cases=[r.data["case"] for r in subs])


def _models_check(check, H, ctx, manifest):
    reps = []
    for kind in ("W", "Wp"):
        M = build_model(kind, H, ctx)
        if check == "type2":
            reps.append(type2_check(M, ctx))
        else:
            reps.append(type3_check(M, ctx, samples=manifest.type3_samples))
    ok = all(r.passed for r in reps)
    wit = [w for r in reps for w in r.witnesses]
    return make_report(f"models.{check}", ok, ctx, witnesses=wit,
                       models={r.data["model"]: r.data for r in reps})


def _lemmas(H, ctx, manifest):
    sample = None if H.k <= 4 else manifest.lemma_sample
    subs = [lemma2_check(H, ctx, sample=sample), lemma3_check(H),
            lemma4_check(H, ctx, sample=sample), lemma5_check(H, ctx, sample=sample)]
    return make_report("nomura.lemmas", True, ctx, sample=sample,
                       lemmas={r.check_id: r.data for r in subs})


def _scheme(which, H):
    if which == "A":
        rep, _ = scheme_check(symmetric_family(H))
    elif which == "Aprime":
        rep, _ = scheme_check(directed_family(H))
    elif which == "cc":
        rep, _ = coherent_config_check(H)
    elif which == "rho":
        rep = rho_automorphism_check(H)
    else:
        spec = fuse_rho_orbits(H)
        rep = make_report("scheme.fusion", True, k=H.k, names=spec.names, rank=spec.rank)
    return rep


def verify_all(manifest=None):
    """Run every requested check for every k; never raises."""
    manifest = manifest or RunManifest()
    reports = []
    for k in manifest.ks:
        try:
            H = manifest.load_hadamard(k)
        except Exception as exc:
            reports.append(error_report("hadamard.load", exc, k=k))
            continue
        v = _run("hadamard.validate", lambda: hd.validate(H), k=k)
        if not v.passed and v.k is None:
            v.k = k
        if "hadamard.validate" in manifest.checks:
            reports.append(v)
        if not v.passed:
            continue
        try:
            ctx = make_context(k, omega=manifest.omega, xi=manifest.xi,
                               backend=manifest.backend, tolerance=manifest.tolerance,
                               precision=manifest.precision)
        except Exception as exc:
            reports.append(error_report("context", exc, k=k))
            continue
        runners = {
            "models.type2": lambda: _models_check("type2", H, ctx, manifest),
            "models.type3": lambda: _models_check("type3", H, ctx, manifest),
            "models.gauge": lambda: _gauge_all(H, ctx),
            "scheme.A": lambda: _scheme("A", H),
            "scheme.Aprime": lambda: _scheme("Aprime", H),
            "scheme.cc": lambda: _scheme("cc", H),
            "scheme.rho": lambda: _scheme("rho", H),
            "scheme.fusion": lambda: _scheme("fusion", H),
            "nomura.lemmas": lambda: _lemmas(H, ctx, manifest),
        }
        for cid in CHECKS[1:-2]:
            if cid in manifest.checks:
                reports.append(_run(cid, runners[cid], ctx if cid.startswith(("models", "nomura")) else None, k))
        if "verify.theorem" in manifest.checks and k >= 4:
            reports.append(_run("verify.theorem", lambda: verify_theorem(H, ctx), ctx, k))
        if "verify.remark" in manifest.checks and k in (1, 2):
            reports.append(_run("verify.remark",
                                lambda: verify_remark(k, manifest.omega, manifest.xi), ctx, k))
    if manifest.outdir:
        emit_all(reports, manifest.outdir)
    return reports


def exit_code(reports):
    verdicts = {r.verdict for r in reports}
    if FAIL in verdicts:
        return EXIT_FAIL
    if AMBIGUOUS in verdicts:
        return EXIT_AMBIGUOUS
    return EXIT_PASS


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def report_emit(report, path):
    """Write the canonical JSON body; timing goes to ``<path>.timing.json``."""
    with open(path, "w") as fh:
        fh.write(report.to_json())
    if report.timing is not None:
        with open(_timing_path(path), "w") as fh:
            json.dump({"check_id": report.check_id, "seconds": report.timing}, fh, indent=2)
            fh.write("\n")


def _timing_path(path):
    root, ext = os.path.splitext(str(path))
    return f"{root}.timing{ext or '.json'}"


def report_filename(report):
    k = "all" if report.k is None else f"k{report.k}"
    return f"{k}_{report.check_id}.json"


def summary(reports):
    return {
        "exit_code": exit_code(reports),
        "counts": {v: sum(r.verdict == v for r in reports) for v in (PASS, FAIL, AMBIGUOUS)},
        "reports": [{"check_id": r.check_id, "k": r.k, "verdict": r.verdict,
                     "file": report_filename(r)} for r in reports],
    }


def emit_all(reports, outdir):
    os.makedirs(outdir, exist_ok=True)
    for r in reports:
        report_emit(r, os.path.join(outdir, report_filename(r)))
    with open(os.path.join(outdir, "summary.json"), "w") as fh:
        fh.write(json.dumps(jsonable(summary(reports)), sort_keys=True, indent=2) + "\n")

"""Acceptance criteria 1-9.

Each test prints one ``CRITERION n: PASS|FAIL`` line, repeated in the
terminal summary, and then asserts. Runtime limits and tolerances are pinned
below. Run standalone with ``python3 tests/test_acceptance.py`` for the lines
alone.
"""
import sys
import time

import numpy as np

from spinkit.errors import SpinkitError
from spinkit.hadamard import standard
from spinkit.models import build_model, type2_check, type3_check
from spinkit.nomura import lemma_checks, membership_test, nomura_algebra, nomura_graph
from spinkit.numbers import UMode, make_context
from spinkit.schemes import (
    build_distance_matrices,
    build_relations,
    coherent_config_check,
    directed_family,
    fuse_rho_orbits,
    rho_automorphism_check,
    same_family,
    scheme_check,
    symmetric_family,
)
from spinkit.verify import verify_remark

TOL = 1e-8
LIMIT_1 = 10.0
LIMIT_2 = 60.0
LIMIT_3 = 300.0
LIMIT_7 = 5.0
SAMPLE_K8 = 1000

RESULTS = []


def record(num, ok, detail):
    line = f"CRITERION {num}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS.append(line)
    print(line, flush=True)
    return ok


def expected_sizes(k):
    n = 4 * k
    return sorted(n * v for v in (1, k, 2 * (k - 1), k, 1))


def theorem_instance(k, ctx):
    """Nomura algebras of W and W' against the two Hadamard schemes."""
    H = standard(k)
    out = {}
    for kind, family in (("W", symmetric_family(H)), ("Wp", directed_family(H))):
        M = build_model(kind, H, ctx)
        res = nomura_algebra(M, ctx)
        out[kind] = {
            "model": M,
            "result": res,
            "match": same_family(res.basis, family),
            "dimension": res.dimension,
            "sizes": sorted(res.sizes),
            "ambiguous": res.ambiguity_count,
        }
    return out


def instance_ok(inst, k):
    return all(v["match"] and v["dimension"] == 5 and v["sizes"] == expected_sizes(k)
               and v["ambiguous"] == 0 for v in inst.values())


def describe(inst):
    return "; ".join(f"{kind}: dim={v['dimension']} sizes={v['sizes']} ambiguous={v['ambiguous']}"
                     for kind, v in inst.items())


# shared between criteria 2, 3 and 8
_CACHE = {}


def _instance(k):
    if k not in _CACHE:
        ctx = make_context(4) if k == 4 else make_context(
            k, UMode.real_dominant(), backend="laurent_hybrid", tolerance=TOL)
        t0 = time.perf_counter()
        inst = theorem_instance(k, ctx)
        _CACHE[k] = (ctx, inst, time.perf_counter() - t0)
    return _CACHE[k]


def test_criterion_1():
    t0 = time.perf_counter()
    ctx = make_context(4)
    H = standard(4)
    details, ok = [], True
    for kind in ("W", "Wp"):
        M = build_model(kind, H, ctx)
        r2 = type2_check(M, ctx)
        r3 = type3_check(M, ctx)
        good = (r2.passed and r2.data["constant"] == 16 and r3.passed and r3.data["exhaustive"]
                and r3.data["triples"] == 4096 and len(r3.data["signs_passing"]) == 1
                and abs(r3.data["working_d"] ** 2 - 16) < TOL)
        ok &= good
        details.append(f"{kind}: type2 const={r2.data.get('constant')} d={r3.data.get('working_d')}")
    dt = time.perf_counter() - t0
    ok &= dt < LIMIT_1
    record(1, ok, f"{'; '.join(details)}; {dt:.1f}s")
    assert ok


def test_criterion_2():
    _, inst, dt = _instance(4)
    ok = instance_ok(inst, 4) and dt < LIMIT_2
    record(2, ok, f"k=4 exact u=1: {describe(inst)}; expected sizes {expected_sizes(4)}; {dt:.1f}s")
    assert ok


def test_criterion_3():
    _, inst, dt = _instance(8)
    ok = instance_ok(inst, 8) and dt < LIMIT_3
    record(3, ok, f"k=8 hybrid tol={TOL}: {describe(inst)}; {dt:.1f}s")
    assert ok


def test_criterion_4():
    bad = []
    for omega in range(4):
        for xi in (1, 3, 5, 7):
            ctx = make_context(4, omega=omega, xi=xi)
            inst = theorem_instance(4, ctx)
            if not instance_ok(inst, 4):
                bad.append((omega, xi, inst["W"]["dimension"], inst["Wp"]["dimension"]))
    ok = not bad
    detail = "all 16 (omega, xi)" if ok else (
        f"{len(bad)}/16 (omega, xi) fail; e.g. omega=i^{bad[0][0]} xi=zeta8^{bad[0][1]}: "
        f"dim N(W)={bad[0][2]} dim N(W')={bad[0][3]}")
    record(4, ok, detail)
    assert ok


def test_criterion_5():
    details, ok = [], True
    for k in (4, 8):
        H = standard(k)
        rA, _ = scheme_check(symmetric_family(H))
        rAp, _ = scheme_check(directed_family(H))
        mats = build_distance_matrices(H)
        rels = build_relations(H)
        same = all(np.array_equal(rels[n].matrix, mats[{"R1p": "A1p", "R3p": "A3p"}.get(n, "A" + n[1:])])
                   for n in rels)
        cc, _ = coherent_config_check(H)
        rho = rho_automorphism_check(H)
        fused = fuse_rho_orbits(H)
        good = (rA.passed and rAp.passed and same and cc.data["rule_checks"] == 100
                and rho.data["triples"] == 1000
                and same_family(fused.matrices, directed_family(H)))
        ok &= good
        details.append(f"k={k} {'ok' if good else 'bad'}")
    record(5, ok, ", ".join(details))
    assert ok


def test_criterion_6():
    ctx4 = make_context(4)
    r4 = lemma_checks(standard(4), ctx4)
    sub = r4.data["lemmas"]
    exhaustive = (sub["nomura.lemma2"]["pairs"] == 256 and sub["nomura.lemma5"]["pair_pairs"] == 16384
                  and sub["nomura.lemma5"]["exhaustive"]
                  and sub["nomura.lemma3"]["images"] == {"R1": 64, "R3": 64})
    ctx8 = make_context(8)
    r8 = lemma_checks(standard(8), ctx8, sample=SAMPLE_K8, seed=0)
    ok = r4.passed and exhaustive and r8.passed
    record(6, ok, f"k=4 exhaustive {r4.verdict}; k=8 sampled {SAMPLE_K8} {r8.verdict}")
    assert ok


def test_criterion_7():
    t0 = time.perf_counter()
    parts = {}
    for k in (1, 2):
        try:
            verify_remark(k)
            parts[k] = (True, "pass")
        except SpinkitError as exc:
            w = exc.witness or {}
            parts[k] = (False, "; ".join(w.get("problems", [str(exc)])))
    dt = time.perf_counter() - t0
    ok = parts[1][0] and parts[2][0] and dt < LIMIT_7
    record(7, ok, f"k=1: {parts[1][1]}; k=2: {parts[2][1]}; {dt:.1f}s")
    assert ok


def test_criterion_8():
    failures, total = [], 0
    for k in (4, 8):
        ctx, inst, _ = _instance(k)
        for kind, v in inst.items():
            for idx, B in enumerate(v["result"].basis):
                total += 1
                if not membership_test(B, v["model"], ctx).passed:
                    failures.append((k, kind, idx))
    ok = not failures
    record(8, ok, f"{total - len(failures)}/{total} basis matrices pass membership")
    assert ok


def test_criterion_9():
    H = standard(4)
    exact = make_context(4)
    hybrid = make_context(4, UMode.real_dominant(), backend="laurent_hybrid", tolerance=TOL)
    ok, amb = True, 0
    for kind in ("W", "Wp", "Wt", "Wtp"):
        pe = nomura_graph(build_model(kind, H, exact), exact)
        ph = nomura_graph(build_model(kind, H, hybrid), hybrid)
        ph_off = nomura_graph(build_model(kind, H, hybrid), hybrid, skip_connected=False)
        pe_off = nomura_graph(build_model(kind, H, exact), exact, skip_connected=False)
        amb += ph.ambiguous + ph_off.ambiguous
        ok &= pe == ph == ph_off == pe_off
    ok &= amb == 0
    record(9, ok, f"exact == hybrid, skip on == off for W, Wp, Wt, Wtp; hybrid ambiguous={amb}")
    assert ok


if __name__ == "__main__":
    status = 0
    for num in range(1, 10):
        try:
            globals()[f"test_criterion_{num}"]()
        except AssertionError:
            status = 1
    sys.exit(status)

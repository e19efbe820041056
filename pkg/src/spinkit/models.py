"""Potts and Hadamard spin models, type II/III checks and gauge identities."""

from __future__ import annotations

import enum

import numpy as np

from .errors import AmbiguousZero, IdentityFailed, OrderMismatch
from .linalg import SpinMatrix, block4, first_mismatch, lincomb, matmul, transpose
from .numbers import Monomial, Verdict, loop_parameter_terms
from .report import make_report
from .schemes import build_distance_matrices


class ModelKind(str, enum.Enum):
    W = "W"
    Wprime = "Wp"
    Wtilde = "Wt"
    WtildePrime = "Wtp"
    Potts = "Potts"


U3 = Monomial.make(1, 0, 3)
NEG_UINV = Monomial.make(-1, 0, -1)


def potts(ctx):
    """u^3 I - u^-1 (J - I) of order k."""
    k = ctx.k
    out = np.empty((k, k), dtype=object)
    out[...] = NEG_UINV
    for x in range(k):
        out[x, x] = U3
    return SpinMatrix(out, label="Potts")


def _scaled(H, mono, transpose_=False):
    S = H.signs.T if transpose_ else H.signs
    out = np.empty(S.shape, dtype=object)
    for idx, s in np.ndenumerate(S):
        out[idx] = mono * int(s)
    return out


def build_model(kind, H, ctx):
    kind = ModelKind(kind)
    if H.k != ctx.k:
        raise OrderMismatch(f"Hadamard order {H.k} does not match context k={ctx.k}")
    if kind is ModelKind.Potts:
        return potts(ctx)
    A = potts(ctx).entries
    one = Monomial.one()
    if kind is ModelKind.W:
        top, bottom = ctx.omega_mono, ctx.omega_mono
    elif kind is ModelKind.Wtilde:
        top, bottom = one, one
    elif kind is ModelKind.Wprime:
        top, bottom = ctx.xi_mono, -ctx.xi_mono
    else:
        top, bottom = one, ctx.i_mono
    T = _scaled(H, top)
    Tn = _scaled(H, -top)
    B = _scaled(H, bottom, transpose_=True)
    Bn = _scaled(H, -bottom, transpose_=True)
    M = block4([[A, A, T, Tn], [A, A, Tn, T], [B, Bn, A, A], [Bn, B, A, A]], label=kind.value)
    if kind in (ModelKind.W, ModelKind.Wprime):
        _assert_expansion(kind, M, H, ctx)
    return M


def expansion(kind, H, ctx):
    """W or W' written in its relation basis."""
    mats = build_distance_matrices(H)
    if ModelKind(kind) is ModelKind.W:
        c, names = ctx.omega_mono, ["A0", "A1", "A2", "A3", "A4"]
    else:
        c, names = ctx.xi_mono, ["A0", "A1p", "A2", "A3p", "A4"]
    coeffs = [U3, c, NEG_UINV, -c, U3]
    return lincomb(coeffs, [mats[n] for n in names], ctx)


def _assert_expansion(kind, M, H, ctx):
    E = expansion(kind, H, ctx)
    bad = first_mismatch(M, E, ctx)
    if bad is not None:
        raise IdentityFailed(f"{kind.value} differs from its relation expansion at {bad}",
                             witness={"entry": list(bad)})


# ---------------------------------------------------------------------------
# type II / type III
# ---------------------------------------------------------------------------

def _encoded(M, ctx):
    a8, m = M.unit_codes()
    return ctx.kernel.encode(a8, m)


def _one(kern):
    return kern.encode(np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64))[0]


def type2_check(M, ctx):
    """sum_x M(a,x)/M(b,x) == n delta_ab for all a, b."""
    kern = ctx.kernel
    n = M.n
    E = _encoded(M, ctx)
    ratios = kern.mul(E[:, None, :], kern.inv(E[None, :, :]))  # [a, b, x]
    one = np.broadcast_to(_one(kern), ratios[:, :, :1].shape)
    terms = np.concatenate([ratios, one], axis=2)
    weights = np.ones((n, n, n + 1), dtype=np.int64)
    weights[:, :, n] = -n * np.eye(n, dtype=np.int64)
    v = kern.verdicts(kern.sums(terms, weights))
    amb = int(np.count_nonzero(v == Verdict.AMBIGUOUS))
    if amb:
        a, b = np.argwhere(v == Verdict.AMBIGUOUS)[0]
        raise AmbiguousZero(f"type II sum for ({a},{b}) is ambiguous",
                            witness={"a": int(a), "b": int(b)})
    bad = np.argwhere(v == Verdict.NONZERO)
    witnesses = [{"a": int(a), "b": int(b)} for a, b in bad[:1]]
    return make_report("models.type2", bad.size == 0, ctx, witnesses=witnesses,
                       model=M.label, side=n, constant=n, failures=int(len(bad)))


def _triples(n, exhaustive, samples, seed):
    if exhaustive:
        g = np.indices((n, n, n)).reshape(3, -1).T
        return g
    rng = np.random.default_rng(seed)
    return rng.integers(0, n, size=(samples, 3))


def type3_check(M, ctx, exhaustive=None, samples=10_000, seed=0, chunk=8192):
    """Star-triangle condition with d = +-sqrt(n), trying both signs.

    Exhaustive over all n^3 triples when ``n <= 16`` unless told otherwise.
    """
    kern = ctx.kernel
    n = M.n
    if exhaustive is None:
        exhaustive = n <= 16
    E = _encoded(M, ctx)
    triples = _triples(n, exhaustive, samples, seed)
    results = {}
    for sign in (1, -1):
        d_terms = loop_parameter_terms(ctx, n, sign)
        if d_terms is None:
            raise ValueError(f"cannot represent d with d^2={n} exactly")
        d_codes = kern.encode(np.array([t.a for t in d_terms]), np.array([t.m for t in d_terms]))
        d_w = np.array([-int(t.coef) for t in d_terms], dtype=np.int64)
        fails, amb = [], 0
        for start in range(0, len(triples), chunk):
            tr = triples[start:start + chunk]
            a, b, c = tr[:, 0], tr[:, 1], tr[:, 2]
            lhs = kern.mul(kern.mul(E[a], E[b]), kern.inv(E[c]))  # [t, x]
            q = kern.mul(E[a, b], kern.inv(kern.mul(E[a, c], E[c, b])))  # [t]
            rhs = kern.mul(q[:, None], d_codes[None, :])
            terms = np.concatenate([lhs, rhs], axis=1)
            w = np.concatenate([np.ones(n, dtype=np.int64), d_w])
            v = kern.verdicts(kern.sums(terms, w))
            amb += int(np.count_nonzero(v == Verdict.AMBIGUOUS))
            for idx in np.flatnonzero(v == Verdict.NONZERO)[: max(0, 1 - len(fails))]:
                fails.append([int(x) for x in tr[idx]])
        d_value = sum(ctx.evaluate(t) for t in d_terms)
        results[sign] = {"fails": fails, "ambiguous": amb, "d": d_value}
    amb_total = sum(r["ambiguous"] for r in results.values())
    passing = [s for s, r in results.items() if not r["fails"] and not r["ambiguous"]]
    if amb_total and not passing:
        raise AmbiguousZero("type III sums are ambiguous for both signs of d",
                            witness={"ambiguous": amb_total})
    witnesses = [] if passing else [{"sign": s, "triple": r["fails"][0]}
                                    for s, r in results.items() if r["fails"]]
    return make_report(
        "models.type3", bool(passing), ctx, witnesses=witnesses,
        model=M.label, side=n, exhaustive=bool(exhaustive), triples=int(len(triples)),
        signs_passing=passing,
        d_values={str(s): round(r["d"].real, 12) for s, r in results.items()},
        working_d=round(results[passing[0]]["d"].real, 12) if passing else None,
    )


# ---------------------------------------------------------------------------
# gauge equivalences
# ---------------------------------------------------------------------------

def _diag(blocks, k, label=None):
    """Block-diagonal gauge matrix from four scalar multipliers."""
    n = 4 * k
    out = np.empty((n, n), dtype=object)
    out[...] = 0
    for b, c in enumerate(blocks):
        for x in range(k):
            out[b * k + x, b * k + x] = c
    return SpinMatrix(out, label)


def gauge_D(ctx):
    """D = blockdiag(I, I, iI, iI) with i = -xi^2."""
    one = Monomial.one()
    return _diag([one, one, ctx.i_mono, ctx.i_mono], ctx.k, label="D")


def _swap01(ctx, tail):
    k = ctx.k
    n = 4 * k
    out = np.empty((n, n), dtype=object)
    out[...] = 0
    one = Monomial.one()
    for x in range(k):
        out[x, k + x] = one
        out[k + x, x] = one
        out[2 * k + x, 2 * k + x] = tail
        out[3 * k + x, 3 * k + x] = tail
    return SpinMatrix(out, label="swap")


def gauge_identity_check(kind, H, ctx):
    """Verify the diagonal/permutation gauge relating a model to its normalized form.

    ``kind`` is ``"W"`` (the omega^2 = 1 or omega^2 = -1 display, chosen from
    the context), ``"Wp"`` for W~' = D3 W' D4, or ``"WpT"`` for the
    transpose identity W~'^T = diag(I, -xi^-1 I) W' diag(I, -xi I).
    """
    one = Monomial.one()
    if kind == "W":
        w = ctx.omega_mono
        left = _diag([one, one, w, w], ctx.k)
        if ctx.omega % 2 == 0:
            right = _diag([one, one, w.inv(), w.inv()], ctx.k)
            case = "omega^2=1"
        else:
            right = _swap01(ctx, w.inv())
            case = "omega^2=-1"
        source, target = build_model("W", H, ctx), build_model("Wt", H, ctx)
    elif kind == "Wp":
        x = ctx.xi_mono
        left = _diag([one, one, x, x], ctx.k)
        right = _diag([one, one, x.inv(), x.inv()], ctx.k)
        case = "xi"
        source, target = build_model("Wp", H, ctx), build_model("Wtp", H, ctx)
    elif kind == "WpT":
        x = ctx.xi_mono
        left = _diag([one, one, -x.inv(), -x.inv()], ctx.k)
        right = _diag([one, one, -x, -x], ctx.k)
        case = "transpose"
        source, target = build_model("Wp", H, ctx), transpose(build_model("Wtp", H, ctx))
    else:
        raise ValueError(f"unknown gauge identity {kind!r}")
    product = matmul(matmul(left, source, ctx), right, ctx)
    bad = first_mismatch(product, target, ctx)
    if bad is not None:
        raise IdentityFailed(f"gauge identity {kind} ({case}) fails at entry {bad}",
                             witness={"identity": kind, "case": case, "entry": list(bad)})
    return make_report(f"models.gauge.{kind}", True, ctx, case=case)


def is_symmetric(M):
    return all(M[i, j] == M[j, i] for i in range(M.n) for j in range(i + 1, M.n))


def asymmetry_witness(M):
    for i in range(M.n):
        for j in range(i + 1, M.n):
            if M[i, j] != M[j, i]:
                return (i, j)
    return None

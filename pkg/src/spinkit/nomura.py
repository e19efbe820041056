"""Nomura algebras via connected components of the Y-vector graph.

For a type II matrix M on n points, Y_ab(x) = M(x,a)/M(x,b).  Two ordered
pairs are adjacent when the Hermitian product of their Y-vectors is nonzero,
and the indicator matrices of the connected components form a basis of the
Nomura algebra of M^T.  :func:`membership_test` checks the eigenvector
definition directly and shares no code path with the component computation
beyond the entry encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousEdge, AmbiguousZero, LemmaFailed, NonInvertibleEntry
from .linalg import transpose
from .models import build_model
from .numbers import Monomial, Verdict
from .report import make_report
from .schemes import build_relations, points

_CHUNK_TERMS = 1 << 21


class UnionFind:
    """Disjoint sets over 0..size-1 with path compression and union by size."""

    def __init__(self, size):
        self.parent = np.arange(size, dtype=np.int64)
        self.rank = np.ones(size, dtype=np.int64)
        self.components = size

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return int(root)

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.rank[ra] += self.rank[rb]
        self.components -= 1
        return True

    def roots(self):
        """Root of every element, compressing all paths as a side effect."""
        r = self.parent
        while True:
            nxt = r[r]
            if np.array_equal(nxt, r):
                break
            r = nxt
        self.parent = r.copy()
        return r


@dataclass
class YTable:
    n: int
    a8: np.ndarray  # [pair, x], pair = a*n + b
    m: np.ndarray

    def vector(self, a, b):
        p = a * self.n + b
        return [Monomial.make(1, int(s), int(t)) for s, t in zip(self.a8[p], self.m[p])]

    def encoded(self, ctx):
        return ctx.kernel.encode(self.a8, self.m)


def y_table(M):
    try:
        A8, Mu = M.unit_codes()
    except ValueError as exc:
        raise NonInvertibleEntry(str(exc)) from None
    n = M.n
    # Y_ab(x) = M(x,a) / M(x,b): index [a, b, x]
    a8 = (A8.T[:, None, :] - A8.T[None, :, :]) % 8
    mu = Mu.T[:, None, :] - Mu.T[None, :, :]
    return YTable(n, a8.reshape(n * n, n), mu.reshape(n * n, n))


@dataclass
class PairPartition:
    n: int
    labels: np.ndarray  # canonical label (smallest member) of every pair
    evaluated: int = 0
    ambiguous: int = 0
    merges: int = 0

    @classmethod
    def from_roots(cls, n, roots, **stats):
        P = n * n
        smallest = np.full(P, P, dtype=np.int64)
        np.minimum.at(smallest, roots, np.arange(P))
        return cls(n, smallest[roots], **stats)

    @classmethod
    def from_matrices(cls, mats):
        mats = [np.asarray(m) for m in mats if np.asarray(m).sum()]
        n = mats[0].shape[0]
        roots = np.full(n * n, -1, dtype=np.int64)
        for i, m in enumerate(mats):
            roots[np.flatnonzero(m.ravel())] = i
        if np.any(roots < 0):
            raise ValueError("matrices do not cover every pair")
        return cls.from_roots(n, roots)

    @property
    def class_labels(self):
        return np.unique(self.labels)

    @property
    def dimension(self):
        return len(self.class_labels)

    def classes(self):
        return [np.flatnonzero(self.labels == lab) for lab in self.class_labels]

    @property
    def sizes(self):
        return [int(np.count_nonzero(self.labels == lab)) for lab in self.class_labels]

    def representatives(self):
        return [divmod(int(lab), self.n) for lab in self.class_labels]

    def matrices(self):
        return [(self.labels == lab).reshape(self.n, self.n).astype(np.int64)
                for lab in self.class_labels]

    def __eq__(self, other):
        return (isinstance(other, PairPartition) and self.n == other.n
                and np.array_equal(self.labels, other.labels))

    __hash__ = None


def _decode(p, n):
    return divmod(int(p), n)


def nomura_graph(M, ctx, skip_connected=True):
    """Connected components of the Y-vector graph of M.

    With ``skip_connected`` a candidate edge is evaluated only while its
    endpoints lie in different components; extra edges can never split a
    component, so the partition is unchanged.  Ambiguous zero tests are
    tolerated only if the definite edges already join their endpoints.
    """
    kern = ctx.kernel
    Y = y_table(M)
    n = Y.n
    P = n * n
    enc = Y.encoded(ctx)
    conj = kern.conj(enc)
    uf = UnionFind(P)
    evaluated = 0
    merges = 0
    amb_edges = []
    rows_per_chunk = max(1, _CHUNK_TERMS // max(n, 1))
    for p in range(P - 1):
        if skip_connected:
            roots = uf.roots()
            cand = np.flatnonzero(roots[p + 1:] != roots[p]) + p + 1
        else:
            cand = np.arange(p + 1, P)
        for start in range(0, cand.size, rows_per_chunk):
            qs = cand[start:start + rows_per_chunk]
            terms = kern.mul(enc[p][None], conj[qs])
            v = kern.verdicts(kern.sums(terms))
            evaluated += qs.size
            for q in qs[v == Verdict.NONZERO]:
                merges += uf.union(p, int(q))
            for q in qs[v == Verdict.AMBIGUOUS]:
                amb_edges.append((p, int(q)))
    roots = uf.roots()
    unresolved = [(p, q) for p, q in amb_edges if roots[p] != roots[q]]
    if unresolved:
        p, q = unresolved[0]
        raise AmbiguousEdge(
            f"zero test for pairs {_decode(p, n)} ~ {_decode(q, n)} is ambiguous",
            witness={"pair": list(_decode(p, n)), "other": list(_decode(q, n)),
                     "unresolved": len(unresolved), "ambiguous": len(amb_edges)},
        )
    return PairPartition.from_roots(n, roots, evaluated=evaluated, ambiguous=len(amb_edges),
                                    merges=merges)


@dataclass
class NomuraResult:
    partition: PairPartition
    basis: list = field(repr=False)
    orientation: str = "components of the graph of M^T"

    @property
    def dimension(self):
        return len(self.basis)

    @property
    def ambiguity_count(self):
        return self.partition.ambiguous

    @property
    def sizes(self):
        return self.partition.sizes


def nomura_algebra(M, ctx, skip_connected=True):
    """Basis of N(M): the components of the graph built from M^T."""
    part = nomura_graph(transpose(M), ctx, skip_connected=skip_connected)
    return NomuraResult(part, part.matrices())


# ---------------------------------------------------------------------------
# eigenvector definition
# ---------------------------------------------------------------------------

def membership_test(candidate, M, ctx, chunk_pairs=None):
    """Check that every Y_ab of M is an eigenvector of an integer matrix.

    theta is read at coordinate 0 (all Y entries are nonzero), and
    ``C Y - theta Y`` must vanish identically.
    """
    C = np.asarray(candidate.to_int() if hasattr(candidate, "to_int") else candidate,
                   dtype=np.int64)
    kern = ctx.kernel
    Y = y_table(M)
    n = Y.n
    if C.shape != (n, n):
        raise ValueError(f"candidate shape {C.shape} does not match side {n}")
    enc = Y.encoded(ctx)
    weights = np.concatenate([C, -np.broadcast_to(C[0], (n, n))], axis=1)  # [x, 2n]
    if chunk_pairs is None:
        chunk_pairs = max(1, _CHUNK_TERMS // (2 * n * n))
    failures, amb = [], 0
    for start in range(0, n * n, chunk_pairs):
        Yc = enc[start:start + chunk_pairs]  # [p, y]
        scale = kern.mul(Yc, kern.inv(Yc[:, :1]))  # Y(x)/Y(0), [p, x]
        t1 = np.broadcast_to(Yc[:, None], (Yc.shape[0], n) + Yc.shape[1:])
        t2 = kern.mul(Yc[:, None], scale[:, :, None] if scale.ndim == 2 else scale[:, :, None, :])
        terms = np.concatenate([t1, t2], axis=2)
        v = kern.verdicts(kern.sums(terms, weights))
        amb += int(np.count_nonzero(v == Verdict.AMBIGUOUS))
        bad = np.argwhere(v == Verdict.NONZERO)
        if bad.size and not failures:
            p, x = bad[0]
            failures.append({"pair": list(_decode(start + p, n)), "coordinate": int(x)})
    if amb and not failures:
        raise AmbiguousZero("eigenvector test is ambiguous", witness={"ambiguous": amb})
    return make_report("nomura.membership", not failures, ctx, witnesses=failures,
                       pairs=n * n, side=n)


# ---------------------------------------------------------------------------
# supporting lemmas for the nonsymmetric model
# ---------------------------------------------------------------------------

def _tau_index(k):
    """Global index of (x, tau(alpha)) for every (x, alpha), tau(a1, a2) = (a1, a1 + a2)."""
    x, a1, a2 = points(k)
    return (2 * a1 + ((a1 + a2) % 2)) * k + x


def _pairs(n, sample, rng, universe=None):
    allp = np.arange(n * n) if universe is None else universe
    if sample is None or sample >= allp.size:
        return allp
    return rng.choice(allp, size=sample, replace=False)


def _fail(lemma, msg, witness):
    raise LemmaFailed(f"Lemma {lemma}: {msg}", witness={"lemma": lemma, **witness})


def _diag_codes(kern, k, a8_blocks):
    a8 = np.repeat(np.asarray(a8_blocks, dtype=np.int64), k)
    return kern.encode(a8, np.zeros_like(a8))


def lemma2_check(H, ctx, sample=None, seed=0):
    """Y' equals Y, DY or D^-1 Y according to (alpha1, beta1)."""
    kern = ctx.kernel
    k = H.k
    n = 4 * k
    Yt = y_table(build_model("Wt", H, ctx)).encoded(ctx)
    Ytp = y_table(build_model("Wtp", H, ctx)).encoded(ctx)
    i8 = ctx.i_mono.a8
    D = _diag_codes(kern, k, [0, 0, i8, i8])
    Dinv = kern.inv(D)
    one = _diag_codes(kern, k, [0, 0, 0, 0])
    _, a1, _ = points(k)
    pairs = _pairs(n, sample, np.random.default_rng(seed))
    g, h = np.divmod(pairs, n)
    case = np.where(a1[g] == a1[h], 0, np.where(a1[g] == 0, 1, 2))
    factor = np.stack([one, D, Dinv])[case]  # [p, x]
    expected = kern.mul(factor, Yt[pairs])
    terms = np.concatenate([Ytp[pairs][:, :, None], expected[:, :, None]], axis=2)
    v = kern.verdicts(kern.sums(terms, np.array([1, -1])))
    _check_verdicts(2, v, pairs, n)
    return make_report("nomura.lemma2", True, ctx, pairs=int(pairs.size),
                       entries=int(pairs.size * n),
                       cases={str(c): int(np.count_nonzero(case == c)) for c in range(3)})


def _check_verdicts(lemma, v, pairs, n, other=None):
    if np.any(v == Verdict.AMBIGUOUS):
        idx = np.argwhere(v == Verdict.AMBIGUOUS)[0]
        raise AmbiguousZero(f"Lemma {lemma} comparison is ambiguous",
                            witness={"lemma": lemma, "index": idx.tolist()})
    bad = np.argwhere(v == Verdict.NONZERO)
    if bad.size:
        i = bad[0][0]
        w = {"pair": [list(_decode(pairs[i], n) if other is None else _decode(pairs[i], n))]}
        if other is not None:
            w["other"] = list(_decode(other[i], n))
        _fail(lemma, "identity violated", w)


def lemma3_check(H):
    """sigma maps R1 onto R1' and R3 onto R3'."""
    k = H.k
    n = 4 * k
    rels = build_relations(H)
    tau = _tau_index(k)
    out = {}
    for src, dst in (("R1", "R1p"), ("R3", "R3p")):
        g, h = np.nonzero(rels[src].matrix)
        image = np.zeros((n, n), dtype=np.int64)
        image[tau[g], h] = 1
        if not np.array_equal(image, rels[dst].matrix):
            cell = np.argwhere(image != rels[dst].matrix)[0]
            _fail(3, f"sigma({src}) != {dst}", {"relation": src, "cell": cell.tolist()})
        out[src] = int(g.size)
    return make_report("nomura.lemma3", True, k=k, images=out)


def lemma4_check(H, ctx, sample=None, seed=0):
    """Y^{tau(alpha) beta}_ab = (-D^2)^{alpha1} Y^{alpha beta}_ab."""
    kern = ctx.kernel
    k = H.k
    n = 4 * k
    Yt = y_table(build_model("Wt", H, ctx)).encoded(ctx)
    tau = _tau_index(k)
    _, a1, _ = points(k)
    negD2 = _diag_codes(kern, k, [4, 4, 0, 0])
    one = _diag_codes(kern, k, [0, 0, 0, 0])
    pairs = _pairs(n, sample, np.random.default_rng(seed))
    g, h = np.divmod(pairs, n)
    lhs = Yt[tau[g] * n + h]
    factor = np.stack([one, negD2])[a1[g]]
    rhs = kern.mul(factor, Yt[pairs])
    terms = np.concatenate([lhs[:, :, None], rhs[:, :, None]], axis=2)
    v = kern.verdicts(kern.sums(terms, np.array([1, -1])))
    _check_verdicts(4, v, pairs, n)
    return make_report("nomura.lemma4", True, ctx, pairs=int(pairs.size),
                       trivial=int(np.count_nonzero(a1[g] == 0)))


def lemma5_check(H, ctx, sample=None, seed=0, chunk=4096):
    """Inner products on R1 u R3 agree up to the sign (-1)^(alpha1 + alpha1')."""
    kern = ctx.kernel
    k = H.k
    n = 4 * k
    rels = build_relations(H)
    Yt = y_table(build_model("Wt", H, ctx)).encoded(ctx)
    Ytp = y_table(build_model("Wtp", H, ctx)).encoded(ctx)
    tau = _tau_index(k)
    _, a1, _ = points(k)
    support = np.flatnonzero((rels["R1"].matrix + rels["R3"].matrix).ravel())
    S = support.size
    rng = np.random.default_rng(seed)
    if sample is None or sample >= S * S:
        idx = np.indices((S, S)).reshape(2, -1).T
    else:
        idx = rng.integers(0, S, size=(sample, 2))
    P1, P2 = support[idx[:, 0]], support[idx[:, 1]]
    total = 0
    for start in range(0, len(P1), chunk):
        p1, p2 = P1[start:start + chunk], P2[start:start + chunk]
        g1, h1 = np.divmod(p1, n)
        g2, h2 = np.divmod(p2, n)
        lhs = kern.mul(Ytp[tau[g1] * n + h1], kern.conj(Ytp[tau[g2] * n + h2]))
        rhs = kern.mul(Yt[p1], kern.conj(Yt[p2]))
        sign = np.where((a1[g1] + a1[g2]) % 2 == 0, 1, -1)
        terms = np.concatenate([lhs, rhs], axis=1)
        w = np.concatenate([np.ones((len(p1), n), dtype=np.int64),
                            -sign[:, None] * np.ones((1, n), dtype=np.int64)], axis=1)
        v = kern.verdicts(kern.sums(terms, w))
        _check_verdicts(5, v, p1, n, other=p2)
        total += len(p1)
    return make_report("nomura.lemma5", True, ctx, pair_pairs=int(total), support=int(S),
                       exhaustive=bool(sample is None or sample >= S * S))


def lemma_checks(H, ctx, sample=None, seed=0):
    """Run Lemmas 2-5; raises LemmaFailed on the first violation."""
    subs = [
        lemma2_check(H, ctx, sample=sample, seed=seed),
        lemma3_check(H),
        lemma4_check(H, ctx, sample=sample, seed=seed),
        lemma5_check(H, ctx, sample=sample, seed=seed),
    ]
    return make_report("nomura.lemmas", True, ctx,
                       lemmas={r.check_id: r.body()["data"] for r in subs})

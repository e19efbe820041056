"""Hadamard graph schemes, the coherent configuration and its rho-fusion.

All relation matrices are 0/1 ``int64`` arrays of side 4k using the index
convention of :mod:`spinkit.linalg`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DefinitionMismatch, FusionMismatch, NotAutomorphism, NotClosed, RuleViolation
from .report import make_report

SYMMETRIC_NAMES = ("R0", "R1", "R2", "R3", "R4")
DIRECTED_NAMES = ("R0", "R1p", "R2", "R3p", "R4")


@dataclass
class Relation:
    name: str
    matrix: np.ndarray
    predicate: str | None = None

    @property
    def size(self):
        return int(self.matrix.sum())


@dataclass
class SchemeSpec:
    relations: list
    identity: int
    transpose: dict
    tensor: np.ndarray = field(repr=False)

    @property
    def names(self):
        return [r.name for r in self.relations]

    @property
    def matrices(self):
        return [r.matrix for r in self.relations]

    @property
    def rank(self):
        return len(self.relations)


def _blocks(grid, k):
    out = np.zeros((4 * k, 4 * k), dtype=np.int64)
    for i, row in enumerate(grid):
        for j, b in enumerate(row):
            if b is not None:
                out[i * k:(i + 1) * k, j * k:(j + 1) * k] = b
    return out


def build_distance_matrices(H):
    """A0..A4 of the Hadamard graph plus A1' and A3' = A1'^T of the directed one."""
    k = H.k
    S = H.signs
    I = np.eye(k, dtype=np.int64)
    J = np.ones((k, k), dtype=np.int64)
    P, M = (J + S) // 2, (J - S) // 2
    Pt, Mt = (J + S.T) // 2, (J - S.T) // 2
    O = None
    A1 = _blocks([[O, O, P, M], [O, O, M, P], [Pt, Mt, O, O], [Mt, Pt, O, O]], k)
    A3 = _blocks([[O, O, M, P], [O, O, P, M], [Mt, Pt, O, O], [Pt, Mt, O, O]], k)
    A1p = _blocks([[O, O, P, M], [O, O, M, P], [Mt, Pt, O, O], [Pt, Mt, O, O]], k)
    JI = J - I
    A2 = _blocks([[JI, JI, O, O], [JI, JI, O, O], [O, O, JI, JI], [O, O, JI, JI]], k)
    A4 = _blocks([[O, I, O, O], [I, O, O, O], [O, O, O, I], [O, O, I, O]], k)
    return {
        "A0": np.eye(4 * k, dtype=np.int64),
        "A1": A1,
        "A2": A2,
        "A3": A3,
        "A4": A4,
        "A1p": A1p,
        "A3p": A1p.T.copy(),
    }


def points(k):
    """(x, alpha1, alpha2) for every global index."""
    g = np.arange(4 * k)
    blk, x = np.divmod(g, k)
    return x, blk >> 1, blk & 1


def _predicates(H):
    k = H.k
    S = H.signs
    x, a1, a2 = points(k)
    a, b = x[:, None], x[None, :]
    al1, be1 = a1[:, None], a1[None, :]
    parity = (a2[:, None] + a2[None, :]) % 2
    sgn = 1 - 2 * parity  # (-1)^(alpha2+beta2)
    Hab = S[a, b]
    Hba = S[b, a]
    up = (al1 == 0) & (be1 == 1)
    down = (al1 == 1) & (be1 == 0)
    same = al1 == be1
    return {
        "R0": (a == b) & (a1[:, None] == a1[None, :]) & (a2[:, None] == a2[None, :]),
        "R1": (up & (Hab == sgn)) | (down & (Hba == sgn)),
        "R2": same & (a != b),
        "R3": (up & (Hab == -sgn)) | (down & (Hba == -sgn)),
        "R4": (a == b) & same & (parity == 1),
        "R1p": (up & (Hab == sgn)) | (down & (Hba == -sgn)),
        "R3p": (up & (Hab == -sgn)) | (down & (Hba == sgn)),
    }


_MATRIX_OF = {"R0": "A0", "R1": "A1", "R2": "A2", "R3": "A3", "R4": "A4",
              "R1p": "A1p", "R3p": "A3p"}


def build_relations(H):
    """Relations from their set-builder predicates, cross-checked against the block matrices."""
    mats = build_distance_matrices(H)
    rels = {}
    for name, mask in _predicates(H).items():
        R = mask.astype(np.int64)
        A = mats[_MATRIX_OF[name]]
        if not np.array_equal(R, A):
            i, j = np.argwhere(R != A)[0]
            raise DefinitionMismatch(
                f"{name} disagrees with {_MATRIX_OF[name]} at ({i},{j})",
                witness={"relation": name, "pair": [int(i), int(j)]},
            )
        rels[name] = Relation(name, R, predicate=name)
    return rels


def symmetric_family(H):
    rels = build_relations(H)
    return [rels[n] for n in SYMMETRIC_NAMES]


def directed_family(H):
    rels = build_relations(H)
    return [rels[n] for n in DIRECTED_NAMES]


def _as_matrices(relations):
    return [r.matrix if isinstance(r, Relation) else np.asarray(r, dtype=np.int64)
            for r in relations]


def structure_constants(mats):
    """p[i][j][l] with A_i A_j = sum_l p_ij^l A_l, or raise NotClosed.

    Each constant is read off the first cell of class l and then checked on
    the whole class; empty classes get 0.
    """
    r = len(mats)
    masks = [m.astype(bool) for m in mats]
    p = np.zeros((r, r, r), dtype=np.int64)
    for i in range(r):
        for j in range(r):
            prod = mats[i] @ mats[j]
            for l in range(r):
                vals = prod[masks[l]]
                if vals.size == 0:
                    continue
                if np.any(vals != vals[0]):
                    cell = np.argwhere(masks[l] & (prod != vals[0]))[0]
                    raise NotClosed(
                        f"A{i}A{j} is not constant on class {l}",
                        witness={"i": i, "j": j, "class": l, "cell": cell.tolist(),
                                 "residual": int(prod[tuple(cell)] - vals[0])},
                    )
                p[i, j, l] = vals[0]
    return p


def _partition_ok(mats):
    total = sum(mats)
    return np.array_equal(total, np.ones_like(total))


def _transpose_map(mats):
    tmap = {}
    for i, m in enumerate(mats):
        hits = [j for j, n in enumerate(mats) if np.array_equal(m.T, n)]
        if not hits:
            return None, i
        tmap[i] = hits[0]
    return tmap, None


def scheme_check(relations):
    """Verify the association-scheme axioms; returns ``(report, SchemeSpec)``.

    Empty relations (e.g. A2 when k=1) are dropped before checking.
    """
    rels = [r if isinstance(r, Relation) else Relation(f"C{i}", np.asarray(r, dtype=np.int64))
            for i, r in enumerate(relations)]
    dropped = [r.name for r in rels if r.size == 0]
    rels = [r for r in rels if r.size > 0]
    mats = _as_matrices(rels)
    n = mats[0].shape[0]
    if not _partition_ok(mats):
        raise NotClosed("relations do not partition the square", witness={"axiom": "partition"})
    ident = [i for i, m in enumerate(mats) if np.array_equal(m, np.eye(n, dtype=np.int64))]
    if not ident:
        raise NotClosed("no relation equals the identity", witness={"axiom": "identity"})
    tmap, bad = _transpose_map(mats)
    if tmap is None:
        raise NotClosed(f"transpose of {rels[bad].name} is not a relation",
                        witness={"axiom": "transpose", "relation": rels[bad].name})
    p = structure_constants(mats)
    spec = SchemeSpec(rels, ident[0], tmap, p)
    report = make_report(
        "scheme.check", True, k=n // 4,
        names=spec.names, dropped_empty=dropped, rank=spec.rank,
        valencies=[int(m[0].sum()) for m in mats], transpose=tmap, p=p,
    )
    return report, spec


# ---------------------------------------------------------------------------
# coherent configuration
# ---------------------------------------------------------------------------

CC_LABELS = [(i, lam) for lam in (0, 1) for i in range(5)]


def configuration_relations(H):
    """The ten relations R_i^lambda = R_i restricted to rows in fiber Z_lambda."""
    fam = symmetric_family(H)
    _, a1, _ = points(H.k)
    out = {}
    for lam in (0, 1):
        rows = (a1 == lam)[:, None]
        for i, R in enumerate(fam):
            out[(i, lam)] = R.matrix * rows
    return out


def coherent_config_check(H):
    """Check the fiber product rule and the coherent-configuration axioms."""
    k = H.k
    p5 = structure_constants(_as_matrices(symmetric_family(H)))
    cc = configuration_relations(H)
    _, a1, _ = points(k)
    # fibers: identity is the union of the two fiber diagonals
    for lam in (0, 1):
        diag = np.diag((a1 == lam).astype(np.int64))
        if not np.array_equal(cc[(0, lam)], diag):
            raise RuleViolation(f"R_0^{lam} is not the diagonal of Z_{lam}",
                                witness={"axiom": "fiber", "lambda": lam})
    checked = 0
    for (i, lam) in CC_LABELS:
        for (j, mu) in CC_LABELS:
            lhs = cc[(i, lam)] @ cc[(j, mu)]
            rhs = np.zeros_like(lhs)
            if (i + lam) % 2 == mu:
                for l in range(5):
                    if (l - i - j) % 2 == 0:
                        rhs += p5[i, j, l] * cc[(l, lam)]
            if not np.array_equal(lhs, rhs):
                cell = np.argwhere(lhs != rhs)[0]
                raise RuleViolation(
                    f"product rule fails for R_{i}^{lam} R_{j}^{mu}",
                    witness={"i": i, "lambda": lam, "j": j, "mu": mu, "cell": cell.tolist()},
                )
            checked += 1
    mats = [cc[lab] for lab in CC_LABELS]
    for idx, m in enumerate(mats):
        if m.sum() and not any(np.array_equal(m.T, o) for o in mats):
            raise RuleViolation("configuration is not transpose closed",
                                witness={"relation": CC_LABELS[idx]})
    p10 = structure_constants(mats)
    report = make_report("scheme.coherent_config", True, k=k, rule_checks=checked,
                         labels=CC_LABELS, p=p10)
    return report, p10


def rho(label):
    i, d = label
    if i == 1:
        return (3, 1 - d)
    if i == 3:
        return (1, 1 - d)
    return (i, 1 - d)


def rho_automorphism_check(H):
    _, p10 = coherent_config_check(H)
    pos = {lab: n for n, lab in enumerate(CC_LABELS)}
    perm = [pos[rho(lab)] for lab in CC_LABELS]
    for s in range(10):
        if perm[perm[s]] != s:
            raise NotAutomorphism("rho is not an involution", witness={"relation": CC_LABELS[s]})
    triples = 0
    for s in range(10):
        for t in range(10):
            for u in range(10):
                if p10[perm[s], perm[t], perm[u]] != p10[s, t, u]:
                    raise NotAutomorphism(
                        "structure constant not preserved",
                        witness={"S": CC_LABELS[s], "T": CC_LABELS[t], "U": CC_LABELS[u],
                                 "p": int(p10[s, t, u]),
                                 "p_rho": int(p10[perm[s], perm[t], perm[u]])},
                    )
                triples += 1
    return make_report("scheme.rho_automorphism", True, k=H.k, triples=triples,
                       permutation={str(CC_LABELS[s]): list(CC_LABELS[perm[s]]) for s in range(10)})


def rho_orbits():
    seen, orbits = set(), []
    for lab in CC_LABELS:
        if lab in seen:
            continue
        orb = [lab]
        nxt = rho(lab)
        while nxt != lab:
            orb.append(nxt)
            nxt = rho(nxt)
        seen.update(orb)
        orbits.append(orb)
    return orbits


_ORBIT_NAME = {(0, 0): "R0", (1, 0): "R1p", (2, 0): "R2", (1, 1): "R3p", (4, 0): "R4"}


def fuse_rho_orbits(H):
    """Union the rho-orbits and compare with the directed Hadamard scheme."""
    rho_automorphism_check(H)
    cc = configuration_relations(H)
    rels = build_relations(H)
    fused = []
    for orb in rho_orbits():
        name = _ORBIT_NAME[min(orb)]
        mat = sum(cc[lab] for lab in orb)
        if not np.array_equal(mat, rels[name].matrix):
            raise FusionMismatch(f"orbit {orb} does not fuse to {name}",
                                 witness={"orbit": orb, "expected": name})
        fused.append(Relation(name, mat, predicate=f"fusion{orb}"))
    order = {n: i for i, n in enumerate(DIRECTED_NAMES)}
    fused.sort(key=lambda r: order[r.name])
    _, spec = scheme_check(fused)
    return spec


def cyclic_scheme(n):
    """Group scheme of Z/nZ: the powers of the n-cycle permutation matrix."""
    if n < 1:
        raise ValueError("n must be positive")
    P = np.roll(np.eye(n, dtype=np.int64), 1, axis=1)
    mats, cur = [], np.eye(n, dtype=np.int64)
    for _ in range(n):
        mats.append(cur)
        cur = cur @ P
    rels = [Relation(f"P{i}", m) for i, m in enumerate(mats)]
    _, spec = scheme_check(rels)
    return spec


def same_family(fam1, fam2):
    """Equality of two relation families as unordered sets of 0/1 matrices."""
    m1 = sorted(m.tobytes() for m in _as_matrices(fam1) if m.sum())
    m2 = sorted(m.tobytes() for m in _as_matrices(fam2) if m.sum())
    return m1 == m2

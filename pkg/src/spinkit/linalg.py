"""Dense matrices over spin-model scalars.

Rows and columns of the 4k x 4k matrices are indexed by X x (Z/2Z)^2 with
global index ``(2*alpha1 + alpha2) * k + x``, so the four k x k diagonal
blocks are the fibers X x {(0,0)}, X x {(0,1)}, X x {(1,0)}, X x {(1,1)}.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ShapeMismatch
from .numbers import LaurentScalar, Monomial, Verdict, format_scalar, parse_scalar


def index4k(x, alpha1, alpha2, k):
    return (2 * alpha1 + alpha2) * k + x


def split_index(g, k):
    """Inverse of :func:`index4k`: returns ``(x, alpha1, alpha2)``."""
    blk, x = divmod(g, k)
    return x, blk >> 1, blk & 1


def _as_object(arr):
    arr = np.asarray(arr)
    if arr.dtype != object:
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = int(v) if isinstance(v, (np.integer, int)) else v
        return out
    return arr


class SpinMatrix:
    """Square matrix of scalars (Monomials, context scalars or integers)."""

    def __init__(self, entries, label=None):
        entries = _as_object(entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ShapeMismatch(f"expected a square matrix, got shape {entries.shape}")
        self.entries = entries
        self.label = label

    @classmethod
    def identity(cls, n, label=None):
        return cls(np.eye(n, dtype=np.int64), label)

    @property
    def n(self):
        return self.entries.shape[0]

    def __getitem__(self, idx):
        return self.entries[idx]

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"<SpinMatrix{tag} n={self.n}>"

    def is_monomial(self):
        return all(isinstance(v, Monomial) for v in self.entries.flat)

    def unit_codes(self):
        """Integer arrays ``(a8, m)`` with entry = zeta_8^a8 * u^m.

        Requires every entry to be a Monomial with coefficient +-1.
        """
        a8 = np.empty((self.n, self.n), dtype=np.int64)
        m = np.empty((self.n, self.n), dtype=np.int64)
        for (i, j), v in np.ndenumerate(self.entries):
            if not isinstance(v, Monomial) or not v.is_unit:
                raise ValueError(f"entry ({i},{j}) = {v!r} is not a unit monomial")
            a8[i, j] = v.a8
            m[i, j] = v.m
        return a8, m

    def embed(self, ctx):
        out = np.empty(self.entries.shape, dtype=object)
        for idx, v in np.ndenumerate(self.entries):
            out[idx] = ctx.embed(v)
        return SpinMatrix(out, self.label)

    def block(self, i, j, k):
        return SpinMatrix(self.entries[i * k:(i + 1) * k, j * k:(j + 1) * k])

    @property
    def T(self):
        return transpose(self)

    def to_int(self):
        return np.array([[int(v) for v in row] for row in self.entries], dtype=np.int64)

    def __eq__(self, other):
        if not isinstance(other, SpinMatrix) or other.n != self.n:
            return False
        return all(a == b for a, b in zip(self.entries.flat, other.entries.flat))

    __hash__ = None

    # -- dump format ------------------------------------------------------
    def to_json(self):
        rows = [[format_scalar(v) for v in row] for row in self.entries]
        return json.dumps({"n": self.n, "rows": rows}, sort_keys=True)

    @classmethod
    def from_json(cls, text, k=None, label=None):
        obj = json.loads(text)
        n = obj["n"]
        rows = obj["rows"]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ShapeMismatch("row count does not match n")
        out = np.empty((n, n), dtype=object)
        for i, row in enumerate(rows):
            for j, s in enumerate(row):
                out[i, j] = parse_scalar(s, k)
        return cls(out, label)


def block4(blocks, label=None):
    """Assemble a 4k x 4k matrix from a 4 x 4 grid of k x k blocks.

    ``None`` stands for a zero block.
    """
    if len(blocks) != 4 or any(len(r) != 4 for r in blocks):
        raise ShapeMismatch("block4 needs a 4 x 4 grid")
    k = None
    for row in blocks:
        for b in row:
            if b is not None:
                shape = _entries(b).shape
                if len(shape) != 2 or shape[0] != shape[1]:
                    raise ShapeMismatch(f"non-square block of shape {shape}")
                if k is None:
                    k = shape[0]
                elif shape[0] != k:
                    raise ShapeMismatch(f"block sizes {k} and {shape[0]} differ")
    if k is None:
        raise ShapeMismatch("all blocks are empty")
    out = np.empty((4 * k, 4 * k), dtype=object)
    out[...] = 0
    for i, row in enumerate(blocks):
        for j, b in enumerate(row):
            if b is not None:
                out[i * k:(i + 1) * k, j * k:(j + 1) * k] = _entries(b)
    return SpinMatrix(out, label)


def _entries(m):
    if isinstance(m, SpinMatrix):
        return m.entries
    return _as_object(m)


def _lift(A, ctx):
    if ctx is None:
        return A.entries
    return A.embed(ctx).entries


def matmul(A, B, ctx=None):
    if A.n != B.n:
        raise ShapeMismatch(f"cannot multiply {A.n}x{A.n} by {B.n}x{B.n}")
    return SpinMatrix(np.matmul(_lift(A, ctx), _lift(B, ctx)))


def transpose(A):
    return SpinMatrix(A.entries.T.copy(), A.label)


def conj_transpose(A, ctx):
    out = np.empty(A.entries.shape, dtype=object)
    for (i, j), v in np.ndenumerate(A.entries):
        out[j, i] = ctx.conj(v)
    return SpinMatrix(out)


def lincomb(coeffs, matrices, ctx=None):
    """Sum of ``c * M`` with scalar coefficients and matrices of equal size."""
    if len(coeffs) != len(matrices) or not matrices:
        raise ShapeMismatch("coefficient and matrix counts differ")
    n = _entries(matrices[0]).shape[0]
    total = None
    for c, M in zip(coeffs, matrices):
        E = _entries(M)
        if E.shape != (n, n):
            raise ShapeMismatch("matrices in a linear combination must share a shape")
        c = ctx.embed(c) if ctx is not None else c
        term = np.empty((n, n), dtype=object)
        for idx, v in np.ndenumerate(E):
            term[idx] = c * (ctx.embed(v) if ctx is not None and isinstance(v, Monomial) else v)
        total = term if total is None else total + term
    return SpinMatrix(total)


def matrices_equal(A, B, ctx=None):
    """Entry-wise canonical equality, embedding Monomials when ``ctx`` is given."""
    if A.n != B.n:
        return False
    if ctx is None:
        return A == B
    return first_mismatch(A, B, ctx) is None


def first_mismatch(A, B, ctx=None):
    EA = _lift(A, ctx)
    EB = _lift(B, ctx)
    for idx in np.ndindex(EA.shape):
        if not _same(EA[idx], EB[idx], ctx):
            return idx
    return None


def _same(x, y, ctx):
    if x == y:
        return True
    # floating values only agree up to the context tolerance
    if ctx is not None and ctx.backend == "numeric":
        return ctx.is_zero(x - y) == Verdict.ZERO
    return False


def support(A):
    """0/1 integer matrix marking nonzero entries."""
    out = np.zeros(A.entries.shape, dtype=np.int64)
    for idx, v in np.ndenumerate(A.entries):
        if isinstance(v, Monomial):
            out[idx] = 1
        elif isinstance(v, LaurentScalar):
            out[idx] = 0 if v.is_identically_zero() else 1
        else:
            out[idx] = 0 if v == 0 else 1
    return out


def support_equal(A, B):
    return np.array_equal(support(A) if isinstance(A, SpinMatrix) else np.asarray(A) != 0,
                          support(B) if isinstance(B, SpinMatrix) else np.asarray(B) != 0)


def hermitian_ip(T, T2, ctx):
    """``sum_x T(x) * conj(T2(x))`` in the context's scalar ring."""
    if len(T) != len(T2):
        raise ShapeMismatch(f"vector lengths {len(T)} and {len(T2)} differ")
    total = ctx.zero()
    for x, y in zip(T, T2):
        total = total + ctx.embed(x) * ctx.conj(y)
    return total


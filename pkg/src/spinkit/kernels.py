"""Batched zero tests over sums of unit monomials.

The pair sweeps (type II/III conditions, Nomura graph, membership, lemma
checks) only ever sum products of entries of the form ``zeta_8^a * u^m``.
Each backend encodes such an entry as a small integer record and reduces a
whole batch of sums to canonical form with ``numpy.bincount`` plus one integer
matrix product, so the per-sum cost is a handful of array operations.

The object-level scalars in :mod:`spinkit.numbers` compute the same canonical
forms term by term; the tests cross-check the two routes.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

from .numbers import (
    CycScalar,
    LaurentScalar,
    U_WINDOW,
    Verdict,
    cyclotomic_power_table,
    phi,
    u_reduction,
)

_FLOAT_SLACK = 1e-12


def _grouped(terms_shape, weights, trailing=0):
    lead = terms_shape[: len(terms_shape) - 1 - trailing]
    T = terms_shape[len(terms_shape) - 1 - trailing]
    G = int(np.prod(lead)) if lead else 1
    if weights is not None:
        weights = np.broadcast_to(weights, tuple(lead) + (T,)).reshape(G, T)
    return lead, G, T, weights


def _bincount(idx, weights, size):
    if weights is None:
        return np.bincount(idx.ravel(), minlength=size)
    w = np.asarray(weights, dtype=np.float64).ravel()
    return np.rint(np.bincount(idx.ravel(), weights=w, minlength=size)).astype(np.int64)


class CyclotomicKernel:
    """Entries are exponents t with the entry equal to zeta_N^t."""

    name = "cyclotomic"

    def __init__(self, ctx):
        self.ctx = ctx
        self.N = ctx.N
        self.e = ctx.u_root_exponent
        self.table = np.array(cyclotomic_power_table(self.N), dtype=np.int64)

    def encode(self, a8, m):
        a8 = np.asarray(a8, dtype=np.int64)
        m = np.asarray(m, dtype=np.int64)
        return (a8 * (self.N // 8) + self.e * m) % self.N

    def mul(self, x, y):
        return (x + y) % self.N

    def inv(self, x):
        return (-x) % self.N

    conj = inv

    def sums(self, terms, weights=None):
        terms = np.asarray(terms)
        lead, G, T, w = _grouped(terms.shape, weights)
        idx = np.arange(G, dtype=np.int64)[:, None] * self.N + terms.reshape(G, T)
        counts = _bincount(idx, w, G * self.N).reshape(G, self.N)
        return (counts @ self.table).reshape(tuple(lead) + (phi(self.N),))

    def verdicts(self, canon):
        nz = np.any(canon != 0, axis=-1)
        return np.where(nz, Verdict.NONZERO, Verdict.ZERO).astype(np.int8)

    def to_scalar(self, row):
        return CycScalar(self.N, [int(c) for c in row])


class LaurentKernel:
    """Entries are pairs (a8, m) meaning zeta_8^a8 * u^m with u real."""

    name = "laurent_hybrid"
    WIDTH = U_WINDOW[1] - U_WINDOW[0] + 1

    def __init__(self, ctx):
        self.ctx = ctx
        self.k = ctx.k
        lo, hi = U_WINDOW
        z8 = np.exp(1j * np.pi / 4)
        u = ctx.u_value.real
        self.basis = np.array([z8**a * u**j for a in range(4) for j in range(lo, hi + 1)])
        self._mp_basis = None
        self._tables = {}
        # at k=4 the dominant root is exactly u=1, so rows can be evaluated in Q(zeta_8)
        self.exact_unit = ctx.k == 4

    def encode(self, a8, m):
        a8 = np.asarray(a8, dtype=np.int64) % 8
        m = np.asarray(m, dtype=np.int64)
        return np.stack(np.broadcast_arrays(a8, m), axis=-1)

    def mul(self, x, y):
        out = x + y
        out[..., 0] %= 8
        return out

    def inv(self, x):
        out = -x
        out[..., 0] %= 8
        return out

    def conj(self, x):
        out = x.copy()
        out[..., 0] = (-out[..., 0]) % 8
        return out

    def _table(self, mlo, mhi):
        key = (mlo, mhi)
        if key not in self._tables:
            lo, _ = U_WINDOW
            tab = np.zeros((mhi - mlo + 1, self.WIDTH), dtype=np.int64)
            for r, m in enumerate(range(mlo, mhi + 1)):
                for j, c in u_reduction(self.k, m):
                    tab[r, j - lo] = c
            self._tables[key] = tab
        return self._tables[key]

    def sums(self, terms, weights=None):
        terms = np.asarray(terms)
        lead, G, T, w = _grouped(terms.shape, weights, trailing=1)
        t = terms.reshape(G, T, 2)
        a8 = t[..., 0] % 8
        m = t[..., 1]
        mlo, mhi = (int(m.min()), int(m.max())) if m.size else (0, 0)
        M = mhi - mlo + 1
        sign = np.where(a8 >= 4, -1, 1)
        w = sign if w is None else sign * w
        idx = (np.arange(G, dtype=np.int64)[:, None] * (4 * M) + (a8 % 4) * M + (m - mlo))
        counts = _bincount(idx, w, G * 4 * M).reshape(G, 4, M)
        canon = counts @ self._table(mlo, mhi)
        return canon.reshape(tuple(lead) + (4 * self.WIDTH,))

    def _mp_values(self):
        if self._mp_basis is None:
            lo, hi = U_WINDOW
            with mpmath.workdps(self.ctx.precision):
                z8 = mpmath.expjpi(mpmath.mpf(1) / 4)
                u = self.ctx.u_mp
                self._mp_basis = [z8**a * u**j for a in range(4) for j in range(lo, hi + 1)]
        return self._mp_basis

    def verdicts(self, canon):
        flat = canon.reshape(-1, canon.shape[-1])
        out = np.zeros(flat.shape[0], dtype=np.int8)
        if self.exact_unit:
            at_one = flat.reshape(flat.shape[0], 4, self.WIDTH).sum(axis=2)
            out[np.any(at_one != 0, axis=1)] = Verdict.NONZERO
            return out.reshape(canon.shape[:-1])
        nz = np.flatnonzero(np.any(flat != 0, axis=1))
        if nz.size:
            sub = flat[nz].astype(np.float64)
            vals = sub @ self.basis
            bound = _FLOAT_SLACK * (np.abs(sub) @ np.abs(self.basis))
            nterms = np.count_nonzero(flat[nz], axis=1)
            thresh = self.ctx.tolerance * nterms
            sure = np.abs(vals) - bound > thresh
            out[nz[sure]] = Verdict.NONZERO
            for r in nz[~sure]:
                out[r] = self._mp_verdict(flat[r])
        return out.reshape(canon.shape[:-1])

    def _mp_verdict(self, row):
        basis = self._mp_values()
        with mpmath.workdps(self.ctx.precision):
            v = mpmath.fsum(int(c) * b for c, b in zip(row, basis) if c)
            nterms = int(np.count_nonzero(row))
            if abs(v) > self.ctx.tolerance * nterms:
                return Verdict.NONZERO
        return Verdict.AMBIGUOUS

    def to_scalar(self, row):
        lo, _ = U_WINDOW
        terms = {}
        for idx, c in enumerate(row):
            if c:
                a, j = divmod(idx, self.WIDTH)
                terms[(a, j + lo)] = int(c)
        return LaurentScalar._raw(self.k, {key: Fraction(c) for key, c in terms.items()})


class NumericKernel:
    """Entries are complex128 values; zero tests use tolerance bands."""

    name = "numeric"

    def __init__(self, ctx):
        self.ctx = ctx
        self.u = ctx.u_value

    def encode(self, a8, m):
        a8 = np.asarray(a8)
        m = np.asarray(m)
        return np.exp(1j * np.pi * a8 / 4) * np.power(self.u, m.astype(np.float64))

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        return 1 / x

    def conj(self, x):
        return np.conj(x)

    def sums(self, terms, weights=None):
        terms = np.asarray(terms)
        if weights is not None:
            terms = terms * weights
        return terms.sum(axis=-1)[..., None]

    def verdicts(self, canon):
        mag = np.abs(canon[..., 0])
        tol = self.ctx.tolerance
        out = np.full(mag.shape, Verdict.AMBIGUOUS, dtype=np.int8)
        out[mag <= tol] = Verdict.ZERO
        out[mag > math.sqrt(tol)] = Verdict.NONZERO
        return out

    def to_scalar(self, row):
        return complex(row[0])


def make_kernel(ctx):
    if ctx.backend == "cyclotomic":
        return CyclotomicKernel(ctx)
    if ctx.backend == "laurent_hybrid":
        return LaurentKernel(ctx)
    return NumericKernel(ctx)

"""Scalar arithmetic for spin-model entries.

Three representations are used, selected by the backend of a
:class:`ScalarContext`:

* ``cyclotomic``: :class:`CycScalar`, exact elements of Q(zeta_N) for
  N in {8, 16, 24}.  Used when u is itself a root of unity.
* ``laurent_hybrid``: :class:`LaurentScalar`, exact elements of
  Q(zeta_8)[u, 1/u] / (u^8 - (k-2) u^4 + 1), with a numeric confirmation step
  at the real dominant root for elements that do not collapse to zero.
* ``numeric``: plain ``complex`` values compared against a tolerance.

Model entries themselves are backend independent :class:`Monomial` values
``c * zeta_8^a * u^m`` that get embedded into whichever representation the
context asks for.
"""

from __future__ import annotations

import cmath
import enum
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Union

import mpmath

from .errors import ConstraintViolation, DivisionByZero, IncompatibleMode, NonInvertible

DEFAULT_TOLERANCE = 1e-8
DEFAULT_PRECISION = 30
U_WINDOW = (-4, 3)  # inclusive range of u-exponents in LaurentScalar canonical form

# monic cyclotomic polynomials, coefficients from x^0 upward
CYCLOTOMIC_POLYS = {
    8: (1, 0, 0, 0, 1),
    16: (1, 0, 0, 0, 0, 0, 0, 0, 1),
    24: (1, 0, 0, 0, -1, 0, 0, 0, 1),
}


class Verdict(enum.IntEnum):
    ZERO = 0
    NONZERO = 1
    AMBIGUOUS = 2

    def __str__(self):
        return self.name


def default_precision():
    env = os.environ.get("SPINKIT_PRECISION")
    return int(env) if env else DEFAULT_PRECISION


# ---------------------------------------------------------------------------
# reduction tables
# ---------------------------------------------------------------------------

def phi(N):
    return len(CYCLOTOMIC_POLYS[N]) - 1


@lru_cache(maxsize=None)
def cyclotomic_power_table(N, size=None):
    """Row j holds the coefficients of zeta_N^j reduced modulo Phi_N."""
    poly = CYCLOTOMIC_POLYS[N]
    deg = len(poly) - 1
    size = N if size is None else size
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(size):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, poly[:-1])]
    return tuple(rows)


@lru_cache(maxsize=None)
def u_reduction(k, m):
    """Express u^m in the window basis using u^8 = (k-2) u^4 - 1.

    Returns a tuple of (exponent, integer coefficient) pairs.
    """
    lo, hi = U_WINDOW
    if lo <= m <= hi:
        return ((m, 1),)
    acc = {}
    if m > hi:
        parts = ((m - 4, k - 2), (m - 8, -1))
    else:
        parts = ((m + 4, k - 2), (m + 8, -1))
    for mm, c in parts:
        if c == 0:
            continue
        for j, cj in u_reduction(k, mm):
            acc[j] = acc.get(j, 0) + c * cj
    return tuple(sorted((j, c) for j, c in acc.items() if c))


# ---------------------------------------------------------------------------
# Monomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Monomial:
    """``coef * zeta_8^a * u^m`` with ``a`` in 0..3 (zeta_8^4 = -1 folded into coef)."""

    coef: Fraction
    a: int
    m: int

    def __post_init__(self):
        if self.coef == 0:
            raise ValueError("Monomial coefficient must be nonzero")
        if not 0 <= self.a <= 3:
            raise ValueError(f"zeta_8 exponent {self.a} not canonical")

    @classmethod
    def make(cls, coef=1, a8=0, m=0):
        a8 %= 8
        coef = Fraction(coef)
        if a8 >= 4:
            return cls(-coef, a8 - 4, m)
        return cls(coef, a8, m)

    @classmethod
    def one(cls):
        return cls(Fraction(1), 0, 0)

    @property
    def is_unit(self):
        return abs(self.coef) == 1

    @property
    def a8(self):
        """zeta_8 exponent with the sign absorbed; only meaningful for unit monomials."""
        if not self.is_unit:
            raise ValueError(f"{self} has non-unit coefficient")
        return self.a if self.coef > 0 else self.a + 4

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return Monomial.make(self.coef * other.coef, self.a + other.a, self.m + other.m)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return 0
            return Monomial(self.coef * other, self.a, self.m)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return Monomial(-self.coef, self.a, self.m)

    def inv(self):
        return Monomial.make(1 / self.coef, -self.a, -self.m)

    def __truediv__(self, other):
        if isinstance(other, Monomial):
            return self * other.inv()
        return NotImplemented

    def __pow__(self, e):
        return Monomial.make(self.coef ** e, self.a * e, self.m * e)

    def conj(self, real_u=True):
        """Complex conjugate; ``real_u`` fixes u, otherwise u is on the unit circle."""
        return Monomial.make(self.coef, -self.a, self.m if real_u else -self.m)

    def __str__(self):
        return format_term(self.coef, self.a, self.m)


# ---------------------------------------------------------------------------
# CycScalar
# ---------------------------------------------------------------------------

class CycScalar:
    """Exact element of Q(zeta_N) stored as coefficients modulo Phi_N."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N, coeffs):
        if N not in CYCLOTOMIC_POLYS:
            raise ValueError(f"unsupported cyclotomic modulus {N}")
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != phi(N):
            raise ValueError("coefficient vector has wrong length")
        self.N = N
        self.coeffs = coeffs

    @classmethod
    def constant(cls, N, c):
        return cls(N, (c,) + (0,) * (phi(N) - 1))

    @classmethod
    def root(cls, N, t, coef=1):
        row = cyclotomic_power_table(N)[t % N]
        coef = Fraction(coef)
        return cls(N, (coef * r for r in row))

    @classmethod
    def from_powers(cls, N, powers):
        """Sum of ``c * zeta_N^t`` over ``(t, c)`` pairs."""
        table = cyclotomic_power_table(N)
        acc = [Fraction(0)] * phi(N)
        for t, c in powers:
            if c:
                for j, r in enumerate(table[t % N]):
                    if r:
                        acc[j] += c * r
        return cls(N, acc)

    def _coerce(self, other):
        if isinstance(other, CycScalar):
            if other.N != self.N:
                raise ValueError("mixing cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.constant(self.N, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycScalar(self.N, (x + y for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.N, (-x for x in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycScalar(self.N, (x * other for x in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = {}
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    if y:
                        prod[i + j] = prod.get(i + j, 0) + x * y
        return CycScalar.from_powers(self.N, prod.items())

    __rmul__ = __mul__

    def galois(self, s):
        """Apply the automorphism zeta_N -> zeta_N^s."""
        return CycScalar.from_powers(self.N, ((s * j, c) for j, c in enumerate(self.coeffs)))

    def conj(self):
        return self.galois(-1)

    def is_zero_exact(self):
        return not any(self.coeffs)

    def inv(self):
        if self.is_zero_exact():
            raise DivisionByZero("inverse of zero")
        # product of the non-identity Galois conjugates; x * rest is the rational norm
        rest = CycScalar.constant(self.N, 1)
        for s in range(2, self.N):
            if math.gcd(s, self.N) == 1:
                rest = rest * self.galois(s)
        norm = (self * rest).coeffs
        assert not any(norm[1:]), "norm must be rational"
        return rest * (1 / norm[0])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __eq__(self, other):
        if isinstance(other, CycScalar):
            return self.N == other.N and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == CycScalar.constant(self.N, other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.N, self.coeffs))

    def to_complex(self):
        z = cmath.exp(2j * math.pi / self.N)
        return sum(float(c) * z**j for j, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"CycScalar({self.N}, {[str(c) for c in self.coeffs]})"


# ---------------------------------------------------------------------------
# LaurentScalar
# ---------------------------------------------------------------------------

class LaurentScalar:
    """Sum of ``c * zeta_8^a * u^m`` modulo ``u^8 - (k-2) u^4 + 1``.

    Canonical form keeps ``a`` in 0..3 and ``m`` inside :data:`U_WINDOW`.
    """

    __slots__ = ("k", "terms")

    def __init__(self, k, terms=()):
        self.k = k
        self.terms = _canonical_terms(k, terms)

    @classmethod
    def _raw(cls, k, terms):
        obj = cls.__new__(cls)
        obj.k = k
        obj.terms = terms
        return obj

    @classmethod
    def from_monomial(cls, k, mono):
        return cls(k, [(mono.coef, mono.a, mono.m)])

    def iter_terms(self):
        for (a, m), c in self.terms.items():
            yield c, a, m

    def _coerce(self, other):
        if isinstance(other, LaurentScalar):
            if other.k != self.k:
                raise ValueError("mixing relations with different k")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentScalar(self.k, [(other, 0, 0)])
        if isinstance(other, Monomial):
            return LaurentScalar.from_monomial(self.k, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        acc = dict(self.terms)
        for key, c in o.terms.items():
            v = acc.get(key, 0) + c
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
        return LaurentScalar._raw(self.k, acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar._raw(self.k, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return LaurentScalar._raw(self.k, {})
            return LaurentScalar._raw(self.k, {key: c * other for key, c in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        raw = [
            (c1 * c2, a1 + a2, m1 + m2)
            for (a1, m1), c1 in self.terms.items()
            for (a2, m2), c2 in o.terms.items()
        ]
        return LaurentScalar(self.k, raw)

    __rmul__ = __mul__

    def conj(self):
        # u is real at the dominant root, so only zeta_8 is conjugated
        return LaurentScalar(self.k, [(c, -a, m) for (a, m), c in self.terms.items()])

    def as_monomial(self):
        if len(self.terms) != 1:
            return None
        (a, m), c = next(iter(self.terms.items()))
        return Monomial(c, a, m)

    def inv(self):
        if not self.terms:
            raise DivisionByZero("inverse of zero")
        mono = self.as_monomial()
        if mono is None:
            raise NonInvertible("only single-term Laurent scalars are invertible")
        return LaurentScalar.from_monomial(self.k, mono.inv())

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def is_identically_zero(self):
        return not self.terms

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash((self.k, frozenset(self.terms.items())))

    def canonical(self):
        return LaurentScalar(self.k, list(self.iter_terms()))

    def __str__(self):
        return format_terms(self.iter_terms())

    def __repr__(self):
        return f"LaurentScalar(k={self.k}, {self})"


def _canonical_terms(k, terms):
    acc = {}
    for c, a, m in terms:
        c = Fraction(c)
        if not c:
            continue
        a %= 8
        if a >= 4:
            c, a = -c, a - 4
        for j, r in u_reduction(k, m):
            key = (a, j)
            v = acc.get(key, 0) + c * r
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
    return acc


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def format_term(c, a, m):
    c = Fraction(c)
    return f"{c}*z8^{a}*u^{m}"


def format_terms(terms):
    items = sorted(((m, a, c) for c, a, m in terms if c), key=lambda t: (t[0], t[1]))
    if not items:
        return "0"
    return "+".join(format_term(c, a, m) for m, a, c in items)


def format_scalar(x):
    """Serialize a Monomial, LaurentScalar or rational constant."""
    if isinstance(x, Monomial):
        return format_term(x.coef, x.a, x.m)
    if isinstance(x, LaurentScalar):
        return format_terms(x.iter_terms())
    if isinstance(x, (int, Fraction)):
        return format_terms([(x, 0, 0)])
    raise TypeError(f"cannot serialize {type(x).__name__}")


def parse_terms(s):
    s = s.strip()
    if s == "0":
        return []
    out = []
    for chunk in s.split("+"):
        try:
            cpart, zpart, upart = chunk.split("*")
            if not zpart.startswith("z8^") or not upart.startswith("u^"):
                raise ValueError
            out.append((Fraction(cpart), int(zpart[3:]), int(upart[2:])))
        except ValueError:
            raise ValueError(f"malformed scalar term {chunk!r}") from None
    return out


def parse_scalar(s, k=None):
    """Inverse of :func:`format_scalar`.

    ``"0"`` parses to ``0``; one term parses to a :class:`Monomial`; several
    terms need ``k`` and parse to a :class:`LaurentScalar`.
    """
    terms = parse_terms(s)
    if not terms:
        return 0 if k is None else LaurentScalar(k)
    if len(terms) == 1:
        c, a, m = terms[0]
        return Monomial.make(c, a, m)
    if k is None:
        raise ValueError("multi-term scalar requires k")
    return LaurentScalar(k, terms)


# ---------------------------------------------------------------------------
# context
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UMode:
    kind: str
    N: int | None = None
    e: int | None = None
    value: complex | None = None

    @classmethod
    def unit(cls):
        return cls("unit")

    @classmethod
    def cyclotomic(cls, N, e):
        return cls("cyclotomic", N=N, e=e)

    @classmethod
    def real_dominant(cls):
        return cls("real_dominant")

    @classmethod
    def numeric(cls, value):
        return cls("numeric", value=complex(value))

    def describe(self):
        if self.kind == "cyclotomic":
            return f"cyclotomic({self.N},{self.e})"
        if self.kind == "numeric":
            return f"numeric({self.value})"
        return self.kind


BACKENDS = ("cyclotomic", "laurent_hybrid", "numeric")


@dataclass(frozen=True)
class ScalarContext:
    k: int
    u_mode: UMode
    omega: int = 0
    xi: int = 1
    backend: str = "cyclotomic"
    tolerance: float = DEFAULT_TOLERANCE
    precision: int = field(default_factory=default_precision)

    # -- derived ----------------------------------------------------------
    @property
    def N(self):
        """Cyclotomic modulus (cyclotomic backend only)."""
        return 8 if self.u_mode.kind == "unit" else self.u_mode.N

    @property
    def u_root_exponent(self):
        """u = zeta_N^e under the cyclotomic backend."""
        return 0 if self.u_mode.kind == "unit" else self.u_mode.e

    @property
    def real_u(self):
        """True when complex conjugation fixes u."""
        kind = self.u_mode.kind
        if kind == "unit" or kind == "real_dominant":
            return True
        if kind == "numeric":
            return abs(self.u_mode.value.imag) <= self.tolerance
        return False

    @cached_property
    def u_mp(self):
        """u as an mpmath number at the working precision."""
        with mpmath.workdps(self.precision + 10):
            kind = self.u_mode.kind
            if kind == "unit":
                return mpmath.mpf(1)
            if kind == "cyclotomic":
                return mpmath.expjpi(mpmath.mpf(2 * self.u_mode.e) / self.u_mode.N)
            if kind == "real_dominant":
                return dominant_root(self.k, self.precision + 10)
            return mpmath.mpc(self.u_mode.value)

    @cached_property
    def u_value(self):
        return complex(self.u_mp)

    @property
    def omega_mono(self):
        return Monomial.make(1, 2 * self.omega, 0)

    @property
    def xi_mono(self):
        return Monomial.make(1, self.xi, 0)

    @property
    def i_mono(self):
        """The fourth root of unity -xi^2 used by the normalized nonsymmetric model."""
        return -(self.xi_mono * self.xi_mono)

    @cached_property
    def kernel(self):
        from .kernels import make_kernel

        return make_kernel(self)

    def params(self):
        return {
            "k": self.k,
            "u_mode": self.u_mode.describe(),
            "omega": self.omega,
            "xi": self.xi,
            "backend": self.backend,
            "tolerance": self.tolerance,
            "precision": self.precision,
        }

    # -- scalars ------------------------------------------------------------
    def embed(self, x):
        """Lift a Monomial or rational into this context's scalar type."""
        b = self.backend
        if isinstance(x, Monomial):
            if b == "cyclotomic":
                t = x.a * (self.N // 8) + self.u_root_exponent * x.m
                return CycScalar.root(self.N, t, x.coef)
            if b == "laurent_hybrid":
                return LaurentScalar.from_monomial(self.k, x)
            return complex(x.coef) * cmath.exp(1j * math.pi * x.a / 4) * self.u_value**x.m
        if isinstance(x, (int, Fraction)):
            if b == "cyclotomic":
                return CycScalar.constant(self.N, x)
            if b == "laurent_hybrid":
                return LaurentScalar(self.k, [(x, 0, 0)])
            return complex(x)
        if b == "numeric" and isinstance(x, (complex, float)):
            return complex(x)
        if isinstance(x, (CycScalar, LaurentScalar)):
            return x
        raise TypeError(f"cannot embed {type(x).__name__}")

    def zero(self):
        return self.embed(0)

    def one(self):
        return self.embed(1)

    def conj(self, x):
        if isinstance(x, Monomial) and self.backend != "numeric":
            return self.embed(x.conj(real_u=self.real_u))
        x = self.embed(x)
        if isinstance(x, complex):
            return x.conjugate()
        return x.conj()

    def inv(self, x):
        if isinstance(x, Monomial):
            return self.embed(x.inv())
        x = self.embed(x)
        if isinstance(x, complex):
            if self.is_zero(x) == Verdict.ZERO:
                raise DivisionByZero("inverse of a numerically zero value")
            return 1 / x
        return x.inv()

    def evaluate(self, x):
        """Numeric value of any scalar as a Python complex."""
        x = self.embed(x)
        if isinstance(x, complex):
            return x
        if isinstance(x, CycScalar):
            return x.to_complex()
        with mpmath.workdps(self.precision):
            return complex(_laurent_value_mp(x, self.u_mp))

    def is_zero(self, x):
        x = self.embed(x)
        if isinstance(x, CycScalar):
            return Verdict.ZERO if x.is_zero_exact() else Verdict.NONZERO
        if isinstance(x, LaurentScalar):
            if x.is_identically_zero():
                return Verdict.ZERO
            if self.k == 4:
                return _verdict_at_unit(x)
            with mpmath.workdps(self.precision):
                v = abs(_laurent_value_mp(x, self.u_mp))
                return Verdict.NONZERO if v > self.tolerance * len(x.terms) else Verdict.AMBIGUOUS
        return numeric_verdict(abs(x), self.tolerance)


def numeric_verdict(magnitude, tol):
    """Tolerance bands for the uncertified numeric backend."""
    if magnitude <= tol:
        return Verdict.ZERO
    if magnitude > math.sqrt(tol):
        return Verdict.NONZERO
    return Verdict.AMBIGUOUS


def _verdict_at_unit(x):
    """Exact zero test at u = 1, where the value lies in Q(zeta_8) = Q[z]/(z^4+1)."""
    acc = [Fraction(0)] * 4
    for (a, _), c in x.terms.items():
        acc[a] += c
    return Verdict.NONZERO if any(acc) else Verdict.ZERO


def _laurent_value_mp(x, u):
    z8 = mpmath.expjpi(mpmath.mpf(1) / 4)
    total = mpmath.mpc(0)
    for (a, m), c in x.terms.items():
        total += mpmath.mpf(c.numerator) / c.denominator * z8**a * u**m
    return total


def dominant_root(k, dps=DEFAULT_PRECISION):
    """Largest real root of u^8 - (k-2) u^4 + 1, found by bisection."""
    if k < 4:
        raise ConstraintViolation(f"u^8-(k-2)u^4+1 has no real root for k={k}")
    with mpmath.workdps(dps):
        def f(t):
            return t**8 - (k - 2) * t**4 + 1

        if k == 4:
            return mpmath.mpf(1)  # double root, no sign change to bisect
        lo, hi = mpmath.mpf(1), mpmath.mpf(2)
        while f(hi) <= 0:
            hi *= 2
        eps = mpmath.mpf(10) ** (-dps)
        while hi - lo > eps:
            mid = (lo + hi) / 2
            if f(mid) > 0:
                hi = mid
            else:
                lo = mid
        return (lo + hi) / 2


def default_u_mode(k):
    if k == 4:
        return UMode.unit()
    if k == 1:
        return UMode.cyclotomic(24, 2)
    if k == 2:
        return UMode.cyclotomic(16, 1)
    return UMode.real_dominant()


def _default_backend(mode):
    if mode.kind in ("unit", "cyclotomic"):
        return "cyclotomic"
    if mode.kind == "real_dominant":
        return "laurent_hybrid"
    return "numeric"


def make_context(k, u_mode=None, omega=0, xi=1, backend=None, tolerance=DEFAULT_TOLERANCE,
                 precision=None):
    """Build and validate a :class:`ScalarContext`.

    ``u_mode`` defaults per ``k`` (u=1 at k=4, zeta_12 at k=1, zeta_16 at
    k=2, the real dominant root otherwise) and ``backend`` defaults to the
    exact backend able to represent it.
    """
    if k < 1:
        raise ConstraintViolation(f"k must be positive, got {k}")
    mode = default_u_mode(k) if u_mode is None else u_mode
    backend = _default_backend(mode) if backend is None else backend
    if backend not in BACKENDS:
        raise IncompatibleMode(f"unknown backend {backend!r}")
    if backend == "cyclotomic" and mode.kind not in ("unit", "cyclotomic"):
        raise IncompatibleMode(f"cyclotomic backend cannot represent u_mode {mode.describe()}")
    if backend == "laurent_hybrid" and mode.kind != "real_dominant":
        raise IncompatibleMode("laurent_hybrid backend requires u_mode real_dominant")
    if mode.kind == "cyclotomic" and mode.N not in CYCLOTOMIC_POLYS:
        raise IncompatibleMode(f"cyclotomic modulus must be one of {sorted(CYCLOTOMIC_POLYS)}")
    if omega not in (0, 1, 2, 3):
        raise ConstraintViolation(f"omega exponent must be in 0..3, got {omega}")
    if xi % 2 == 0 or not 0 < xi < 8:
        raise ConstraintViolation(f"xi = zeta_8^{xi} is not a primitive 8th root (xi^4 != -1)")
    if tolerance < 0:
        raise ConstraintViolation("tolerance must be nonnegative")
    ctx = ScalarContext(
        k=k, u_mode=mode, omega=omega, xi=xi, backend=backend, tolerance=tolerance,
        precision=default_precision() if precision is None else precision,
    )
    _check_constraint(ctx)
    return ctx


def _check_constraint(ctx):
    """(u^2 + u^-2)^2 == k, exactly where possible."""
    k, mode = ctx.k, ctx.u_mode
    if mode.kind == "unit":
        if k != 4:
            raise ConstraintViolation(f"u=1 gives (u^2+u^-2)^2 = 4, not {k}")
        return
    if mode.kind == "cyclotomic":
        N, e = mode.N, mode.e
        s = CycScalar.root(N, 2 * e) + CycScalar.root(N, -2 * e)
        if s * s != CycScalar.constant(N, k):
            raise ConstraintViolation(f"u=zeta_{N}^{e} does not satisfy (u^2+u^-2)^2 = {k}")
        return
    if mode.kind == "real_dominant":
        u = dominant_root(k, ctx.precision + 10)
        with mpmath.workdps(ctx.precision):
            resid = abs((u**2 + u**-2) ** 2 - k)
            if resid > mpmath.mpf(10) ** (-(ctx.precision // 2)):
                raise ConstraintViolation(f"dominant root residual {resid} too large")
        return
    u = mode.value
    if u == 0 or abs((u**2 + u**-2) ** 2 - k) > max(ctx.tolerance, 1e-12) * max(k, 1):
        raise ConstraintViolation(f"u={u} does not satisfy (u^2+u^-2)^2 = {k}")


def loop_parameter_terms(ctx, n, sign):
    """The type III constant d, d^2 = n, as (coef, Monomial) pairs.

    Returns None when neither n nor n/k is a perfect square.
    """
    r = math.isqrt(n)
    if r * r == n:
        return [Monomial.make(sign * r, 0, 0)]
    if n % ctx.k == 0:
        q = math.isqrt(n // ctx.k)
        if q * q == n // ctx.k:
            return [Monomial.make(sign * q, 0, 2), Monomial.make(sign * q, 0, -2)]
    return None


# ---------------------------------------------------------------------------
# functional surface
# ---------------------------------------------------------------------------

Scalar = Union[Monomial, CycScalar, LaurentScalar, complex, int, Fraction]


def scalar_add(x, y, ctx=None):
    if ctx is not None:
        return ctx.embed(x) + ctx.embed(y)
    return x + y


def scalar_mul(x, y, ctx=None):
    if isinstance(x, Monomial) and isinstance(y, Monomial):
        return x * y
    if ctx is not None:
        return ctx.embed(x) * ctx.embed(y)
    return x * y


def scalar_conj(x, ctx=None):
    if ctx is not None:
        return ctx.conj(x)
    if isinstance(x, Monomial):
        return x.conj(real_u=True)
    if isinstance(x, complex):
        return x.conjugate()
    return x.conj()


def scalar_inv(x, ctx=None):
    if isinstance(x, Monomial):
        return x.inv()
    if ctx is not None:
        return ctx.inv(x)
    if isinstance(x, (int, Fraction)):
        if x == 0:
            raise DivisionByZero("inverse of zero")
        return Fraction(1) / x
    return x.inv()


def is_zero(x, ctx):
    return ctx.is_zero(x)


def sum_scalars(values: Iterable, ctx):
    total = ctx.zero()
    for v in values:
        total = total + ctx.embed(v)
    return total

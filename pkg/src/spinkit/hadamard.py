"""Hadamard matrices: construction, validation and the '+/-' text format."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import BadPrime, ParseError, SizeLimit
from .report import make_report

MAX_ORDER = 256


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    signs: np.ndarray
    source: str = "inline"

    def __post_init__(self):
        arr = np.asarray(self.signs, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"Hadamard matrix must be square, got {arr.shape}")
        if not np.all(np.abs(arr) == 1):
            raise ValueError("entries must be +1 or -1")
        arr.setflags(write=False)
        object.__setattr__(self, "signs", arr)

    @property
    def k(self):
        return self.signs.shape[0]

    def __eq__(self, other):
        return isinstance(other, HadamardMatrix) and np.array_equal(self.signs, other.signs)

    def __hash__(self):
        return hash(self.signs.tobytes())


def sylvester(m):
    if m < 0:
        raise ValueError("m must be nonnegative")
    if 2**m > MAX_ORDER:
        raise SizeLimit(f"order 2^{m} exceeds {MAX_ORDER}")
    H = np.array([[1]], dtype=np.int64)
    H2 = np.array([[1, 1], [1, -1]], dtype=np.int64)
    for _ in range(m):
        H = np.kron(H2, H)
    return HadamardMatrix(H, source=f"sylvester({m})")


def _is_prime(q):
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


def legendre(a, q):
    a %= q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


def paley1(q):
    """Skew Hadamard matrix of order q+1 from the quadratic residues mod q."""
    if not _is_prime(q) or q % 4 != 3:
        raise BadPrime(f"{q} is not a prime congruent to 3 mod 4")
    if q + 1 > MAX_ORDER:
        raise SizeLimit(f"order {q + 1} exceeds {MAX_ORDER}")
    chi = np.array([legendre(d, q) for d in range(q)], dtype=np.int64)
    idx = np.arange(q)
    Q = chi[(idx[None, :] - idx[:, None]) % q]
    S = np.zeros((q + 1, q + 1), dtype=np.int64)
    S[0, 1:] = 1
    S[1:, 0] = -1
    S[1:, 1:] = Q
    return HadamardMatrix(S + np.eye(q + 1, dtype=np.int64), source=f"paley1({q})")


def validate(H):
    """Pass iff H H^T = kI over the integers."""
    if not isinstance(H, HadamardMatrix):
        try:
            H = HadamardMatrix(H)
        except ValueError as exc:
            return make_report("hadamard.validate", False, witnesses=[str(exc)])
    k = H.k
    gram = H.signs @ H.signs.T
    bad = np.argwhere(gram != k * np.eye(k, dtype=np.int64))
    witnesses = [{"row": int(i), "col": int(j), "value": int(gram[i, j])} for i, j in bad[:1]]
    return make_report("hadamard.validate", bad.size == 0, witnesses=witnesses, k=k,
                       source=H.source)


def parse(text, source="inline"):
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.startswith("#"):
            continue
        if not raw:
            raise ParseError("empty row", lineno, 1)
        row = []
        for col, ch in enumerate(raw, start=1):
            if ch == "+":
                row.append(1)
            elif ch == "-":
                row.append(-1)
            else:
                raise ParseError(f"unexpected character {ch!r}", lineno, col)
        if rows and len(row) != len(rows[0][1]):
            raise ParseError(f"row has {len(row)} entries, expected {len(rows[0][1])}",
                             lineno, len(row) + 1)
        rows.append((lineno, row))
    if not rows:
        raise ParseError("no rows", 1, 1)
    if len(rows) != len(rows[0][1]):
        raise ParseError(f"{len(rows)} rows for {len(rows[0][1])} columns", rows[-1][0], 1)
    return HadamardMatrix(np.array([r for _, r in rows], dtype=np.int64), source=source)


def serialize(H):
    return "".join("".join("+" if v > 0 else "-" for v in row) + "\n" for row in H.signs)


def load(path):
    with open(path) as fh:
        return parse(fh.read(), source=str(path))


def save(H, path):
    with open(path, "w") as fh:
        fh.write(serialize(H))


def bundled(order):
    """Hadamard matrices shipped with the package (currently order 12)."""
    name = f"hadamard_{order}.txt"
    text = resources.files("spinkit.data").joinpath(name).read_text()
    return parse(text, source=f"bundled:{name}")


def standard(k):
    """Default H for a given order: Sylvester for powers of two, bundled otherwise."""
    if k & (k - 1) == 0:
        return sylvester(k.bit_length() - 1)
    return bundled(k)

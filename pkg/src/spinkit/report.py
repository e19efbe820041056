"""Structured pass/fail/ambiguous records shared by every check."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

PASS = "pass"
FAIL = "fail"
AMBIGUOUS = "ambiguous"


def jsonable(obj):
    """Recursively convert numpy scalars, tuples and rationals into JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


@dataclass
class VerificationReport:
    check_id: str
    verdict: str
    k: int | None = None
    backend: str | None = None
    params: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    ambiguity_count: int = 0
    data: dict = field(default_factory=dict)
    timing: float | None = None

    def __post_init__(self):
        if self.verdict not in (PASS, FAIL, AMBIGUOUS):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == PASS and (self.witnesses or self.ambiguity_count):
            raise ValueError("a passing report cannot carry witnesses or ambiguities")

    @property
    def passed(self):
        return self.verdict == PASS

    def __bool__(self):
        return self.passed

    def body(self):
        """Everything except timing, so identical runs serialize identically."""
        return jsonable({
            "check_id": self.check_id,
            "verdict": self.verdict,
            "k": self.k,
            "backend": self.backend,
            "params": self.params,
            "witnesses": self.witnesses,
            "ambiguity_count": self.ambiguity_count,
            "data": self.data,
        })

    def to_json(self):
        return json.dumps(self.body(), sort_keys=True, indent=2) + "\n"

    def summary_line(self):
        return f"{self.verdict.upper():9s} {self.check_id}" + (f" (k={self.k})" if self.k else "")


def make_report(check_id, ok, ctx=None, witnesses=(), ambiguity_count=0, **data):
    if ambiguity_count:
        verdict = AMBIGUOUS
    else:
        verdict = PASS if ok else FAIL
    return VerificationReport(
        check_id=check_id,
        verdict=verdict,
        k=ctx.k if ctx is not None else data.pop("k", None),
        backend=ctx.backend if ctx is not None else None,
        params=ctx.params() if ctx is not None else {},
        witnesses=[] if verdict == PASS else list(witnesses),
        ambiguity_count=ambiguity_count,
        data=data,
    )


@contextmanager
def timed(holder):
    """Store elapsed seconds in ``holder['seconds']``."""
    t0 = time.perf_counter()
    try:
        yield holder
    finally:
        holder["seconds"] = time.perf_counter() - t0

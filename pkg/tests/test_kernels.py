import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinkit.hadamard import standard
from spinkit.models import build_model
from spinkit.nomura import y_table
from spinkit.numbers import Monomial, UMode, Verdict, make_context

CONTEXTS = {
    "cyc4": lambda: make_context(4),
    "cyc1": lambda: make_context(1),
    "cyc2": lambda: make_context(2),
    "hyb8": lambda: make_context(8),
    "num8": lambda: make_context(8, UMode.real_dominant(), backend="numeric"),
}

entries = st.lists(st.tuples(st.integers(0, 7), st.integers(-6, 6), st.integers(-3, 3)),
                   min_size=1, max_size=8)


@pytest.mark.parametrize("name", sorted(CONTEXTS))
@settings(max_examples=40, deadline=None)
@given(rows=entries)
def test_batched_sum_matches_scalar_sum(name, rows):
    ctx = CONTEXTS[name]()
    kern = ctx.kernel
    a8 = np.array([r[0] for r in rows])
    m = np.array([r[1] for r in rows])
    w = np.array([r[2] for r in rows])
    canon = kern.sums(kern.encode(a8, m)[None], w)[0]
    scalar = ctx.zero()
    for a, mm, c in rows:
        if c:
            scalar = scalar + ctx.embed(Monomial.make(c, int(a), int(mm)))
    got = kern.to_scalar(canon)
    if ctx.backend == "numeric":
        assert abs(got - scalar) < 1e-9 * (1 + abs(scalar))
    else:
        assert got == scalar
    assert Verdict(kern.verdicts(canon[None])[0]) == ctx.is_zero(scalar)


@pytest.mark.parametrize("name", sorted(CONTEXTS))
def test_mul_inv_conj_roundtrip(name):
    ctx = CONTEXTS[name]()
    kern = ctx.kernel
    rng = np.random.default_rng(1)
    x = kern.encode(rng.integers(0, 8, 50), rng.integers(-5, 6, 50))
    one = kern.encode(np.zeros(50, dtype=int), np.zeros(50, dtype=int))
    assert np.allclose(kern.mul(x, kern.inv(x)), one)
    assert np.allclose(kern.conj(kern.conj(x)), x)


def test_hybrid_agrees_with_exact_at_k4():
    """Random inner products of model Y-vectors: hybrid verdicts equal exact ones."""
    H = standard(4)
    exact = make_context(4)
    hybrid = make_context(4, UMode.real_dominant())
    rng = np.random.default_rng(7)
    checked = 0
    for kind in ("W", "Wp", "Wt", "Wtp"):
        Ye = y_table(build_model(kind, H, exact))
        enc_e, enc_h = Ye.encoded(exact), Ye.encoded(hybrid)
        p = rng.integers(0, 256, 300)
        q = rng.integers(0, 256, 300)
        ve = exact.kernel.verdicts(exact.kernel.sums(
            exact.kernel.mul(enc_e[p], exact.kernel.conj(enc_e[q]))))
        vh = hybrid.kernel.verdicts(hybrid.kernel.sums(
            hybrid.kernel.mul(enc_h[p], hybrid.kernel.conj(enc_h[q]))))
        assert not np.any(vh == Verdict.AMBIGUOUS)
        assert np.array_equal(ve, vh)
        checked += len(p)
    assert checked >= 1000


def test_unit_modulus_self_product():
    ctx = make_context(4)
    Y = y_table(build_model("Wt", standard(4), ctx))
    enc = Y.encoded(ctx)
    canon = ctx.kernel.sums(ctx.kernel.mul(enc, ctx.kernel.conj(enc)))
    assert all(ctx.kernel.to_scalar(row) == 16 for row in canon)

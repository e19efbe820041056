import itertools

import numpy as np
import pytest

from spinkit.errors import OrderMismatch
from spinkit.hadamard import standard
from spinkit.linalg import SpinMatrix
from spinkit.models import (
    asymmetry_witness,
    build_model,
    expansion,
    gauge_identity_check,
    is_symmetric,
    potts,
    type2_check,
    type3_check,
)
from spinkit.numbers import Monomial, UMode, make_context

from conftest import complex_matrix, z8


def type2_oracle(W):
    n = W.shape[0]
    return np.allclose(W @ (1 / W).T, n * np.eye(n))


def type3_oracle(W, d):
    n = W.shape[0]
    for a, b, c in itertools.product(range(n), repeat=3):
        lhs = np.sum(W[a] * W[b] / W[c])
        if abs(lhs - d * W[a, b] / (W[a, c] * W[c, b])) > 1e-8:
            return False
    return True


def test_potts_at_unit():
    ctx = make_context(4)
    A = complex_matrix(potts(ctx), ctx)
    assert np.allclose(A, 2 * np.eye(4) - 1)


def test_top_right_block_is_omega_h():
    ctx = make_context(4, omega=1)
    H = standard(4)
    W = build_model("W", H, ctx)
    assert np.allclose(complex_matrix(W.block(0, 2, 4), ctx), 1j * H.signs)


def test_order_mismatch():
    with pytest.raises(OrderMismatch):
        build_model("W", standard(8), make_context(4))


@pytest.mark.parametrize("omega", range(4))
def test_type2_w_all_omega(omega, H4):
    ctx = make_context(4, omega=omega)
    W = build_model("W", H4, ctx)
    rep = type2_check(W, ctx)
    assert rep.passed and rep.data["constant"] == 16
    assert type2_oracle(complex_matrix(W, ctx))


@pytest.mark.parametrize("xi", [1, 3, 5, 7])
def test_type2_wprime_all_xi(xi, H4):
    ctx = make_context(4, xi=xi)
    assert type2_check(build_model("Wp", H4, ctx), ctx).passed


def test_type2_detects_broken_entry(ctx4, H4):
    W = build_model("W", H4, ctx4)
    E = W.entries.copy()
    E[0, 5] = E[0, 5] * Monomial.make(1, 2, 0)
    rep = type2_check(SpinMatrix(E), ctx4)
    assert not rep.passed and rep.witnesses


@pytest.mark.parametrize("kind", ["W", "Wp"])
def test_type3_exactly_one_sign_k4(kind, ctx4, H4):
    W = build_model(kind, H4, ctx4)
    rep = type3_check(W, ctx4)
    assert rep.passed and rep.data["exhaustive"] and rep.data["triples"] == 4096
    assert len(rep.data["signs_passing"]) == 1
    d = rep.data["working_d"]
    assert d**2 == pytest.approx(16)
    Wc = complex_matrix(W, ctx4)
    assert type3_oracle(Wc, d) and not type3_oracle(Wc, -d)


def test_type3_potts_alone():
    ctx = make_context(4)
    rep = type3_check(potts(ctx), ctx)
    assert rep.passed and rep.data["working_d"] ** 2 == pytest.approx(4)


@pytest.mark.parametrize("k", [1, 2])
def test_small_orders_are_spin_models(k):
    ctx = make_context(k)
    H = standard(k)
    for kind in ("W", "Wp"):
        M = build_model(kind, H, ctx)
        assert type2_check(M, ctx).passed
        assert type3_check(M, ctx).passed
        assert type2_oracle(complex_matrix(M, ctx))


@pytest.mark.parametrize("backend", ["laurent_hybrid", "numeric"])
def test_type3_k8_sampled(backend, H8):
    ctx = make_context(8, UMode.real_dominant(), backend=backend)
    for kind in ("W", "Wp"):
        rep = type3_check(build_model(kind, H8, ctx), ctx, samples=2000)
        assert rep.passed and not rep.data["exhaustive"]
        assert abs(rep.data["working_d"]) == pytest.approx(32 ** 0.5)


def test_normalized_nonsymmetric_is_not_spin_model(ctx4, H4):
    Wt = build_model("Wtp", H4, ctx4)
    assert type2_check(Wt, ctx4).passed
    assert not type3_check(Wt, ctx4).passed


@pytest.mark.parametrize("omega", range(4))
def test_gauge_w(omega, H4):
    ctx = make_context(4, omega=omega)
    rep = gauge_identity_check("W", H4, ctx)
    assert rep.data["case"] == ("omega^2=1" if omega % 2 == 0 else "omega^2=-1")


@pytest.mark.parametrize("xi", [1, 3, 5, 7])
def test_gauge_wprime(xi, H4):
    ctx = make_context(4, xi=xi)
    assert gauge_identity_check("Wp", H4, ctx).passed
    assert gauge_identity_check("WpT", H4, ctx).passed


def test_gauge_k8_hybrid(ctx8, H8):
    for kind in ("W", "Wp", "WpT"):
        assert gauge_identity_check(kind, H8, ctx8).passed


def test_symmetry(ctx4, H4):
    assert is_symmetric(build_model("Wt", H4, ctx4))
    assert is_symmetric(build_model("W", H4, ctx4))
    assert asymmetry_witness(build_model("Wp", H4, ctx4)) is not None
    assert asymmetry_witness(build_model("Wp", standard(1), make_context(1))) is not None


def test_expansion_matches_complex(H8, ctx8):
    for kind in ("W", "Wp"):
        M = build_model(kind, H8, ctx8)
        E = expansion(kind, H8, ctx8)
        assert np.allclose(complex_matrix(M, ctx8),
                           np.array([[ctx8.evaluate(v) for v in row] for row in E.entries]))


def test_wprime_entries_use_xi(ctx4, H4):
    Wp = complex_matrix(build_model("Wp", H4, ctx4), ctx4)
    assert Wp[0, 8] == pytest.approx(z8(1) * H4.signs[0, 0])
    assert Wp[8, 0] == pytest.approx(-z8(1) * H4.signs[0, 0])

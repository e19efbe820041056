import numpy as np
import pytest

from spinkit.errors import ShapeMismatch
from spinkit.hadamard import standard
from spinkit.linalg import (
    SpinMatrix,
    block4,
    conj_transpose,
    hermitian_ip,
    index4k,
    lincomb,
    matmul,
    matrices_equal,
    split_index,
    support,
    transpose,
)
from spinkit.models import build_model
from spinkit.numbers import Monomial, make_context

from conftest import complex_matrix


def test_index_round_trip():
    k = 3
    seen = set()
    for x in range(k):
        for a1 in (0, 1):
            for a2 in (0, 1):
                g = index4k(x, a1, a2, k)
                assert split_index(g, k) == (x, a1, a2)
                seen.add(g)
    assert seen == set(range(4 * k))
    assert index4k(0, 1, 0, k) == 2 * k


def test_block4_layout():
    k = 2
    blocks = [[np.full((k, k), 4 * i + j) for j in range(4)] for i in range(4)]
    M = block4(blocks)
    assert M.n == 8
    assert M[5, 2] == 2 * 4 + 1
    sparse = block4([[np.eye(k, dtype=int)] + [None] * 3] + [[None] * 4 for _ in range(3)])
    assert support(sparse).sum() == k
    with pytest.raises(ShapeMismatch):
        block4([[None] * 4 for _ in range(4)])


def test_matmul_matches_complex(ctx8, H8):
    W = build_model("W", H8, ctx8)
    Wc = complex_matrix(W, ctx8)
    P = matmul(W, transpose(W), ctx8)
    got = np.array([[ctx8.evaluate(v) for v in row] for row in P.entries])
    assert np.allclose(got, Wc @ Wc.T)


def test_conj_transpose_and_ip(ctx4, H4):
    W = build_model("Wp", H4, ctx4)
    C = conj_transpose(W, ctx4)
    Wc = complex_matrix(W, ctx4)
    assert np.allclose(complex_matrix(C, ctx4), Wc.conj().T)
    ip = hermitian_ip(list(W[0]), list(W[1]), ctx4)
    assert abs(ctx4.evaluate(ip) - np.vdot(Wc[1], Wc[0])) < 1e-9


def test_lincomb_and_shape_errors(ctx4):
    I = SpinMatrix.identity(4)
    twice = lincomb([2, 3], [I, I], ctx4)
    assert matrices_equal(twice, lincomb([5], [I], ctx4), ctx4)
    with pytest.raises(ShapeMismatch):
        lincomb([1, 1], [I, SpinMatrix.identity(3)], ctx4)
    with pytest.raises(ShapeMismatch):
        matmul(I, SpinMatrix.identity(3))
    with pytest.raises(ShapeMismatch):
        SpinMatrix(np.zeros((2, 3)))


def test_json_round_trip(ctx8, H8):
    W = build_model("Wtp", H8, ctx8)
    back = SpinMatrix.from_json(W.to_json(), k=8)
    assert back == W
    assert back[0, 0] == Monomial.make(1, 0, 3)

import numpy as np
import pytest

from spinkit import hadamard as hd
from spinkit.errors import BadPrime, ParseError, SizeLimit


@pytest.mark.parametrize("m", range(0, 6))
def test_sylvester_is_hadamard(m):
    H = hd.sylvester(m)
    k = 2**m
    assert H.k == k
    assert np.array_equal(H.signs @ H.signs.T, k * np.eye(k))
    assert hd.validate(H).passed


def test_sylvester_small_orders():
    assert hd.sylvester(0).signs.tolist() == [[1]]
    assert hd.sylvester(1).signs.tolist() == [[1, 1], [1, -1]]


def test_size_limit():
    hd.sylvester(8)
    with pytest.raises(SizeLimit):
        hd.sylvester(9)


@pytest.mark.parametrize("q", [3, 7, 11, 19, 23])
def test_paley_is_skew_type(q):
    H = hd.paley1(q)
    S = H.signs - np.eye(q + 1, dtype=int)
    assert hd.validate(H).passed
    assert np.array_equal(S.T, -S)


@pytest.mark.parametrize("q", [5, 9, 13, 15])
def test_paley_rejects(q):
    with pytest.raises(BadPrime):
        hd.paley1(q)


@pytest.mark.parametrize("k", [1, 2, 4])
def test_determinant_bound_attained(k):
    H = hd.sylvester(k.bit_length() - 1)
    assert round(abs(np.linalg.det(H.signs))) == round(k ** (k / 2))


def test_validate_reports_flipped_sign():
    S = hd.sylvester(2).signs.copy()
    S[1, 2] *= -1
    rep = hd.validate(S)
    assert not rep.passed
    assert rep.witnesses


def test_round_trip(tmp_path):
    H = hd.paley1(11)
    path = tmp_path / "h.txt"
    hd.save(H, path)
    assert hd.load(path) == H
    assert hd.serialize(H).count("\n") == 12


def test_parse_comments_and_errors():
    H = hd.parse("# order 2\n++\n+-\n")
    assert H.signs.tolist() == [[1, 1], [1, -1]]
    with pytest.raises(ParseError) as err:
        hd.parse("++\n+x\n")
    assert (err.value.line, err.value.column) == (2, 2)
    with pytest.raises(ParseError):
        hd.parse("++\n+\n")
    with pytest.raises(ParseError):
        hd.parse("+ +\n+-\n")


def test_bundled_order_12():
    H = hd.bundled(12)
    assert hd.validate(H).passed
    assert H == hd.paley1(11)
    assert hd.standard(12) == H

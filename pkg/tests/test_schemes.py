import numpy as np
import pytest

from spinkit.errors import NotClosed
from spinkit.hadamard import paley1, standard, sylvester
from spinkit.schemes import (
    build_distance_matrices,
    build_relations,
    coherent_config_check,
    cyclic_scheme,
    directed_family,
    fuse_rho_orbits,
    rho,
    rho_automorphism_check,
    same_family,
    scheme_check,
    symmetric_family,
)

ORDERS = [1, 2, 4, 8, 12]


def bfs_distances(adj):
    n = adj.shape[0]
    dist = np.full((n, n), -1)
    for s in range(n):
        dist[s, s] = 0
        frontier, d = [s], 0
        while frontier:
            d += 1
            nxt = np.flatnonzero(adj[frontier].any(axis=0) & (dist[s] < 0))
            dist[s, nxt] = d
            frontier = list(nxt)
    return dist


@pytest.mark.parametrize("k", [2, 4, 8, 12])
def test_distance_matrices_match_graph_distance(k):
    mats = build_distance_matrices(standard(k))
    dist = bfs_distances(mats["A1"].astype(bool))
    for i in range(5):
        assert np.array_equal(mats[f"A{i}"], (dist == i).astype(int)), i


@pytest.mark.parametrize("k", ORDERS)
def test_relations_agree_with_matrices(k):
    H = standard(k)
    rels = build_relations(H)
    mats = build_distance_matrices(H)
    for name, rel in rels.items():
        key = {"R1p": "A1p", "R3p": "A3p"}.get(name, "A" + name[1:])
        assert np.array_equal(rel.matrix, mats[key])


@pytest.mark.parametrize("k", ORDERS)
def test_both_schemes(k):
    H = standard(k)
    rep, spec = scheme_check(symmetric_family(H))
    expected = [1, k, 2 * (k - 1), k, 1] if k > 1 else [1, 1, 1, 1]
    assert rep.data["valencies"] == expected
    assert rep.data["dropped_empty"] == ([] if k > 1 else ["R2"])
    rep2, spec2 = scheme_check(directed_family(H))
    assert rep2.passed
    assert spec2.transpose[spec2.names.index("R1p")] == spec2.names.index("R3p")


def test_involution_and_not_closed():
    mats = build_distance_matrices(standard(4))
    assert np.array_equal(mats["A4"] @ mats["A4"], mats["A0"])
    with pytest.raises(NotClosed):
        scheme_check([mats["A0"], mats["A1"]])


def test_tensor_independent_of_order4_matrix():
    _, s1 = scheme_check(symmetric_family(sylvester(2)))
    _, s2 = scheme_check(symmetric_family(paley1(3)))
    assert np.array_equal(s1.tensor, s2.tensor)


def test_distance_regular_intersection_array():
    k = 8
    _, spec = scheme_check(symmetric_family(standard(k)))
    p = spec.tensor
    # b_i = p_{1,i+1}^i, c_i = p_{1,i-1}^i
    b = [p[1, i + 1, i] for i in range(4)]
    c = [p[1, i - 1, i] for i in range(1, 5)]
    assert b == [k, k - 1, k // 2, 1]
    assert c == [1, k // 2, k - 1, k]


@pytest.mark.parametrize("k", [1, 2, 4, 8])
def test_coherent_configuration(k):
    rep, p10 = coherent_config_check(standard(k))
    assert rep.data["rule_checks"] == 100
    assert p10.shape == (10, 10, 10)


@pytest.mark.parametrize("k", [4, 8])
def test_rho_and_fusion(k):
    H = standard(k)
    assert rho_automorphism_check(H).data["triples"] == 1000
    spec = fuse_rho_orbits(H)
    assert spec.names == ["R0", "R1p", "R2", "R3p", "R4"]
    assert same_family(spec.matrices, [r.matrix for r in directed_family(H)])


def test_rho_is_involution():
    for lab in [(i, lam) for i in range(5) for lam in (0, 1)]:
        assert rho(rho(lab)) == lab


@pytest.mark.parametrize("n", [4, 8])
def test_cyclic_scheme_tensor(n):
    spec = cyclic_scheme(n)
    i, j, l = np.indices((n, n, n))
    assert np.array_equal(spec.tensor, ((i + j) % n == l).astype(int))

import json

import numpy as np
import pytest

from nortonlab.errors import DiameterTooSmall, GraphFormatError, NotDistanceRegular
from nortonlab.families import FamilySpec, construct
from nortonlab.graphcore import (
    Graph,
    build_drgraph,
    check_antipodal_2cover,
    distance_partition,
    graph_from_json,
    graph_to_json,
)


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def test_cube_intersection_array(bundle):
    b = bundle("H_3_2")
    ia = b.dr.intersection
    assert b.dr.diameter == 3
    assert ia.c == (1, 2, 3)
    assert ia.b == (3, 2, 1)
    assert ia.a == (0, 0, 0, 0)
    assert ia.n == 8


def test_k4_diameter_too_small():
    with pytest.raises(DiameterTooSmall):
        build_drgraph(complete_graph(4))


def test_petersen_diameter_too_small():
    # the Odd graph O_3 has diameter 2, below the standing D >= 3 assumption
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (1, 6), (2, 7),
             (3, 8), (4, 9), (5, 7), (7, 9), (6, 9), (6, 8), (5, 8)]
    with pytest.raises(DiameterTooSmall):
        build_drgraph(Graph.from_edges(10, edges))


def test_not_distance_regular_witness():
    g = construct(FamilySpec(family="johnson", params={"N": 6, "D": 3}))
    obj = graph_to_json(g)
    del obj["edges"][0]
    with pytest.raises(NotDistanceRegular) as err:
        build_drgraph(graph_from_json(obj))
    w = err.value.witness
    assert len(w) == 9 and w[5] != w[8]


def test_distance_partition_sizes(bundle):
    # k_i from the exact product formula is the independent oracle
    for key, want in [("H_3_2", [1, 3, 3, 1]), ("J_6_3", [1, 9, 9, 1]),
                      ("O_4", [1, 4, 12, 18])]:
        b = bundle(key)
        ks = list(b.dr.intersection.k_i)
        assert ks == want
        for x in (0, b.dr.n // 2):
            parts = distance_partition(b.dr, x)
            assert [len(p) for p in parts] == want
            assert sorted(v for p in parts for v in p) == list(range(b.dr.n))


def test_antipodal_2cover(bundle):
    assert check_antipodal_2cover(bundle("J_6_3").dr)
    assert not check_antipodal_2cover(bundle("J_7_3").dr)
    assert check_antipodal_2cover(bundle("halfH_6_2").dr)


def test_p_tensor_invariants(bundle):
    for key in ("H_3_2", "J_7_3", "O_4", "Doob_1_1"):
        dr = bundle(key).dr
        p = dr.p
        D = dr.diameter
        ks = dr.intersection.k_i
        assert sum(ks) == dr.n
        assert np.array_equal(p, p.transpose(0, 2, 1))
        for h in range(D + 1):
            for i in range(D + 1):
                for j in range(D + 1):
                    if h > i + j or i > h + j or j > h + i:
                        assert p[h, i, j] == 0
                    elif h == i + j or i == h + j or j == h + i:
                        assert p[h, i, j] != 0
        # distance matrix is a metric
        d = dr.dist
        assert (d == d.T).all() and (np.diag(d) == 0).all()
        x = np.random.default_rng(0).integers(0, dr.n, size=20)
        for a in x:
            assert (d[a][None, :] <= d[a][:, None] + d).all()


def test_graph_json_roundtrip():
    g = construct(FamilySpec(family="hamming", params={"D": 3, "N": 2}))
    obj = graph_to_json(g)
    g2 = graph_from_json(json.loads(json.dumps(obj)))
    assert g2.n == g.n
    assert list(g2.edges()) == list(g.edges())


@pytest.mark.parametrize("obj,msg", [
    ({"n": 4, "edges": [[0, 1], [0, 1]]}, "duplicate"),
    ({"n": 4, "edges": [[1, 1]]}, "u < v"),
    ({"n": 4, "edges": [[0, 9]]}, "u < v|range"),
    ({"n": 4, "edges": [[3, 1]]}, "u < v"),
    ({"n": 0, "edges": []}, "positive"),
])
def test_graph_json_rejects(obj, msg):
    with pytest.raises(GraphFormatError):
        graph_from_json(obj)

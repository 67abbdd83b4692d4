import math
from fractions import Fraction

import numpy as np
import pytest

from nortonlab.errors import NotBuildable
from nortonlab.families import (
    FamilySpec,
    catalogue,
    catalogue_by_key,
    construct,
    family_data,
    shrikhande_graph,
)
from nortonlab.graphcore import build_drgraph

BUILDABLE_KEYS = [s.key for s in catalogue() if s.buildable and s.drg_instance]


def test_catalogue_membership():
    keys = {s.key for s in catalogue()}
    assert "J_6_3" in keys
    assert "Doob_1_1" in keys and catalogue_by_key()["Doob_1_1"].buildable
    assert not catalogue_by_key()["Bil_2_4_4"].buildable
    assert not catalogue_by_key()["Shrikhande"].drg_instance


@pytest.mark.parametrize("key", BUILDABLE_KEYS)
def test_built_arrays_match_closed_forms(key, bundle):
    b = bundle(key)
    assert b.dr.intersection == b.fd.intersection


def test_johnson_counts(bundle):
    b = bundle("J_6_3")
    assert b.dr.n == 20 and b.dr.intersection.k == 9


def test_doob_and_hamming_share_arrays(bundle):
    d = bundle("Doob_1_1")
    h = bundle("H_3_4")
    assert d.dr.intersection == h.dr.intersection
    assert d.dr.intersection.as_dict() == h.dr.intersection.as_dict()


def test_shrikhande_strongly_regular():
    g = shrikhande_graph()
    assert g.n == 16
    adj = g.adjacency_csr().toarray().astype(int)
    assert (adj.sum(axis=1) == 6).all()
    common = adj @ adj
    for u in range(16):
        for v in range(u + 1, 16):
            assert common[u, v] == (2 if adj[u, v] else 2)
    # (16, 6, 2, 2): lambda = mu = 2
    lam = {common[u, v] for u in range(16) for v in range(16) if adj[u, v]}
    mu = {common[u, v] for u in range(16) for v in range(16)
          if u != v and not adj[u, v]}
    assert lam == {2} and mu == {2}


def test_hermitean_model(bundle):
    b = bundle("Her_3_2")
    ia = b.dr.intersection
    assert b.dr.n == 512 and ia.k == 21
    assert ia.c == (1, 2, 12) and ia.b == (21, 20, 16)
    # derived by substituting q = -2 into the closed forms
    q = -2
    for i in range(1, 4):
        assert ia.c[i - 1] == q ** (i - 1) * (q ** i - 1) // (q - 1)
    for i in range(3):
        assert ia.b[i] == -(q ** 6 - q ** (2 * i)) // (q - 1)


def test_grassmann_count_and_valency(bundle):
    # Gaussian binomial [6 choose 3]_2 by the product formula
    q = 2
    num = (q ** 6 - 1) * (q ** 5 - 1) * (q ** 4 - 1)
    den = (q ** 3 - 1) * (q ** 2 - 1) * (q - 1)
    assert num // den == 1395
    b = bundle("Jq2_6_3")
    assert b.dr.n == 1395
    assert b.dr.intersection.k == q * 7 * 7


def test_dual_polar_count(bundle):
    # number of maximal isotropics of D_4(2): prod (1 + 2^i), i < 4
    assert math.prod(1 + 2 ** i for i in range(4)) == 270
    assert bundle("DP_D4_2").dr.n == 270


def test_folded_half_cube_size(bundle):
    assert bundle("halffoldH_12_2").dr.n == 1024


def test_family_data_theta_values():
    fd = family_data(FamilySpec(family="johnson", params={"N": 6, "D": 3}))
    st = fd.structures[0]
    assert st.theta == [9, 3, -1, -3]
    want = [Fraction(5), Fraction(5, 3), Fraction(-5, 3), Fraction(-5)]
    assert np.allclose(st.theta_star, [float(v) for v in want], rtol=1e-12)
    fd = family_data(FamilySpec(family="odd", params={"D": 3}))
    assert fd.structures[0].theta == [4, -3, 2, -1]
    fd = family_data(FamilySpec(family="halved_cube", params={"N": 6}))
    assert fd.structures[0].theta == [15, 5, -1, -3]
    assert fd.structures[0].theta_star == [6, 2, -2, -6]


def test_not_buildable_families():
    with pytest.raises(NotBuildable):
        construct(catalogue_by_key()["halfDP_q4_D4"])
    with pytest.raises(NotBuildable):
        construct(FamilySpec(family="grassmann", params={"q": 3, "N": 6, "D": 3}))


def test_doob_2_0_matches_h24_parameters():
    # a larger Doob graph (two Shrikhande factors): D = 4, array of H(4,4)
    fd = family_data(FamilySpec(family="doob", params={"n": 2, "m": 0}))
    fh = family_data(FamilySpec(family="hamming", params={"D": 4, "N": 4}))
    assert fd.intersection == fh.intersection
    g = construct(FamilySpec(family="doob", params={"n": 2, "m": 0}))
    assert g.n == 256
    dr = build_drgraph(g)
    assert dr.intersection == fh.intersection

import itertools
from fractions import Fraction

import numpy as np
import pytest

from nortonlab.config import DEFAULT
from nortonlab.spectral import (
    check_three_term,
    dual_eigenvalues,
    eigenvalues,
    scheme_from_array,
)


def test_eigenvalues_examples(bundle):
    assert np.allclose(sorted(eigenvalues(bundle("H_3_2").dr)), [-3, -1, 1, 3], atol=1e-9)
    assert np.allclose(sorted(eigenvalues(bundle("J_6_3").dr)), [-3, -1, 3, 9], atol=1e-9)
    # O_4 ordering per its Q-structure is (4, -3, 2, -1); the value set:
    assert np.allclose(sorted(eigenvalues(bundle("O_4").dr)), [-3, -1, 2, 4], atol=1e-9)


@pytest.mark.parametrize("key", ["H_3_2", "J_6_3", "J_7_3", "O_4", "Doob_1_1"])
def test_tridiagonal_matches_dense_adjacency(key, bundle):
    # oracle: dense eigensolve of the full n x n adjacency matrix
    b = bundle(key)
    A = b.graph.adjacency_csr().toarray()
    w = np.linalg.eigvalsh(A)
    distinct = []
    for v in np.sort(w):
        if not distinct or abs(v - distinct[-1]) > 1e-6:
            distinct.append(float(v))
    assert np.allclose(sorted(eigenvalues(b.dr)), distinct, atol=1e-8)


def test_idempotent_invariants(bundle):
    for key in ("H_3_2", "J_6_3", "Doob_1_1"):
        b = bundle(key)
        n = b.dr.n
        total = sum(b.sd.idempotents)
        assert np.abs(total - np.eye(n)).max() < 1e-9
        for i, E in enumerate(b.sd.idempotents):
            for j, F in enumerate(b.sd.idempotents):
                want = E if i == j else 0.0
                assert np.abs(E @ F - want).max() < 1e-9


def test_multiplicities_against_dense_oracle(bundle):
    b = bundle("H_3_2")
    # dense-eigensolve multiplicity of each eigenvalue
    A = b.graph.adjacency_csr().toarray()
    w = np.linalg.eigvalsh(A)
    for th, m in zip(b.sd.theta, b.sd.multiplicities):
        assert int((np.abs(w - th) < 1e-8).sum()) == m

    def mult_at(bb, val):
        idx = int(np.argmin(np.abs(bb.sd.theta - val)))
        assert abs(bb.sd.theta[idx] - val) < 1e-9
        return bb.sd.multiplicities[idx]

    assert mult_at(b, 1.0) == 3                 # rank E_1 of the 3-cube
    assert mult_at(bundle("J_6_3"), 3.0) == 5   # theta*_0 = dim(EV) = 5


def test_krein_basics(bundle):
    for key in ("J_6_3", "J_7_3", "O_4"):
        sd = bundle(key).sd
        q = sd.krein
        assert q.min() >= 0
        assert np.allclose(q, q.transpose(0, 2, 1))
        for i in range(q.shape[0]):
            for j in range(q.shape[0]):
                want = sd.multiplicities[i] if i == j else 0.0
                assert abs(q[0, i, j] - want) < 1e-7


def test_a_star_1_closed_form(bundle):
    # a*_1 = (th_1 th*_1 - th_2 th*_0 + th_2 - th_0) / (th_1 - th_2)
    for key, want in [("J_6_3", Fraction(0)), ("J_7_3", Fraction(1, 10))]:
        b = bundle(key)
        sig = b.sigma_for()
        ev = b.ev()
        th, ts = ev.theta, ev.theta_star
        formula = (th[1] * ts[1] - th[2] * ts[0] + th[2] - th[0]) / (th[1] - th[2])
        assert abs(formula - float(want)) < 1e-9
        assert abs(ev.a_star[1] - float(want)) < 1e-7


def _brute_force_orderings(krein, scale, tol=DEFAULT):
    m = krein.shape[0]
    nonzero = krein > tol.qpoly_zero * np.maximum(scale, 1e-30)
    found = []
    for perm in itertools.permutations(range(1, m)):
        sigma = (0,) + perm
        ok = True
        for h in range(m):
            for i in range(m):
                for j in range(m):
                    v = nonzero[sigma[h], sigma[i], sigma[j]]
                    bound = (h > i + j or i > h + j or j > h + i)
                    edge = (h == i + j or i == h + j or j == h + i)
                    if bound and v:
                        ok = False
                    if edge and not v:
                        ok = False
        if ok:
            found.append(sigma)
    return sorted(found)


@pytest.mark.parametrize("key", ["H_3_2", "J_6_3", "J_7_3", "O_4", "halfH_7_2",
                                 "foldH_7_2", "H_4_2", "halfH_6_2"])
def test_orderings_vs_brute_force(key, bundle):
    # greedy-with-branching search cross-checked by permutation brute force
    sd = bundle(key).sd
    assert sd.qpoly_orderings == _brute_force_orderings(sd.krein, sd.krein_scale)


def test_ordering_examples(bundle):
    assert (0, 1, 2, 3) in bundle("H_3_2").sd.qpoly_orderings
    assert len(bundle("J_7_3").sd.qpoly_orderings) == 1
    assert len(bundle("halfH_7_2").sd.qpoly_orderings) >= 2
    assert len(bundle("foldH_7_2").sd.qpoly_orderings) >= 2


def test_dual_eigenvalues_examples(bundle):
    b = bundle("J_6_3")
    ds = dual_eigenvalues(b.dr, b.sd.idempotents[b.sigma_for()[1]])
    assert np.allclose(ds.theta_star, [5, 5 / 3, -5 / 3, -5], rtol=1e-12)
    b = bundle("halfH_6_2")
    ds = dual_eigenvalues(b.dr, b.sd.idempotents[b.sigma_for()[1]])
    assert np.allclose(ds.theta_star, [6, 2, -2, -6], rtol=1e-12)


def test_antipodal_dual_eigenvalues(bundle):
    # theta*_D = -theta*_0 iff antipodal 2-cover; else |theta*_i| < theta*_0
    for key in ("J_6_3", "halfH_6_2", "halfH_8_2", "H_4_2"):
        ts = bundle(key).ev().theta_star
        assert abs(ts[-1] + ts[0]) < 1e-9
    for key in ("J_7_3", "O_4", "Her_3_2", "Doob_1_1"):
        ts = bundle(key).ev().theta_star
        assert (np.abs(ts[1:]) < ts[0]).all()


def test_three_term_recurrence(bundle):
    for key in ("H_3_2", "J_7_3", "O_4", "halfH_7_2"):
        b = bundle(key)
        for st in b.fd.structures:
            ev = b.ev(st.label)
            res = check_three_term(b.dr.intersection, ev.theta_star, ev.theta[1])
            assert res < 1e-8 * max(1.0, abs(ev.theta_star[0]))


def test_array_scheme_matches_graph_route(bundle):
    # Krein parameters from character sums vs the trace formula
    for key in ("J_7_3", "O_4", "halfH_7_2"):
        b = bundle(key)
        sch = scheme_from_array(b.dr.intersection)
        assert np.allclose(sch.theta, b.sd.theta, atol=1e-8)
        assert list(sch.multiplicities) == list(b.sd.multiplicities)
        assert np.allclose(sch.krein, b.sd.krein, atol=1e-6)
        assert sch.qpoly_orderings == b.sd.qpoly_orderings
        for sig in sch.qpoly_orderings:
            ds_graph = dual_eigenvalues(b.dr, b.sd.idempotents[sig[1]])
            assert np.allclose(sch.dual_sequence(sig).theta_star,
                               ds_graph.theta_star, rtol=1e-8)

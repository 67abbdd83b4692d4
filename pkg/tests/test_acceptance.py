"""Acceptance criteria.  Each test covers one numbered criterion and prints a
pass line; run with ``pytest tests/test_acceptance.py -v -s``.
"""

import json
import time

import numpy as np
import pytest

from nortonlab.families import FamilySpec, catalogue, catalogue_by_key, construct, family_data
from nortonlab.graphcore import build_drgraph
from nortonlab.kites import kite_numbers, verify_kite_recurrence
from nortonlab.norton import (
    balance_report,
    check_norton_balanced,
    evectors,
    verify_norton_formula_all,
    verify_special_dependencies,
)
from nortonlab.phidc import (
    cauchy_schwarz_gap,
    check_det3,
    dc_check,
    param_profile,
    predict_norton_balance,
)
from nortonlab.spectral import analyze_spectrum, dual_eigenvalues, scheme_from_array

BUILDABLE = [s.key for s in catalogue() if s.buildable and s.drg_instance]


def _ok(n, msg):
    print(f"ACCEPTANCE {n}: PASS - {msg}")


def _profile_for(fam, params, struct=0):
    fd = family_data(FamilySpec(family=fam, params=params))
    st = fd.structures[struct]
    if len(st.theta_star):
        ts = np.array(st.theta_star, dtype=float)
        th = np.array(st.theta, dtype=float)
    else:
        sch = scheme_from_array(fd.intersection)
        sig = sch.qpoly_orderings[0]
        ts = sch.dual_sequence(sig).theta_star
        th = sch.theta_seq(sig)
    return param_profile(fd.intersection, ts, fd.intersection.a[1], theta=th)


def test_criterion_1_spectral_golden_data():
    """Computed theta and theta* match the closed forms at relative 1e-9,
    within 60 s for the whole buildable catalogue."""
    t0 = time.perf_counter()
    checked = 0
    for key in BUILDABLE:
        spec = catalogue_by_key()[key]
        g = construct(spec)
        dr = build_drgraph(g)
        sd = analyze_spectrum(dr)
        fd = family_data(spec)
        assert dr.intersection == fd.intersection, key
        for st in fd.structures:
            match = None
            for sig in sd.qpoly_orderings:
                if np.allclose(sd.theta_seq(sig), st.theta, rtol=1e-9, atol=1e-9):
                    match = sig
            assert match is not None, (key, st.label)
            ds = dual_eigenvalues(dr, sd.idempotents[match[1]])
            assert np.allclose(ds.theta_star, st.theta_star, rtol=1e-9,
                               atol=1e-9 * max(map(abs, st.theta_star))), (key, st.label)
            checked += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0, f"spectral golden run took {elapsed:.1f}s"
    _ok(1, f"{checked} Q-structures over {len(BUILDABLE)} graphs match closed "
           f"forms at 1e-9 in {elapsed:.1f}s")


def test_criterion_2_norton_formula_oracle(bundle):
    """Norton product formula residual < 1e-8 at every ordered vertex pair
    of every catalogue graph, for every Q-polynomial ordering."""
    worst_all = 0.0
    pairs = 0
    for key in BUILDABLE:
        b = bundle(key)
        for sig in b.sd.qpoly_orderings:
            ev = evectors(b.dr, b.sd, sig)
            worst, _, _ = verify_norton_formula_all(ev)
            assert worst < 1e-8, (key, sig, worst)
            worst_all = max(worst_all, worst)
            pairs += b.dr.n * (b.dr.n - 1)
    _ok(2, f"max residual {worst_all:.2e} over {pairs} ordered pairs")


NB_TRUE = ["H_3_2", "H_4_2", "H_3_4", "J_6_3", "J_7_3", "J_8_4", "O_4",
           "Jq2_6_3", "halfH_6_2", "halfH_8_2", "halfH_7_2", "foldH_8_2",
           "foldH_7_2", "halffoldH_12_2", "DP_D4_2"]
NB_FALSE = ["Doob_1_1", "Her_3_2"]
BOTH_ORDERINGS = ["halfH_7_2", "foldH_7_2"]


def test_criterion_3_balance_verdicts(bundle):
    """Norton-balanced exactly as published; FALSE cases carry witnesses."""
    for key in NB_TRUE:
        b = bundle(key)
        any_nb = False
        for sig in b.sd.qpoly_orderings:
            ev = evectors(b.dr, b.sd, sig)
            ok, _ = check_norton_balanced(ev)
            any_nb = any_nb or ok
        assert any_nb, key
    for key in BOTH_ORDERINGS:
        b = bundle(key)
        for st in b.fd.structures:
            ok, _ = check_norton_balanced(b.ev(st.label))
            assert ok, (key, st.label)
    for key in NB_FALSE:
        b = bundle(key)
        for sig in b.sd.qpoly_orderings:
            ev = evectors(b.dr, b.sd, sig)
            ok, witness = check_norton_balanced(ev)
            assert not ok, (key, sig)
            x, y = witness["pair"]
            assert 0 <= x < b.dr.n and 0 <= y < b.dr.n and x != y
            assert witness["distance"] == b.dr.dist[x, y]
    _ok(3, f"{len(NB_TRUE)} graphs Norton-balanced, {len(NB_FALSE)} not "
           f"(with witness pairs); both orderings checked for {BOTH_ORDERINGS}")


def test_criterion_4_kite_golden_data(bundle):
    """Measured kite numbers equal the closed forms exactly; the kite
    function is constant everywhere except on the Doob graph."""
    expect = {
        "J_6_3": [2, 4], "J_7_3": [2, 4], "J_8_4": [2, 4, 6],
        "halfH_6_2": [4, 8], "halfH_7_2": [4, 8], "halfH_8_2": [4, 8, 12],
        "halffoldH_12_2": [4, 8],
        "Jq2_6_3": [4, 12],
        "H_3_2": [0, 0], "H_4_2": [0, 0, 0], "H_3_4": [0, 0], "O_4": [0, 0],
        "foldH_8_2": [0, 0, 0], "foldH_7_2": [0, 0], "DP_D4_2": [0, 0, 0],
        "Her_3_2": [0, 0],
    }
    for key, want in expect.items():
        ks = kite_numbers(bundle(key).dr)
        assert ks.z == [float(v) for v in want], key
        assert all(ks.zeta_constant.values()), key
        assert ks.reinforced, key
    ks = kite_numbers(bundle("Doob_1_1").dr)
    assert not ks.reinforced
    assert not all(ks.zeta_constant.values())
    assert ks.witnesses, "Doob non-constancy must carry a witness"
    _ok(4, f"kite numbers exact on {len(expect)} graphs; Doob fails with witness "
           f"{ks.witnesses[2]}")


def test_criterion_5_parameter_pipeline_identities(bundle):
    """Kite recurrence, vanishing 3x3 minors, and nonnegative gaps with
    equality on Norton-balanced reinforced families."""
    nb_true = set(NB_TRUE)
    for key in BUILDABLE:
        b = bundle(key)
        ks = kite_numbers(b.dr)
        for sig in b.sd.qpoly_orderings:
            ev = evectors(b.dr, b.sd, sig)
            pp = ev.profile()
            assert verify_kite_recurrence(ks, pp), (key, sig)
            assert check_det3(pp) < 1e-6, (key, sig)
            if ks.reinforced:
                gaps = cauchy_schwarz_gap(pp, ks)
                assert all(g >= -1e-8 for g in gaps.values()), (key, sig)
                if key in nb_true and check_norton_balanced(ev)[0]:
                    assert all(abs(g) < 1e-8 for g in gaps.values()), (key, sig)
    # the minor test is vacuous below D = 5; exercise it on parameter inputs
    for fam, params in [("johnson", {"N": 12, "D": 5}), ("hamming", {"D": 6, "N": 3}),
                        ("halved_cube", {"N": 11}), ("grassmann", {"q": 2, "N": 10, "D": 5})]:
        pp = _profile_for(fam, params)
        assert len(pp.phi) >= 3 and check_det3(pp) < 1e-6
    _ok(5, "kite recurrence, det3 minors and Cauchy-Schwarz gaps hold on every "
           "catalogue structure (det3 additionally at D >= 5)")


def test_criterion_6_dc_audit_table():
    """DC verdicts and common roots across the audit table."""
    table = [
        ("johnson", {"N": 10, "D": 4}, True, 2.0),
        ("hamming", {"N": 2, "D": 5}, True, 0.0),
        ("halved_cube", {"N": 8}, True, 4.0),
        ("halved_cube", {"N": 11}, True, 4.0),
        ("folded_half_cube", {"N": 16}, True, 4.0),
        ("halved_dual_polar", {"pn": 2, "D": 4}, True, 18.0),
        ("grassmann", {"q": 2, "N": 8, "D": 4}, True, 4.0),
        ("bilinear_forms", {"q": 2, "D": 4, "N": 4}, False, None),
        ("alternating_forms", {"q": 2, "N": 8}, False, None),
        ("grassmann", {"q": 2, "N": 9, "D": 4}, False, None),
        ("grassmann", {"q": 2, "N": 10, "D": 4}, False, None),
    ]
    for fam, params, want, xi in table:
        pp = _profile_for(fam, params)
        v = dc_check(pp)
        assert v.is_dc == want, (fam, params)
        if xi is not None:
            assert v.common_root is not None
            assert abs(v.common_root - xi) < 1e-6 * max(1.0, abs(xi)), (fam, params)
    # halved dual polar root is q^(1/2) (q^(1/2) + 1)^2 at q = 4
    assert abs(2 * (2 + 1) ** 2 - 18) == 0
    _ok(6, f"{len(table)} DC verdicts with roots matched at 1e-6")


def test_criterion_7_dependence_golden_data(bundle):
    """Published dependence identities verify pairwise below 1e-8."""
    cases = [
        ("J_6_3", "principal", {"john1", "john2"}),
        ("J_7_3", "principal", {"john1"}),
        ("H_3_2", "principal", {"rr1", "rr2"}),
        ("H_4_2", "second", {"one1", "one2"}),
        ("O_4", "principal", {"odd18"}),
        ("Jq2_6_3", "principal", {"step1", "step2"}),
        ("Her_3_2", "principal", {"Hermstep1", "Hermstep2"}),
        ("halffoldH_12_2", "principal", {"fhc1", "fhc2"}),
    ]
    lines = []
    for key, label, names in cases:
        b = bundle(key)
        out = verify_special_dependencies(b.ev(label), b.spec, label)
        assert names <= set(out), (key, set(out))
        for name in names:
            assert out[name]["max_residual"] < 1e-8, (key, name, out[name])
        lines.append(f"{key}:{max(out[n]['max_residual'] for n in names):.1e}")
    _ok(7, "identities verified pairwise; worst residuals " + ", ".join(lines))


def test_criterion_8_hierarchy_monotonicity(bundle):
    """strongly balanced => Norton-balanced => four-vector dependence, and
    strongly balanced <=> dual- or almost-dual-bipartite, on every instance."""
    for key in BUILDABLE:
        b = bundle(key)
        for sig in b.sd.qpoly_orderings:
            ev = evectors(b.dr, b.sd, sig)
            rep = balance_report(ev, with_balanced=False)
            sb = rep.strongly_balanced
            nb = rep.norton_balanced
            dep = rep.four_vector_dependent_everywhere
            assert (not sb) or nb, (key, sig)
            assert (not nb) or dep, (key, sig)
            cls = rep.classification
            assert sb == (cls["dual_bipartite"] or cls["almost_dual_bipartite"]), (key, sig)
    _ok(8, "hierarchy and the strongly-balanced equivalence hold on every "
           "ordering of every catalogue graph")


def test_criterion_9_cross_pipeline_agreement(bundle):
    """For every reinforced catalogue graph, the parameter-pipeline
    prediction agrees with the vertex-level Norton-balance verdict."""
    count = 0
    for key in BUILDABLE:
        b = bundle(key)
        ks = kite_numbers(b.dr)
        if not ks.reinforced:
            continue
        for sig in b.sd.qpoly_orderings:
            ev = evectors(b.dr, b.sd, sig)
            pred, _, _, _ = predict_norton_balance(ev.profile(), ks)
            vertex, _ = check_norton_balanced(ev)
            assert pred == vertex, (key, sig, pred, vertex)
            count += 1
    _ok(9, f"prediction equals vertex-level verdict on {count} reinforced structures")


def test_criterion_10_hamming_doob_separation():
    """Same intersection numbers, opposite Norton-balance, within 5 s."""
    t0 = time.perf_counter()
    verdicts = {}
    arrays = {}
    for key in ("H_3_4", "Doob_1_1"):
        spec = catalogue_by_key()[key]
        dr = build_drgraph(construct(spec))
        sd = analyze_spectrum(dr)
        ev = evectors(dr, sd, sd.qpoly_orderings[0])
        verdicts[key] = check_norton_balanced(ev)[0]
        arrays[key] = json.dumps(dr.intersection.as_dict(), sort_keys=True)
    elapsed = time.perf_counter() - t0
    assert arrays["H_3_4"] == arrays["Doob_1_1"]
    assert verdicts["H_3_4"] is True and verdicts["Doob_1_1"] is False
    assert elapsed < 5.0, f"separation took {elapsed:.2f}s"
    _ok(10, f"identical arrays, NB true vs false, end to end in {elapsed:.2f}s")
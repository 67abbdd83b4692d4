"""Command-line front end.

Commands:
  construct          build a named family as a graph JSON file
  analyze            full analysis of a graph file, machine-readable report
  dc                 DC audit of a standalone parameter file
  certify-catalogue  run the whole catalogue, optionally diff against goldens

Exit codes: 0 clean, 2 input error, 3 resource cap, 4 discrepancy,
5 not distance-regular.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import _kernels, config
from .errors import (
    DiameterTooSmall,
    GraphFormatError,
    InvalidParams,
    NortonLabError,
    NotApplicable,
    NotBuildable,
    NotConnected,
    NotDistanceRegular,
    TooLarge,
    ValencyTooSmall,
)
from .families import catalogue, catalogue_by_key, construct, family_data
from .graphcore import (
    DEFAULT_MAX_VERTICES,
    build_drgraph,
    check_antipodal_2cover,
    load_graph,
    save_graph,
)
from .kites import kite_numbers, verify_kite_recurrence
from .norton import (
    balance_report,
    evectors,
    verify_norton_formula_all,
    verify_special_dependencies,
)
from .phidc import (
    cauchy_schwarz_gap,
    dc_check,
    load_param_file,
    param_profile,
    phi_eval,
    predict_norton_balance,
)
from .spectral import analyze_spectrum, scheme_from_array

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_DISCREPANCY = 4
EXIT_NOT_DRG = 5


def _snap(x, tol=1e-6):
    """Report integral floats as exact integers."""
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    r = round(x)
    return int(r) if abs(x - r) < tol else x


def _sanitize(obj):
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_sanitize(v) for v in obj.tolist()]
    return obj


def write_json(path: str, obj) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(_sanitize(obj), fh, indent=1, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def _seq(values, snap=True):
    return [_snap(v) if snap else float(v) for v in values]


# ---------------------------------------------------------------------------
# analysis orchestration

def run_analysis(g, tol=config.DEFAULT, family_key: str | None = None,
                 with_balanced: bool = True, sample: int = 0,
                 max_vertices: int = DEFAULT_MAX_VERTICES) -> dict:
    """Analyze one graph end to end; returns the report dict.

    When family_key names a catalogue entry, the closed-form predictions are
    cross-checked and any mismatch is recorded as a first-class discrepancy.
    ``sample > 0`` restricts the per-source heavy passes to that many source
    vertices; the resulting report is marked non-certifying.
    """
    timings = {}
    discrepancies = []
    sources = None if sample <= 0 else range(min(sample, g.n))

    def clock(name, fn, *args, **kw):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        timings[name] = round(time.perf_counter() - t0, 3)
        return out

    dr = clock("build_drgraph", build_drgraph, g, max_vertices)
    sd = clock("spectrum", analyze_spectrum, dr, tol)
    ks = clock("kites", kite_numbers, dr, tol)

    fd = None
    spec = None
    if family_key is not None:
        spec = catalogue_by_key().get(family_key)
        if spec is None:
            raise InvalidParams(f"unknown catalogue key {family_key!r}")
        fd = family_data(spec)
        if fd.intersection != dr.intersection:
            discrepancies.append({
                "check": "intersection_array",
                "detail": {"computed": dr.intersection.as_dict(),
                           "predicted": fd.intersection.as_dict()},
            })
        if fd.z is not None:
            for i in range(2, dr.diameter + 1):
                if abs(ks.z_at(i) - fd.z[i - 2]) > 1e-9:
                    discrepancies.append({
                        "check": "kite_number",
                        "detail": {"i": i, "measured": ks.z_at(i),
                                   "predicted": fd.z[i - 2]},
                    })
        if fd.reinforced is not None and fd.reinforced != ks.reinforced:
            discrepancies.append({
                "check": "reinforced",
                "detail": {"measured": ks.reinforced, "predicted": fd.reinforced},
            })

    orderings_out = []
    nb_any = False
    matched_structures = set()
    for sigma in sd.qpoly_orderings:
        ev = clock(f"evectors{sigma}", evectors, dr, sd, sigma, tol)
        rep = clock(f"balance{sigma}", balance_report, ev,
                    with_balanced=with_balanced, sources=sources)
        nb_any = nb_any or rep.norton_balanced
        pp = ev.profile()
        dc = dc_check(pp, tol)
        worst_main, wit_main, star_max = clock(
            f"norton_formula{sigma}", verify_norton_formula_all, ev,
            sources=sources)
        if worst_main > tol.identity_residual:
            discrepancies.append({
                "check": "norton_formula_residual",
                "detail": {"sigma": list(sigma), "max_residual": worst_main,
                           "witness": list(wit_main)},
            })
        # lem:warmup1: a*_1 = 0 iff all Norton products vanish
        star_zero = star_max <= 1e-7 * max(1.0, ev.theta_star[0] / dr.n)
        if star_zero != rep.classification["a1star_zero"]:
            discrepancies.append({
                "check": "a1star_zero_equivalence",
                "detail": {"sigma": list(sigma), "max_star_norm": star_max,
                           "a1star_zero": rep.classification["a1star_zero"]},
            })
        if not verify_kite_recurrence(ks, pp, tol):
            discrepancies.append({
                "check": "kite_recurrence", "detail": {"sigma": list(sigma)}})
        prediction = None
        if ks.reinforced:
            pred, lams, ratios, gaps = predict_norton_balance(pp, ks, tol)
            gaps_checked = cauchy_schwarz_gap(pp, ks, tol)
            prediction = {
                "norton_balanced": pred,
                "lambda": {str(i): v for i, v in lams.items()},
                "excluded_ratio": {str(i): v for i, v in ratios.items()},
                "gaps": {str(i): v for i, v in gaps_checked.items()},
            }
            if pred != rep.norton_balanced:
                discrepancies.append({
                    "check": "parameter_vs_vertex_norton_balance",
                    "detail": {"sigma": list(sigma), "predicted": pred,
                               "vertex_level": rep.norton_balanced},
                })
        # hierarchy consequences of the classification (sec. 7 results)
        cls = rep.classification
        if (cls["bipartite"] or cls["almost_bipartite"] or cls["tight"]) \
                and not rep.norton_balanced:
            discrepancies.append({
                "check": "classification_implies_norton_balance",
                "detail": {"sigma": list(sigma), "classification": cls},
            })
        if (cls["dual_bipartite"] or cls["almost_dual_bipartite"]) \
                != rep.strongly_balanced:
            discrepancies.append({
                "check": "strongly_balanced_equivalence",
                "detail": {"sigma": list(sigma), "classification": cls,
                           "strongly_balanced": rep.strongly_balanced},
            })
        entry = {
            "sigma": list(sigma),
            "theta": _seq(sd.theta_seq(sigma)),
            "theta_star": _seq(ev.theta_star),
            "a_star": _seq(ev.a_star),
            "balance": rep.as_dict(),
            "param_profile": {
                "beta": _snap(pp.beta), "gamma": pp.gamma,
                "gamma_star": _snap(pp.gamma_star),
                "phi": {str(i): list(uvw) for i, uvw in pp.phi.items()},
            },
            "dc": dc.as_dict(),
            "norton_formula_max_residual": worst_main,
            "max_norton_product_norm": star_max,
            "prediction_vs_measured": prediction,
        }
        if spec is not None and fd is not None:
            st_match = None
            for k, st in enumerate(fd.structures):
                if len(st.theta) and np.allclose(sd.theta_seq(sigma), st.theta,
                                                 rtol=1e-9, atol=1e-9):
                    st_match = (k, st)
            if st_match is not None:
                k, st = st_match
                matched_structures.add(k)
                entry["structure"] = st.label
                if not np.allclose(ev.theta_star, st.theta_star, rtol=1e-9, atol=1e-9):
                    discrepancies.append({
                        "check": "dual_eigenvalues_golden",
                        "detail": {"sigma": list(sigma),
                                   "computed": _seq(ev.theta_star),
                                   "predicted": _seq(st.theta_star)},
                    })
                if st.norton_balanced is not None \
                        and st.norton_balanced != rep.norton_balanced:
                    discrepancies.append({
                        "check": "norton_balanced_golden",
                        "detail": {"sigma": list(sigma),
                                   "computed": rep.norton_balanced,
                                   "predicted": st.norton_balanced},
                    })
                if st.dc is not None and st.dc != dc.is_dc:
                    discrepancies.append({
                        "check": "dc_golden",
                        "detail": {"sigma": list(sigma), "computed": dc.is_dc,
                                   "predicted": st.dc},
                    })
                if st.xi is not None:
                    # the published xi must annihilate every Phi_i (root
                    # membership; at D >= 4 this pins the common root)
                    for i, uvw in pp.phi.items():
                        norm = max(abs(c) for c in uvw)
                        if norm <= 1e-12:
                            continue
                        if abs(phi_eval(pp, i, st.xi)) / norm > tol.dc_root:
                            discrepancies.append({
                                "check": "dc_root_golden",
                                "detail": {"sigma": list(sigma), "i": i,
                                           "xi": st.xi,
                                           "phi_at_xi": phi_eval(pp, i, st.xi)},
                            })
                    if dc.common_root is not None \
                            and abs(dc.common_root - st.xi) > 1e-6 * max(1.0, abs(st.xi)):
                        discrepancies.append({
                            "check": "dc_root_golden",
                            "detail": {"sigma": list(sigma),
                                       "computed": _sanitize(dc.as_dict()["common_root"]),
                                       "predicted": st.xi},
                        })
                deps = clock(f"dependencies{sigma}",
                             verify_special_dependencies, ev, spec, st.label)
                entry["special_dependencies"] = {
                    name: d["max_residual"] for name, d in deps.items()}
                for name, d in deps.items():
                    if d["max_residual"] > tol.identity_residual:
                        discrepancies.append({
                            "check": f"dependency_{name}",
                            "detail": {"sigma": list(sigma),
                                       "max_residual": d["max_residual"]},
                        })
        orderings_out.append(entry)

    if fd is not None:
        expected = {k for k, st in enumerate(fd.structures) if len(st.theta)}
        if not expected <= matched_structures:
            discrepancies.append({
                "check": "qpoly_structures_found",
                "detail": {"expected": sorted(expected),
                           "matched": sorted(matched_structures)},
            })

    report = {
        "input": {"name": g.name or "", "n": g.n, "family_key": family_key,
                  "backend": _kernels.BACKEND},
        "sample_mode": sample if sample > 0 else None,
        "certifying": sample <= 0,
        "tolerance_profile": config.as_dict(tol),
        "intersection_array": dr.intersection.as_dict(),
        "antipodal_2cover": check_antipodal_2cover(dr),
        "spectral": {
            "theta_provisional": _seq(sd.theta),
            "multiplicities": list(sd.multiplicities),
            "krein_nonzero": sorted(
                [list(map(int, idx)) for idx in
                 zip(*np.nonzero(sd.krein > tol.qpoly_zero
                                 * np.maximum(sd.krein_scale, 1e-30)))]
            ),
            "qpoly_orderings": [list(s) for s in sd.qpoly_orderings],
        },
        "kites": ks.as_dict(),
        "orderings": orderings_out,
        "graph_verdicts": {
            "norton_balanced": nb_any,
            "reinforced": ks.reinforced,
        },
        "discrepancies": discrepancies,
        "timings": timings,
    }
    return report


# ---------------------------------------------------------------------------
# commands

def _parse_params(text: str) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise InvalidParams(f"bad parameter {item!r}; expected key=value")
        k, v = item.split("=", 1)
        out[k.strip()] = int(v)
    return out


def cmd_construct(args) -> int:
    from .families import FamilySpec

    params = _parse_params(args.params)
    spec = FamilySpec(family=args.family, params=params)
    g = construct(spec)
    if g.n > args.max_vertices:
        raise TooLarge(f"{g.n} vertices exceeds cap {args.max_vertices}")
    save_graph(g, args.out)
    print(f"wrote {args.out}: n={g.n}, edges={g.edge_count}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    tol = config.profile(args.tolerance_profile)
    g = load_graph(args.graph)
    try:
        report = run_analysis(
            g, tol=tol, family_key=args.family_key,
            with_balanced=not args.skip_balanced,
            sample=args.sample,
            max_vertices=args.max_vertices,
        )
    except NotDistanceRegular as exc:
        report = {
            "input": {"name": g.name or "", "n": g.n},
            "error": "NotDistanceRegular",
            "witness": list(exc.witness),
        }
        if args.report:
            write_json(args.report, report)
        print(f"not distance-regular: {exc}", file=sys.stderr)
        return EXIT_NOT_DRG
    if args.report:
        write_json(args.report, report)
    ok = not report["discrepancies"]
    print(json.dumps(_sanitize({
        "n": g.n,
        "norton_balanced": report["graph_verdicts"]["norton_balanced"],
        "reinforced": report["graph_verdicts"]["reinforced"],
        "orderings": len(report["orderings"]),
        "discrepancies": len(report["discrepancies"]),
    })))
    return EXIT_OK if ok else EXIT_DISCREPANCY


def cmd_dc(args) -> int:
    with open(args.paramfile) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc}")
    ia, ts, a1 = load_param_file(obj)
    tol = config.profile(args.tolerance_profile)
    pp = param_profile(ia, ts, a1, tol=tol)
    verdict = dc_check(pp, tol)
    out = {"intersection_array": ia.as_dict(), "dc": verdict.as_dict(),
           "beta": _snap(pp.beta), "gamma_star": _snap(pp.gamma_star)}
    print(json.dumps(_sanitize(out), indent=1, sort_keys=True))
    return EXIT_OK


_GOLDEN_SKIP = {"timings", "backend"}


def _diff(a, b, path=""):
    """Structural diff with 1e-9-relative float comparison."""
    out = []
    if isinstance(a, dict) and isinstance(b, dict):
        for k in sorted(set(a) | set(b)):
            if k in _GOLDEN_SKIP:
                continue
            if k not in a or k not in b:
                out.append(f"{path}/{k}: missing on one side")
            else:
                out += _diff(a[k], b[k], f"{path}/{k}")
    elif isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            out.append(f"{path}: length {len(a)} vs {len(b)}")
        else:
            for i, (x, y) in enumerate(zip(a, b)):
                out += _diff(x, y, f"{path}[{i}]")
    elif isinstance(a, (int, float)) and isinstance(b, (int, float)) \
            and not isinstance(a, bool) and not isinstance(b, bool):
        if abs(float(a) - float(b)) > 1e-9 * max(1.0, abs(a), abs(b)):
            out.append(f"{path}: {a} vs {b}")
    elif a != b:
        out.append(f"{path}: {a!r} vs {b!r}")
    return out


def cmd_certify(args) -> int:
    tol = config.profile(args.tolerance_profile)
    os.makedirs(args.out, exist_ok=True)
    only = set(args.only.split(",")) if args.only else None
    failures = []
    for spec in catalogue():
        if not spec.buildable or not spec.drg_instance:
            continue
        if only is not None and spec.key not in only:
            continue
        t0 = time.perf_counter()
        g = construct(spec)
        report = run_analysis(g, tol=tol, family_key=spec.key,
                              with_balanced=not args.skip_balanced,
                              max_vertices=args.max_vertices)
        path = os.path.join(args.out, spec.key + ".json")
        write_json(path, report)
        n_disc = len(report["discrepancies"])
        print(f"{spec.key:16s} n={g.n:5d} orderings={len(report['orderings'])} "
              f"NB={report['graph_verdicts']['norton_balanced']!s:5s} "
              f"discrepancies={n_disc} ({time.perf_counter() - t0:.1f}s)")
        if n_disc:
            failures.append(spec.key)
        if args.golden:
            gpath = os.path.join(args.golden, spec.key + ".json")
            if not os.path.exists(gpath):
                failures.append(f"{spec.key}: golden missing")
                continue
            with open(gpath) as fh:
                golden = json.load(fh)
            with open(path) as fh:
                fresh = json.load(fh)
            delta = _diff(fresh, golden)
            if delta:
                failures.append(f"{spec.key}: {len(delta)} golden diffs")
                for line in delta[:10]:
                    print(f"   golden diff {line}", file=sys.stderr)
    # parameter-only entries: DC audits
    for spec in catalogue():
        if spec.buildable or not spec.drg_instance:
            continue
        if only is not None and spec.key not in only:
            continue
        fd = family_data(spec)
        st = fd.structures[0]
        if len(st.theta_star):
            ts = np.array(st.theta_star)
            theta = np.array(st.theta)
        else:
            sch = scheme_from_array(fd.intersection, tol)
            sig = sch.qpoly_orderings[0]
            ts = sch.dual_sequence(sig).theta_star
            theta = sch.theta_seq(sig)
        pp = param_profile(fd.intersection, ts, fd.intersection.a[1],
                           theta=theta, tol=tol)
        verdict = dc_check(pp, tol)
        out = {"family_key": spec.key,
               "intersection_array": fd.intersection.as_dict(),
               "dc": verdict.as_dict(), "beta": _snap(pp.beta),
               "gamma_star": _snap(pp.gamma_star)}
        path = os.path.join(args.out, spec.key + ".json")
        write_json(path, out)
        print(f"{spec.key:16s} (params)   DC={verdict.is_dc}")
        if st.dc is not None and st.dc != verdict.is_dc:
            failures.append(f"{spec.key}: DC verdict")
    if failures:
        print("failures: " + ", ".join(failures), file=sys.stderr)
        return EXIT_DISCREPANCY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nortonlab",
                                 description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tolerance-profile", default="default",
                       choices=sorted(config.PROFILES))
        p.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES)

    p = sub.add_parser("construct", help="build a named family graph")
    p.add_argument("--family", required=True)
    p.add_argument("--params", default="")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("analyze", help="full analysis of a graph JSON file")
    p.add_argument("--graph", required=True)
    p.add_argument("--report")
    p.add_argument("--family-key", help="catalogue key for golden cross-checks")
    p.add_argument("--skip-balanced", action="store_true",
                   help="skip the all-shell balanced-set pass")
    p.add_argument("--sample", type=int, default=0,
                   help="restrict heavy per-source passes to N sources; the "
                        "report is marked non-certifying (0 = exhaustive)")
    common(p)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("dc", help="DC audit of a parameter file")
    p.add_argument("paramfile")
    common(p)
    p.set_defaults(fn=cmd_dc)

    p = sub.add_parser("certify-catalogue", help="run the whole catalogue")
    p.add_argument("--out", required=True)
    p.add_argument("--golden")
    p.add_argument("--skip-balanced", action="store_true")
    p.add_argument("--only", help="comma-separated catalogue keys to restrict to")
    common(p)
    p.set_defaults(fn=cmd_certify)
    return ap


def main(argv=None) -> int:
    threads = os.environ.get("NORTONLAB_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (InvalidParams, GraphFormatError, NotBuildable, NotApplicable,
            NotConnected, DiameterTooSmall, ValencyTooSmall,
            FileNotFoundError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TooLarge as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NotDistanceRegular as exc:
        print(f"not distance-regular: {exc}", file=sys.stderr)
        return EXIT_NOT_DRG
    except NortonLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISCREPANCY


if __name__ == "__main__":
    sys.exit(main())

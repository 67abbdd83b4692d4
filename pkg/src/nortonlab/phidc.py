"""Parameter pipeline: from an intersection array and a dual-eigenvalue
sequence, compute beta, gamma, gamma*, the kite-recurrence coefficients
alpha_i / beta_i, the projection scalars r_i, s_i, R_i, S_i, the thresholds
z-_i and z+_{i+1}, the quadratics Phi_i, and decide the DC condition by the
generic common-root criterion.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, ToleranceProfile
from .errors import (
    DegenerateDualSequence,
    InvalidParams,
    NegativeGap,
    NotApplicable,
    PhiIndexError,
)
from .graphcore import IntersectionArray


@dataclass
class ParamProfile:
    D: int
    a1: int
    ia: IntersectionArray
    theta_star: np.ndarray
    beta: float
    gamma_star: float
    gamma: float | None
    alpha: dict          # i -> alpha_i, 2 <= i <= D
    beta_seq: dict       # i -> beta_i, 2 <= i <= D
    r: dict              # i -> r_i, 2 <= i <= D (i = D omitted on antipodal 2-covers)
    s: dict
    Rcap: dict           # i -> R_i, 1 <= i <= D-1
    Scap: dict
    z_minus: dict        # i -> z-_i, same domain as r
    z_plus: dict         # stored under key i+1 for 1 <= i <= D-1
    phi: dict            # i -> (u_i, v_i, w_i), 2 <= i <= D-1
    antipodal: bool      # theta*_D = -theta*_0: i = D projection scalars skipped

    def as_dict(self) -> dict:
        return {
            "beta": self.beta,
            "gamma_star": self.gamma_star,
            "gamma": self.gamma,
            "alpha": {str(i): v for i, v in self.alpha.items()},
            "beta_seq": {str(i): v for i, v in self.beta_seq.items()},
            "r": {str(i): v for i, v in self.r.items()},
            "s": {str(i): v for i, v in self.s.items()},
            "R": {str(i): v for i, v in self.Rcap.items()},
            "S": {str(i): v for i, v in self.Scap.items()},
            "z_minus": {str(i): v for i, v in self.z_minus.items()},
            "z_plus": {str(i): v for i, v in self.z_plus.items()},
            "phi": {str(i): list(uvw) for i, uvw in self.phi.items()},
            "antipodal_skip_at_D": self.antipodal,
        }


@dataclass
class DCVerdict:
    is_dc: bool
    common_root: complex | None
    per_i_roots: dict
    degenerate_flags: dict       # i -> {"zero": bool, "linear": bool}
    vacuous: bool                # D = 3: single quadratic, condition is weak
    note: str = ""

    def as_dict(self) -> dict:
        def enc_root(r):
            if r is None:
                return None
            if abs(r.imag) < 1e-12 * max(1.0, abs(r)):
                return float(r.real)
            return {"re": r.real, "im": r.imag}

        return {
            "is_dc": bool(self.is_dc),
            "common_root": enc_root(self.common_root),
            "per_i_roots": {str(i): [enc_root(r) for r in rs]
                            for i, rs in self.per_i_roots.items()},
            "degenerate_flags": {str(i): f for i, f in self.degenerate_flags.items()},
            "vacuous": bool(self.vacuous),
            "note": self.note,
        }


def _gamma_star_term(ts, i, gamma_star):
    """gamma*/(th*_1 - th*_2) * (th*_i - th*_1)/(th*_i + th*_0)."""
    return gamma_star / (ts[1] - ts[2]) * (ts[i] - ts[1]) / (ts[i] + ts[0])


def param_profile(ia: IntersectionArray, ts, a1: int, theta=None,
                  tol: ToleranceProfile = DEFAULT) -> ParamProfile:
    """Assemble the full parameter bundle from (array, dual sequence, a_1)."""
    D = ia.D
    t = np.asarray(ts.theta_star if hasattr(ts, "theta_star") else ts, dtype=float)
    if len(t) != D + 1:
        raise InvalidParams(f"need D+1 = {D + 1} dual eigenvalues, got {len(t)}")
    scale = np.abs(t).max()
    if np.min(np.abs(np.subtract.outer(t, t) + 2 * scale * np.eye(D + 1))) < 1e-9 * scale:
        raise DegenerateDualSequence("repeated dual eigenvalues")
    if a1 != ia.a[1]:
        raise InvalidParams(f"a1 = {a1} does not match the array (a_1 = {ia.a[1]})")

    # beta + 1 = (th*_{i-2} - th*_{i+1}) / (th*_{i-1} - th*_i), 2 <= i <= D-1
    ratios = [(t[i - 2] - t[i + 1]) / (t[i - 1] - t[i]) for i in range(2, D)]
    beta = ratios[0] - 1.0
    for rr in ratios[1:]:
        if abs(rr - ratios[0]) > tol.param_consistency * max(1.0, abs(ratios[0])):
            raise InvalidParams(
                f"beta ratio not constant over the dual sequence: {ratios}"
            )
    gams = [t[i - 1] - beta * t[i] + t[i + 1] for i in range(1, D)]
    gamma_star = gams[0]
    for g in gams[1:]:
        if abs(g - gamma_star) > tol.param_consistency * max(1.0, scale):
            raise InvalidParams(f"gamma* not constant over the dual sequence: {gams}")

    gamma = None
    if theta is not None:
        th = np.asarray(theta, dtype=float)
        gamma = float(th[0] - beta * th[1] + th[2])

    d01 = t[0] - t[2]
    alpha = {}
    beta_seq = {}
    for i in range(2, D + 1):
        alpha[i] = float((t[1] - t[2]) * (t[0] + t[1] - t[i - 1] - t[i])
                         / (d01 * (t[i - 1] - t[i])))
        beta_seq[i] = float(((t[0] - t[1]) * (t[2] - t[i])
                             - (t[1] - t[2]) * (t[1] - t[i - 1]))
                            / (d01 * (t[i - 1] - t[i])))

    antipodal = abs(t[D] + t[0]) < 1e-9 * max(1.0, scale)
    c, bf = ia.c, ia.b_full()
    r, s, z_minus = {}, {}, {}
    for i in range(2, D + 1):
        if i == D and antipodal:
            continue  # AntipodalAtD: th*_0^2 = th*_D^2, projections undefined
        den = t[0] ** 2 - t[i] ** 2
        ri = c[i - 1] * (t[0] * t[1] - t[i - 1] * t[i]) / den
        si = c[i - 1] * (t[0] * t[i - 1] - t[1] * t[i]) / den
        r[i] = float(ri)
        s[i] = float(si)
        z_minus[i] = float((ri * t[1] + si * t[i - 1] - t[0] - (c[i - 1] - 1) * t[2])
                           / (t[1] - t[2]))
    Rcap, Scap, z_plus = {}, {}, {}
    for i in range(1, D):
        den = t[0] ** 2 - t[i] ** 2
        Ri = bf[i] * (t[0] * t[1] - t[i + 1] * t[i]) / den
        Si = bf[i] * (t[0] * t[i + 1] - t[1] * t[i]) / den
        Rcap[i] = float(Ri)
        Scap[i] = float(Si)
        z_plus[i + 1] = float((t[0] + a1 * t[1] + (bf[i] - 1 - a1) * t[2]
                               - Ri * t[1] - Si * t[i + 1]) / (t[1] - t[2]))

    phi = {}
    for i in range(2, D):
        u = -alpha[i] * alpha[i + 1]
        v = (alpha[i] * (z_plus[i + 1] - a1 * beta_seq[i + 1])
             - alpha[i + 1] * (a1 * beta_seq[i] - z_minus[i]))
        w = ((a1 * beta_seq[i] - z_minus[i]) * (z_plus[i + 1] - a1 * beta_seq[i + 1])
             - c[i - 1] * bf[i] * _gamma_star_term(t, i, gamma_star) ** 2)
        phi[i] = (float(u), float(v), float(w))

    pp = ParamProfile(D=D, a1=a1, ia=ia, theta_star=t, beta=float(beta),
                      gamma_star=float(gamma_star), gamma=gamma,
                      alpha=alpha, beta_seq=beta_seq, r=r, s=s,
                      Rcap=Rcap, Scap=Scap, z_minus=z_minus, z_plus=z_plus,
                      phi=phi, antipodal=antipodal)
    _validate_profile(pp, tol)
    return pp


def _validate_profile(pp: ParamProfile, tol: ToleranceProfile) -> None:
    t = pp.theta_star
    # alpha_i + beta_i = (th*_1 - th*_i)/(th*_{i-1} - th*_i)
    for i in range(2, pp.D + 1):
        want = (t[1] - t[i]) / (t[i - 1] - t[i])
        got = pp.alpha[i] + pp.beta_seq[i]
        if abs(got - want) > tol.param_consistency * max(1.0, abs(want)):
            raise InvalidParams(f"alpha_{i} + beta_{i} identity violated")
    # beta = -2 forces u_i = 0
    if abs(pp.beta + 2.0) < 1e-9:
        for i, (u, _, _) in pp.phi.items():
            if abs(u) > tol.param_consistency * max(1.0, abs(pp.alpha[i])):
                raise InvalidParams(f"beta = -2 but u_{i} = {u} != 0")
    # rank of the (u, v, w) column matrix is at most 2
    if check_det3(pp) > tol.det3_minor:
        raise InvalidParams("3x3 minor of the (u, v, w) matrix does not vanish")


def check_det3(pp: ParamProfile) -> float:
    """Largest relative 3x3 minor of the 3 x (D-2) matrix of Phi coefficients."""
    cols = [pp.phi[i] for i in sorted(pp.phi)]
    if len(cols) < 3:
        return 0.0
    M = np.array(cols).T
    worst = 0.0
    idx = range(M.shape[1])
    for a, b, c in itertools.combinations(idx, 3):
        sub = M[:, [a, b, c]]
        scale = max(np.abs(sub).max() ** 3, 1e-30)
        worst = max(worst, abs(np.linalg.det(sub)) / scale)
    return worst


def check_aaform(pp: ParamProfile) -> float:
    """Residual of the closed form for alpha_i alpha_{i+1}."""
    t = pp.theta_star
    worst = 0.0
    for i in range(2, pp.D):
        want = ((pp.beta + 2) * (t[1] - t[2]) ** 2 * (t[0] - t[i]) * (t[1] - t[i])
                / ((t[0] - t[2]) ** 2 * (t[i - 1] - t[i]) * (t[i] - t[i + 1])))
        got = pp.alpha[i] * pp.alpha[i + 1]
        worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    return worst


def check_gams2(pp: ParamProfile) -> float:
    """Residual of the gamma* form of the mixed projection inner product."""
    t = pp.theta_star
    worst = 0.0
    for i in range(2, pp.D):
        lhs = t[2] - ((t[0] * t[1] ** 2 - t[1] * t[i - 1] * t[i]
                       + t[0] * t[i - 1] * t[i + 1] - t[1] * t[i] * t[i + 1])
                      / (t[0] ** 2 - t[i] ** 2))
        rhs = pp.gamma_star * (t[i] - t[1]) / (t[i] + t[0])
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst


def phi_eval(pp: ParamProfile, i: int, lam) -> float:
    if i not in pp.phi:
        raise PhiIndexError(f"Phi_{i} undefined; valid range 2..{pp.D - 1}")
    u, v, w = pp.phi[i]
    return u * lam * lam + v * lam + w


def phi_z2_rhs(pp: ParamProfile, i: int, z2: float) -> float:
    """Right side of the Phi_i(z_2) identity, assembled independently of the
    stored coefficients: (z_i - z-_i)(z+_{i+1} - z_{i+1}) minus the squared
    gamma* term, with z_i, z_{i+1} from the kite recurrence."""
    z_i = z2 * pp.alpha[i] + pp.a1 * pp.beta_seq[i]
    z_ip1 = z2 * pp.alpha[i + 1] + pp.a1 * pp.beta_seq[i + 1]
    ci = pp.ia.c[i - 1]
    bi = pp.ia.b_full()[i]
    gterm = ci * bi * _gamma_star_term(pp.theta_star, i, pp.gamma_star) ** 2
    return (z_i - pp.z_minus[i]) * (pp.z_plus[i + 1] - z_ip1) - gterm


def _poly_roots(u, v, w, norm):
    eps = 1e-12 * max(norm, 1.0)
    if abs(u) > eps:
        disc = cmath.sqrt(complex(v * v - 4 * u * w))
        return [(-v + disc) / (2 * u), (-v - disc) / (2 * u)]
    if abs(v) > eps:
        return [complex(-w / v)]
    return []


def dc_check(pp: ParamProfile, tol: ToleranceProfile = DEFAULT) -> DCVerdict:
    """Common complex root of Phi_2 .. Phi_{D-1}.

    Roots are matched after normalizing each Phi_i by its largest
    coefficient; |Phi_j(xi)| / norm_j below tol.dc_root counts as vanishing.
    """
    if pp.D < 3:
        raise InvalidParams("DC needs D >= 3")
    idxs = sorted(pp.phi)
    norms = {i: max(abs(c) for c in pp.phi[i]) for i in idxs}
    global_scale = max(max(norms.values()), 1.0)
    degenerate = {}
    active = []
    for i in idxs:
        zero = norms[i] <= 1e-12 * global_scale
        linear = (not zero) and abs(pp.phi[i][0]) <= 1e-12 * global_scale
        degenerate[i] = {"zero": zero, "linear": linear}
        if not zero:
            active.append(i)
    roots = {i: _poly_roots(*pp.phi[i], norms[i]) for i in active}
    vacuous = pp.D == 3

    if not active:
        return DCVerdict(is_dc=True, common_root=None, per_i_roots=roots,
                         degenerate_flags=degenerate, vacuous=vacuous,
                         note="all Phi_i identically zero; root unconstrained")

    def vanishes(i, xi):
        u, v, w = pp.phi[i]
        return abs(u * xi * xi + v * xi + w) / norms[i] < tol.dc_root

    first = active[0]
    cands = sorted(roots[first], key=lambda r: (abs(r.imag), r.real))
    if not cands:
        # nonzero constant polynomial: no root can exist
        return DCVerdict(is_dc=False, common_root=None, per_i_roots=roots,
                         degenerate_flags=degenerate, vacuous=vacuous,
                         note=f"Phi_{first} is a nonzero constant")
    if vacuous:
        # a single quadratic always has a complex root; no root is singled out
        return DCVerdict(is_dc=True, common_root=None, per_i_roots=roots,
                         degenerate_flags=degenerate, vacuous=True,
                         note="vacuous: D = 3 leaves a single quadratic")
    for xi in cands:
        if all(vanishes(j, xi) for j in active):
            return DCVerdict(is_dc=True, common_root=xi, per_i_roots=roots,
                             degenerate_flags=degenerate, vacuous=False)
    return DCVerdict(is_dc=False, common_root=None, per_i_roots=roots,
                     degenerate_flags=degenerate, vacuous=vacuous)


def predict_norton_balance(pp: ParamProfile, ks, tol: ToleranceProfile = DEFAULT):
    """Reinforced-case prediction: Norton-balanced iff Phi_i(z_2) = 0 for all
    i (and, when gamma* != 0, lambda_i avoids the excluded ratio).

    ks: KiteStats with the measured kite numbers.  Returns
    (predicted, lambdas, excluded_ratios, gaps).
    """
    if not ks.reinforced:
        raise NotApplicable("prediction requires the reinforced property")
    t = pp.theta_star
    z2 = ks.z_at(2)
    gaps = {}
    ok = True
    for i in range(2, pp.D):
        g = phi_eval(pp, i, z2)
        gaps[i] = g
        norm = max(abs(c) for c in pp.phi[i])
        if abs(g) > tol.param_consistency * max(norm * max(1.0, z2 * z2), 1.0):
            ok = False
    lambdas = {}
    ratios = {}
    bf = pp.ia.b_full()
    gstar_scale = 1e-9 * max(1.0, np.abs(t).max())
    if abs(pp.gamma_star) > gstar_scale:
        for i in range(2, pp.D):
            ratios[i] = (t[i] - t[i + 1]) / (t[i - 1] - t[i])
            lam = ((t[1] - t[2]) * (ks.z_at(i) - pp.z_minus[i])
                   / (t[i] - t[1]) * (t[i] + t[0]) / (pp.gamma_star * bf[i]))
            lambdas[i] = lam
            if abs(lam - ratios[i]) <= tol.param_consistency * max(1.0, abs(ratios[i])):
                ok = False
    return ok, lambdas, ratios, gaps


def cauchy_schwarz_gap(pp: ParamProfile, ks, tol: ToleranceProfile = DEFAULT) -> dict:
    """Phi_i(z_2) for each i; all must be >= -tol.gap_floor (reinforced case)."""
    if not ks.reinforced:
        raise NotApplicable("gaps are only meaningful for reinforced graphs")
    z2 = ks.z_at(2)
    gaps = {i: phi_eval(pp, i, z2) for i in range(2, pp.D)}
    for i, g in gaps.items():
        if g < -tol.gap_floor:
            raise NegativeGap(f"Phi_{i}(z_2) = {g} < 0 on a reinforced input")
    return gaps


# ---------------------------------------------------------------------------
# standalone parameter files: {"c": [...], "a": [...], "b": [...],
#                              "theta_star": [...], "a1": int}

def load_param_file(obj: dict):
    try:
        c = [int(v) for v in obj["c"]]
        a = [int(v) for v in obj["a"]]
        b = [int(v) for v in obj["b"]]
        ts = [float(v) for v in obj["theta_star"]]
        a1 = int(obj["a1"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParams(f"malformed parameter file: {exc}")
    D = len(c)
    if len(a) != D + 1 or len(b) != D or len(ts) != D + 1:
        raise InvalidParams("parameter file length mismatch")
    ia = IntersectionArray(D=D, c=tuple(c), a=tuple(a), b=tuple(b))
    ia.validate()
    return ia, np.array(ts), a1

"""Norton product on the eigenspace EV and the vertex-level balance hierarchy.

Heavy all-pairs checks run through two engines:

* exact vector identities (the Norton product formula, the per-family
  linear dependencies) are evaluated in coordinates of an orthonormal basis
  V of EV (E = V V^T, rank = multiplicity), batched over one source vertex
  at a time -- residual norms are exact Euclidean norms;
* dependence and span-membership verdicts use per-pair Gram matrices
  assembled from integer shell statistics and the dual eigenvalues, so each
  entry is a short exact combination of theta* values.  Verdicts threshold
  squared scale-free residuals (equivalently, smallest singular values of
  normalized Gram matrices) at tol.gram_dependent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, ToleranceProfile
from .errors import (
    GammaStarZero,
    InvalidPair,
    NotDependent,
    NotInEigenspace,
    ToleranceViolation,
)
from .graphcore import DRGraph
from .phidc import ParamProfile, param_profile
from .spectral import SpectralData, dual_eigenvalues


@dataclass
class EVectors:
    """A chosen Q-polynomial idempotent E = E_1 with its eigenspace frame."""

    dr: DRGraph
    sigma: tuple
    E: np.ndarray
    V: np.ndarray                 # n x m, orthonormal columns, E = V V^T
    theta: np.ndarray             # theta sequence along the ordering
    theta_star: np.ndarray
    a_star: np.ndarray
    a_star_scale: np.ndarray
    ED: np.ndarray | None = None  # last idempotent of the ordering (tight case)
    tol: ToleranceProfile = DEFAULT
    _tables: dict | None = field(default=None, repr=False)
    _profile: ParamProfile | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.dr.n

    @property
    def D(self) -> int:
        return self.dr.diameter

    def profile(self) -> ParamProfile:
        if self._profile is None:
            self._profile = param_profile(
                self.dr.intersection, self.theta_star,
                self.dr.intersection.a[1], theta=self.theta, tol=self.tol
            )
        return self._profile

    def tables(self) -> dict:
        if self._tables is None:
            self._tables = _pair_tables(self)
        return self._tables


def evectors(dr: DRGraph, sd: SpectralData, sigma, tol: ToleranceProfile = DEFAULT) -> EVectors:
    E = sd.idempotents[sigma[1]]
    w, v = np.linalg.eigh(E)
    sel = w > 0.5
    if np.abs(w[sel] - 1.0).max() > 1e-8 or np.abs(w[~sel]).max() > 1e-8:
        raise ToleranceViolation("idempotent eigenvalues are not within tolerance of 0/1")
    V = np.ascontiguousarray(v[:, sel])
    if int(sel.sum()) != sd.multiplicities[sigma[1]]:
        raise ToleranceViolation("eigenspace rank disagrees with multiplicity")
    ds = dual_eigenvalues(dr, E, tol)
    a_star = sd.a_star_seq(sigma)
    D = dr.diameter
    a_scale = np.array(
        [sd.krein_scale[sigma[i], sigma[1], sigma[i]] for i in range(D + 1)]
    )
    return EVectors(dr=dr, sigma=tuple(sigma), E=E, V=V,
                    theta=sd.theta_seq(sigma), theta_star=ds.theta_star,
                    a_star=a_star, a_star_scale=a_scale,
                    ED=sd.idempotents[sigma[D]], tol=tol)


# ---------------------------------------------------------------------------
# basic operations

def norton_product(ev: EVectors, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """u * v = E(u o v) for u, v in EV."""
    for w in (u, v):
        if np.linalg.norm(ev.E @ w - w) > 1e-7 * max(1.0, np.linalg.norm(w)):
            raise NotInEigenspace("argument does not lie in EV")
    return ev.E @ (u * v)


@dataclass
class PairVectors:
    Exminus: np.ndarray
    Exzero: np.ndarray
    Explus: np.ndarray
    NortonProd: np.ndarray


def pair_vectors(ev: EVectors, x: int, y: int) -> PairVectors:
    if x == y:
        raise InvalidPair("need x != y")
    dr = ev.dr
    i = int(dr.dist[x, y])
    dx, dy = dr.dist[x], dr.dist[y]
    minus = ev.E[:, (dx == 1) & (dy == i - 1)].sum(axis=1)
    zero = ev.E[:, (dx == 1) & (dy == i)].sum(axis=1)
    plus = ev.E[:, (dx == 1) & (dy == i + 1)].sum(axis=1)
    star = ev.E @ (ev.E[:, x] * ev.E[:, y])
    return PairVectors(Exminus=minus, Exzero=zero, Explus=plus, NortonProd=star)


def _main_formula_coeffs(ev: EVectors, i: int):
    """(cm, cp, cx, cy, denom) of the Norton product formula at distance i;
    the indeterminate slot at i = D multiplies the zero vector and is set to 0."""
    ts, th = ev.theta_star, ev.theta
    D = ev.D
    cm = ts[i - 1] - ts[i]
    cp = (ts[i + 1] - ts[i]) if i < D else 0.0
    cx = (th[1] - th[2]) * ts[i]
    cy = th[2] - th[0]
    return cm, cp, cx, cy, ev.n * (th[1] - th[2])


def verify_norton_formula(ev: EVectors, x: int, y: int) -> float:
    """Residual norm of the Norton product formula at one pair."""
    if x == y:
        raise InvalidPair("need x != y")
    i = int(ev.dr.dist[x, y])
    pv = pair_vectors(ev, x, y)
    cm, cp, cx, cy, den = _main_formula_coeffs(ev, i)
    rhs = (cm * pv.Exminus + cp * pv.Explus + cx * ev.E[:, x] + cy * ev.E[:, y]) / den
    return float(np.linalg.norm(pv.NortonProd - rhs))


def verify_norton_formula_all(ev: EVectors, block: int = 512, sources=None):
    """Norton formula residual over every ordered pair, batched per source.

    The formula distinguishes the two vertices (it involves Ex-_y and
    Ex+_y), so both orientations of each pair are checked.  Returns
    (max_residual, witness_pair, max_star_norm); the last value is the
    largest ||Ex * Ey|| seen (used for the a*_1 = 0 equivalence check).
    ``sources`` restricts the source vertices (sampling mode).
    """
    dr, V, E = ev.dr, ev.V, ev.E
    n, D = ev.n, ev.D
    dist = dr.dist
    ts, th = ev.theta_star, ev.theta
    den = n * (th[1] - th[2])
    worst, witness, star_max = 0.0, None, 0.0
    tsm = np.concatenate([ts, [0.0]])  # safe slot for i+1 = D+1
    for x in (range(n) if sources is None else sources):
        nbrs = dr.graph.neighbors(x)
        Wx = V[nbrs, :].T                      # m x k
        for lo in range(0, n, block):
            cols = np.arange(lo, min(lo + block, n))
            cols = cols[cols != x]
            ii = dist[x, cols]
            d = E[:, x][:, None] * E[:, cols]
            L = V.T @ d                        # coords of Ex * Ey
            mm = dist[np.ix_(nbrs, cols)] == (ii - 1)[None, :]
            mp = dist[np.ix_(nbrs, cols)] == (ii + 1)[None, :]
            Rm = Wx @ mm
            Rp = Wx @ mp
            cm = ts[ii - 1] - ts[ii]
            cp = np.where(ii < D, tsm[ii + 1] - ts[ii], 0.0)
            cx = (th[1] - th[2]) * ts[ii]
            cy = th[2] - th[0]
            rhs = (cm * Rm + cp * Rp + cx * V[x][:, None] + cy * V[cols].T) / den
            res = np.linalg.norm(L - rhs, axis=0)
            j = int(np.argmax(res))
            if res[j] > worst:
                worst = float(res[j])
                witness = (x, int(cols[j]))
            star_max = max(star_max, float(np.linalg.norm(L, axis=0).max()))
    return worst, witness, star_max


def verify_linear_identity_all(ev: EVectors, coeffs):
    """Max residual of cm Ex-_y + cp Ex+_y + cx Ex + cy Ey = 0 over every
    ordered pair (the identities distinguish x and y).

    ``coeffs(i)`` returns the tuple for distance i or None to skip that
    distance class.  Residuals are exact vector norms via V-coordinates.
    """
    dr, V = ev.dr, ev.V
    n, D = ev.n, ev.D
    dist = dr.dist
    per_i = {i: coeffs(i) for i in range(1, D + 1)}
    if all(v is None for v in per_i.values()):
        return 0.0, None
    worst, witness = 0.0, None
    for x in range(n):
        nbrs = dr.graph.neighbors(x)
        Wx = V[nbrs, :].T
        drow = dist[x]
        dn = dist[nbrs, :]
        for i, cf in per_i.items():
            if cf is None:
                continue
            cols = np.flatnonzero(drow == i)
            if len(cols) == 0:
                continue
            cm, cp, cx, cy = cf
            r = np.zeros((V.shape[1], len(cols)))
            if cm:
                r += cm * (Wx @ (dn[:, cols] == i - 1))
            if cp and i < D:
                r += cp * (Wx @ (dn[:, cols] == i + 1))
            if cx:
                r += cx * V[x][:, None]
            if cy:
                r += cy * V[cols].T
            res = np.linalg.norm(r, axis=0)
            j = int(np.argmax(res))
            if res[j] > worst:
                worst = float(res[j])
                witness = (x, int(cols[j]), i)
    return worst, witness


# ---------------------------------------------------------------------------
# per-pair Gram tables (n-scaled inner products from integer shell counts)

def _pair_tables(ev: EVectors) -> dict:
    dr = ev.dr
    st = dr.shell_stats()
    ts = ev.theta_star
    D = ev.D
    ii = dr.dist
    t0, t1, t2 = ts[0], ts[1], ts[2]
    tsm = np.concatenate([[0.0], ts, [0.0]])   # shifted lookup, pad both ends
    ti = tsm[ii + 1]
    tim1 = tsm[ii]          # theta*_{i-1}; junk at i=0, masked out below
    tip1 = tsm[ii + 2]      # theta*_{i+1}; 0 at i=D

    c = st["c_minus"].astype(float)
    b = st["b_plus"].astype(float)
    esm = st["degsum_minus"].astype(float)
    esp = st["degsum_plus"].astype(float)
    cross = st["cross_adj"].astype(float)

    g_mm = c * t0 + esm * t1 + (c * c - c - esm) * t2
    g_pp = b * t0 + esp * t1 + (b * b - b - esp) * t2
    g_mp = cross * t1 + (c * b - cross) * t2
    g_mx = c * t1
    g_my = c * tim1
    g_px = b * t1
    g_py = b * tip1

    det = t0 * t0 - ti * ti
    valid = ii >= 1
    antipodal = dr.intersection.k_i[-1] == 1
    if antipodal:
        valid = valid & (ii < D)
    safe_det = np.where(valid, det, 1.0)
    # projection coefficients onto Span{Ex, Ey}: these reproduce the closed
    # forms for r_i, s_i, R_i, S_i
    r = (t0 * g_mx - ti * g_my) / safe_det
    s = (t0 * g_my - ti * g_mx) / safe_det
    R = (t0 * g_px - ti * g_py) / safe_det
    S = (t0 * g_py - ti * g_px) / safe_det
    hPP = g_mm - r * g_mx - s * g_my
    hQQ = g_pp - R * g_px - S * g_py
    hPQ = g_mp - R * g_mx - S * g_my
    del r, s, R, S, ti, tim1, tip1, esp, cross

    zeta_row = np.divide(esm, c, out=np.zeros_like(esm), where=c > 0)

    # n-scaled squared norms below this are treated as exact zero vectors
    # (scale: ||Ex||^2 scaled by n is theta*_0)
    zero_floor = 1e-12 * t0

    return {
        "i": ii, "valid": valid, "antipodal": antipodal,
        "c": c, "b": b, "g_mm": g_mm, "g_pp": g_pp, "g_mp": g_mp,
        "g_mx": g_mx, "g_my": g_my, "g_px": g_px, "g_py": g_py,
        "hPP": hPP, "hQQ": hQQ, "hPQ": hPQ,
        "zeta_row": zeta_row, "zero_floor": zero_floor,
        "m_zero": g_mm <= zero_floor, "p_zero": g_pp <= zero_floor,
    }


def _rel(num, den, tiny=1e-30):
    return np.abs(num) / np.maximum(den, tiny)


def _lex_min_pair(mask):
    xs, ys = np.nonzero(mask)
    if len(xs) == 0:
        return None
    j = int(np.lexsort((ys, xs))[0])
    return (int(xs[j]), int(ys[j]))


def check_antipodal_pairs(ev: EVectors) -> float:
    """On antipodal 2-covers, Ex + Ey = 0 for pairs at distance D."""
    xs, ys = np.nonzero(ev.dr.dist == ev.D)
    if len(xs) == 0:
        return 0.0
    return float(np.linalg.norm(ev.V[xs] + ev.V[ys], axis=1).max())


def check_strongly_balanced(ev: EVectors):
    """Ex-_y, Ex+_y in Span{Ex, Ey} for all pairs (lem. Combine reduction)."""
    t = ev.tables()
    tol = ev.tol.gram_dependent
    ii, valid = t["i"], t["valid"]
    bad_m = valid & (ii >= 2) & ~t["m_zero"] \
        & (_rel(np.maximum(t["hPP"], 0), t["g_mm"]) > tol)
    bad_p = valid & (ii <= ev.D - 1) & (t["b"] > 0) & ~t["p_zero"] \
        & (_rel(np.maximum(t["hQQ"], 0), t["g_pp"]) > tol)
    bad = bad_m | bad_p
    w = _lex_min_pair(bad)
    if w is None:
        return True, None
    x, y = w
    res = max(_rel(max(t["hPP"][x, y], 0.0), t["g_mm"][x, y]),
              _rel(max(t["hQQ"][x, y], 0.0), t["g_pp"][x, y]))
    return False, {"pair": [x, y], "distance": int(ii[x, y]),
                   "squared_rel_residual": float(res)}


def _norton_membership_residuals(ev: EVectors):
    """Squared scale-free residuals of Ex-_y (and Ex+_y) against
    Span{Ex, Ey, Ex * Ey} for pairs with 2 <= d(x,y) <= D-1.

    Via the product formula, the third spanning vector reduces, after
    projecting out Ex and Ey, to a P + b Q with a = th*_{i-1} - th*_i,
    b = th*_{i+1} - th*_i.
    """
    t = ev.tables()
    ts = ev.theta_star
    ii = t["i"]
    tsm = np.concatenate([[0.0], ts, [0.0]])
    a = tsm[ii] - tsm[ii + 1]
    b = tsm[ii + 2] - tsm[ii + 1]
    hPP = np.maximum(t["hPP"], 0.0)
    hQQ = np.maximum(t["hQQ"], 0.0)
    hPQ = t["hPQ"]
    hGG = a * a * hPP + 2 * a * b * hPQ + b * b * hQQ
    gscale = (a * a * t["g_mm"] + b * b * t["g_pp"]
              + 2 * np.abs(a * b) * np.sqrt(np.maximum(t["g_mm"] * t["g_pp"], 0.0)))
    g_zero = hGG <= ev.tol.gram_dependent * np.maximum(gscale, 1e-30)
    hPG = a * hPP + b * hPQ
    hQG = a * hPQ + b * hQQ
    safe = np.where(g_zero, 1.0, hGG)
    res_m = np.where(g_zero, hPP, np.maximum(hPP - hPG * hPG / safe, 0.0))
    res_p = np.where(g_zero, hQQ, np.maximum(hQQ - hQG * hQG / safe, 0.0))
    rel_m = np.where(t["m_zero"], 0.0, _rel(res_m, t["g_mm"]))
    rel_p = np.where(t["p_zero"], 0.0, _rel(res_p, t["g_pp"]))
    scope = t["valid"] & (ii >= 2) & (ii <= ev.D - 1)
    return rel_m, rel_p, scope


def check_norton_balanced(ev: EVectors):
    rel_m, rel_p, scope = _norton_membership_residuals(ev)
    tol = ev.tol.gram_dependent
    bad = scope & ((rel_m > tol) | (rel_p > tol))
    w = _lex_min_pair(bad)
    if w is None:
        return True, None
    x, y = w
    return False, {"pair": [x, y], "distance": int(ev.dr.dist[x, y]),
                   "squared_rel_residual": float(max(rel_m[x, y], rel_p[x, y]))}


def four_vector_everywhere(ev: EVectors):
    """{Ex-_y, Ex+_y, Ex, Ey} linearly dependent at all 2 <= d <= D-1."""
    t = ev.tables()
    tol = ev.tol.gram_dependent
    hPP = np.maximum(t["hPP"], 0.0)
    hQQ = np.maximum(t["hQQ"], 0.0)
    det2 = hPP * hQQ - t["hPQ"] ** 2
    p_zero = t["m_zero"] | (_rel(hPP, t["g_mm"]) <= tol)
    q_zero = t["p_zero"] | (_rel(hQQ, t["g_pp"]) <= tol)
    dep = p_zero | q_zero | (_rel(det2, hPP * hQQ) <= tol)
    scope = t["valid"] & (t["i"] >= 2) & (t["i"] <= ev.D - 1)
    bad = scope & ~dep
    w = _lex_min_pair(bad)
    if w is None:
        return True, None
    x, y = w
    return False, {"pair": [x, y], "distance": int(ev.dr.dist[x, y]),
                   "normalized_det": float(_rel(det2, hPP * hQQ)[x, y])}


def check_four_vector_dependence(ev: EVectors, x: int, y: int):
    """Gram-determinant dependence test at one pair, with nullspace
    coefficients normalized to leading 1 on Ex-_y when possible."""
    i = int(ev.dr.dist[x, y])
    if not (2 <= i <= ev.D - 1):
        raise InvalidPair(f"need 2 <= d(x,y) <= D-1, got {i}")
    t = ev.tables()
    ts = ev.theta_star
    G = np.array([
        [t["g_mm"][x, y], t["g_mp"][x, y], t["g_mx"][x, y], t["g_my"][x, y]],
        [t["g_mp"][x, y], t["g_pp"][x, y], t["g_px"][x, y], t["g_py"][x, y]],
        [t["g_mx"][x, y], t["g_px"][x, y], ts[0], ts[i]],
        [t["g_my"][x, y], t["g_py"][x, y], ts[i], ts[0]],
    ])
    d = np.sqrt(np.maximum(np.diag(G), 1e-30))
    Gn = G / np.outer(d, d)
    evals, evecs = np.linalg.eigh(Gn)
    dependent = bool(evals[0] < ev.tol.gram_dependent)
    coeffs = evecs[:, 0] / d
    if abs(coeffs[0]) > 1e-9 * np.abs(coeffs).max():
        coeffs = coeffs / coeffs[0]
    return dependent, coeffs


def lambda_value(ev: EVectors, x: int, y: int) -> float:
    """The dependence scalar lambda_i(x, y) from the kite-function average."""
    i = int(ev.dr.dist[x, y])
    if not (2 <= i <= ev.D - 1):
        raise InvalidPair(f"need 2 <= d(x,y) <= D-1, got {i}")
    pp = ev.profile()
    ts = ev.theta_star
    scale = np.abs(ts).max()
    if abs(pp.gamma_star) <= 1e-9 * max(1.0, scale):
        raise GammaStarZero("lambda_i is defined only when gamma* != 0")
    dep, _ = check_four_vector_dependence(ev, x, y)
    if not dep:
        raise NotDependent("the four vectors are independent at this pair")
    t = ev.tables()
    zrow = t["zeta_row"][x, y]
    bi = ev.dr.intersection.b_full()[i]
    return float((ts[1] - ts[2]) * (zrow - pp.z_minus[i])
                 / (ts[i] - ts[1]) * (ts[i] + ts[0]) / (pp.gamma_star * bi))


# ---------------------------------------------------------------------------
# the full balanced-set condition (all shells, all pairs)

def check_balanced(ev: EVectors, with_combine: bool = True, sources=None):
    """lem. bs: for all pairs and all shells (i, j), the antisymmetrized sum
    T_ij - T_ji lies in Span{Ex - Ey}; optionally also the Combine
    consequence T_ij in Span{Ex-_y, Ex+_y, Ex, Ey}.

    Returns (balanced_ok, combine_ok, witness, max_sq_rel_residual).
    ``sources`` restricts the source vertices (sampling mode).
    """
    dr, V = ev.dr, ev.V
    n, D = ev.n, ev.D
    dist = dr.dist
    tol = ev.tol.gram_dependent
    t = ev.tables() if with_combine else None
    tsm = np.concatenate([[0.0], ev.theta_star, [0.0]])
    # coordinate-space squared norms below this count as exact zero vectors
    floor = 1e-12 * ev.theta_star[0] / n
    worst, witness = 0.0, None
    bal_ok = True
    comb_ok = True
    for x in (range(n) if sources is None else sources):
        C = {}
        for i in range(1, D + 1):
            shell = np.flatnonzero(dist[x] == i)
            Wi = V[shell, :].T               # m x k_i
            dn = dist[shell, :]
            for j in range(1, D + 1):
                C[(i, j)] = Wi @ (dn == j)   # m x n coords of T_ij(x, .)
        U = V[x][:, None] - V.T              # coords of Ex - Ey
        unorm = (U * U).sum(axis=0)
        ok_cols = np.arange(n) != x
        for i in range(1, D + 1):
            for j in range(i + 1, D + 1):
                v = C[(i, j)] - C[(j, i)]
                vn = (v * v).sum(axis=0)
                dot = (v * U).sum(axis=0)
                res = vn - np.where(unorm > floor, dot * dot / np.maximum(unorm, floor), 0.0)
                rel = np.where((vn > floor) & ok_cols, res / np.maximum(vn, floor), 0.0)
                jmax = int(np.argmax(rel))
                if rel[jmax] > worst:
                    worst = float(rel[jmax])
                    witness = (x, jmax, i, j)
                if rel[jmax] > tol:
                    bal_ok = False
        if with_combine:
            ii = dist[x]
            # per-column n-scaled 4x4 Gram of {Ex-_y, Ex+_y, Ex, Ey}
            G = np.zeros((n, 4, 4))
            G[:, 0, 0] = t["g_mm"][x]
            G[:, 1, 1] = t["g_pp"][x]
            G[:, 0, 1] = G[:, 1, 0] = t["g_mp"][x]
            G[:, 0, 2] = G[:, 2, 0] = t["g_mx"][x]
            G[:, 0, 3] = G[:, 3, 0] = t["g_my"][x]
            G[:, 1, 2] = G[:, 2, 1] = t["g_px"][x]
            G[:, 1, 3] = G[:, 3, 1] = t["g_py"][x]
            G[:, 2, 2] = G[:, 3, 3] = ev.theta_star[0]
            G[:, 2, 3] = G[:, 3, 2] = tsm[ii + 1]
            Gp = np.linalg.pinv(G, rcond=1e-10)
            nbrs = dr.graph.neighbors(x)
            Wx = V[nbrs, :].T
            dn = dist[nbrs, :]
            Rm = Wx @ (dn == (ii - 1)[None, :])
            Rp = Wx @ (dn == (ii + 1)[None, :])
            basis = np.stack([Rm, Rp, np.repeat(V[x][:, None], n, axis=1), V.T])
            for key, tcol in C.items():
                tn = (tcol * tcol).sum(axis=0)
                g = np.einsum("bmn,mn->nb", basis, tcol)
                # G is n-scaled, so pinv(G_actual) = n pinv(G)
                proj = ev.n * np.einsum("nb,nbc,nc->n", g, Gp, g)
                res = np.maximum(tn - proj, 0.0)
                rel = np.where((tn > floor) & ok_cols, res / np.maximum(tn, floor), 0.0)
                jmax = int(np.argmax(rel))
                if rel[jmax] > worst:
                    worst = float(rel[jmax])
                if rel[jmax] > tol:
                    comb_ok = False
    return bal_ok, comb_ok, witness, worst


# ---------------------------------------------------------------------------
# classification and the tight-case dependence

def classify(ev: EVectors) -> dict:
    """Bipartite / almost-bipartite / dual-bipartite / almost-dual-bipartite /
    tight / antipodal flags for this Q-polynomial structure.

    When tight, also verifies the E_D-weighted dependence between Ex-_y,
    Ex+_y and Ex over every pair; the residual is reported under
    "tight_dependence_residual".
    """
    ia = ev.dr.intersection
    D = ev.D
    a = ia.a
    astar_zero = ev.a_star <= ev.tol.qpoly_zero * np.maximum(ev.a_star_scale, 1.0)
    bipartite = all(v == 0 for v in a)
    almost_bipartite = all(a[i] == 0 for i in range(D)) and a[D] != 0
    dual_bipartite = bool(astar_zero.all())
    almost_dual_bipartite = bool(astar_zero[:D].all() and not astar_zero[D])
    tight = (not bipartite) and a[D] == 0 and bool(astar_zero[D])
    flags = {
        "bipartite": bipartite,
        "almost_bipartite": almost_bipartite,
        "dual_bipartite": dual_bipartite,
        "almost_dual_bipartite": almost_dual_bipartite,
        "tight": tight,
        "antipodal_2cover": ia.k_i[-1] == 1,
        "a1star_zero": bool(astar_zero[1]),
    }
    if tight:
        flags["tight_dependence_residual"] = verify_tight_dependence(ev)
    return flags


def verify_tight_dependence(ev: EVectors) -> float:
    """Max residual of the tight-case relation
    (rho_{i-1} - rho_i) Ex-_y + (rho_{i+1} - rho_i) Ex+_y
        = (theta_{D-1} - theta_1) rho_i Ex."""
    # rho = coefficient sequence of the last idempotent in the Q-ordering;
    # on antipodal 2-covers it repeats values (rho_D = rho_0)
    if ev.ED is None:
        raise ToleranceViolation("E_D idempotent not attached")
    rho = dual_eigenvalues(ev.dr, ev.ED, ev.tol, require_distinct=False).theta_star
    th = ev.theta
    D = ev.D

    def coeffs(i):
        cm = rho[i - 1] - rho[i]
        cp = (rho[i + 1] - rho[i]) if i < D else 0.0
        cx = -(th[D - 1] - th[1]) * rho[i]
        return (cm, cp, cx, 0.0)

    worst, _ = verify_linear_identity_all(ev, coeffs)
    return worst


# ---------------------------------------------------------------------------
# per-family golden dependencies

def special_dependencies(spec, structure_label: str):
    """Published linear dependencies among Ex-_y, Ex+_y, Ex, Ey for the named
    family and Q-structure.  Returns [(name, coeffs_fn)] where coeffs_fn(i)
    yields (cm, cp, cx, cy) with cm Ex- + cp Ex+ + cx Ex + cy Ey = 0, or
    None for distances the identity does not cover.
    """
    fam, p = spec.family, spec.params
    out = []
    if fam == "johnson":
        N, D = p["N"], p["D"]
        out.append(("john1", lambda i: (1.0, 0.0, -i * (i - 1), -i) if i >= 2 else None))
        if N == 2 * D:
            out.append(("john2", lambda i: (0.0, 1.0, -(D - i) * (D - i - 1), D - i)
                        if 1 <= i <= D - 1 else None))
    elif fam == "hamming" and structure_label == "principal":
        N, D = p["N"], p["D"]
        out.append(("rr1", lambda i: (1.0, 0.0, -(i - 1), -1.0) if i >= 2 else None))
        if N == 2:
            out.append(("rr2", lambda i: (0.0, 1.0, -(D - i - 1), 1.0)
                        if 1 <= i <= D - 1 else None))
    elif fam == "hamming" and structure_label == "second":
        D = p["D"]
        out.append(("one1", lambda i: (1.0, 0.0, i - 1.0, (-1.0) ** i) if i >= 2 else None))
        out.append(("one2", lambda i: (0.0, 1.0, -(i + 1.0 - D), -((-1.0) ** i))
                    if 1 <= i <= D - 1 else None))
    elif fam == "odd":
        D = p["D"]
        out.append(("odd18", lambda i: (1.0, 1.0, float(D), 0.0) if i <= D - 1 else None))
    elif fam == "grassmann" and p["N"] == 2 * p["D"]:
        q, D = p["q"], p["D"]
        gauss = (q ** (D - 1) - 1) / (q - 1)

        def step1(i):
            if not (2 <= i <= D - 1):
                return None
            return (1.0, (q ** (i - 1) - 1) / (q ** D - q ** i),
                    -((q ** (i - 1) - 1) / (q - 1)) * (q ** D - q) / (q - 1),
                    -float(q ** (i - 1)))

        out.append(("step1", step1))
        out.append(("step2", lambda i: (1.0, 0.0, -q * gauss ** 2, -float(q ** (D - 1)))
                    if i == D else None))
    elif fam == "halved_cube":
        N = p["N"]
        D = N // 2
        if structure_label == "principal":
            out.append(("zyx1", lambda i: (1.0, 0.0, -(2 * i - 1.0) * (i - 1), -(2 * i - 1.0))
                        if i >= 2 else None))
            if N % 2 == 0:
                out.append(("zyx2", lambda i: (0.0, 1.0, -(2 * D - 2 * i - 1.0) * (D - i - 1),
                                               -(2 * i + 1.0 - 2 * D))
                            if 1 <= i <= D - 1 else None))
            else:
                out.append(("zy2", lambda i: (0.0, 1.0, -(2 * D - 2 * i - 1.0) * (D - i),
                                              -2.0 * (i - D))
                            if 1 <= i <= D - 1 else None))
        else:
            out.append(("pr1", lambda i: (1.0, 2.0 * (i - 1) / (2 * D - 2 * i - 1),
                                          -(i - 1.0) * (2 * D - 5), (2 * D - 3.0) / (2 * i - 2 * D + 1))
                        if 2 <= i <= D - 1 else None))
            out.append(("pr2", lambda i: (1.0, 0.0, -(D - 1.0) * (2 * D - 5), 2.0 * D - 3)
                        if i == D else None))
    elif fam == "folded_cube":
        N = p["N"]
        D = N // 2
        if N % 2 == 0:
            th1 = 2.0 * D - 4
            out.append(("bip", lambda i, t=th1: (1.0, 1.0, -t, 0.0)))
        elif structure_label == "principal":
            th1 = 2.0 * D - 3
            out.append(("abip", lambda i, t=th1: (1.0, 1.0, -t, 0.0) if i <= D - 1 else None))
        else:
            out.append(("pp1", lambda i: (1.0, 0.0, i - 1.0, (-1.0) ** i) if i >= 2 else None))
            out.append(("pp2", lambda i: (0.0, 1.0, -(i - 2.0 * D), -((-1.0) ** i))
                        if 1 <= i <= D - 1 else None))
    elif fam == "folded_half_cube":
        D = p["N"] // 4
        out.append(("fhc1", lambda i: (1.0, (i - 1.0) / (2 * D - i - 1),
                                       2.0 * (i - 1) * (3 - 2 * D),
                                       2.0 * (D - 1) / (i + 1 - 2 * D))
                    if 2 <= i <= D - 1 else None))
        out.append(("fhc2", lambda i: (1.0, 0.0, 2.0 * (D - 1) * (3 - 2 * D), -2.0)
                    if i == D else None))
    elif fam == "hermitean" and p["pn"] == 2:
        q = -2.0
        D = p["D"]
        out.append(("Hermstep1", lambda i: (1.0, -1.0 / q,
                                            (q ** i - q ** (2 * D)) / (q * q * (q - 1)),
                                            q ** (i - 2))
                    if 1 <= i <= D - 1 else None))
        out.append(("Hermstep2", lambda i: (1.0, 0.0,
                                            -q ** (D - 2) * (q ** D - 1) / (q - 1),
                                            q ** (D - 2))
                    if i == D else None))
    elif fam == "dualpolar_d":
        q, D = p["q"], p["D"]
        th1 = (q ** (D - 1) - q) / (q - 1)
        out.append(("bip", lambda i, t=th1: (1.0, 1.0, -float(t), 0.0)))
    return out


def verify_special_dependencies(ev: EVectors, spec, structure_label: str) -> dict:
    """Max residual per published identity for this family/structure."""
    out = {}
    for name, fn in special_dependencies(spec, structure_label):
        worst, witness = verify_linear_identity_all(ev, fn)
        out[name] = {"max_residual": worst, "witness": witness}
    return out


# ---------------------------------------------------------------------------
# report assembly

@dataclass
class BalanceReport:
    balanced: bool
    symmetric_balanced: bool           # the lem:Combine consequence, see docs
    strongly_balanced: bool
    norton_balanced: bool
    four_vector_dependent_everywhere: bool
    classification: dict
    witnesses: dict

    def as_dict(self) -> dict:
        return {
            "balanced": bool(self.balanced),
            "symmetric_balanced": bool(self.symmetric_balanced),
            "strongly_balanced": bool(self.strongly_balanced),
            "norton_balanced": bool(self.norton_balanced),
            "four_vector_dependent_everywhere": bool(self.four_vector_dependent_everywhere),
            "classification": self.classification,
            "witnesses": self.witnesses,
        }


def balance_report(ev: EVectors, with_balanced: bool = True,
                   sources=None) -> BalanceReport:
    """Full vertex-level verdicts for one Q-polynomial structure.

    ``with_balanced=False`` skips the all-shell balanced/Combine pass (the
    most expensive check; it verifies theorems that hold for every
    Q-polynomial idempotent and does not feed any verdict below it).
    ``sources`` restricts that pass to a subset of source vertices; the
    dependence verdicts below stay exhaustive either way.
    """
    witnesses = {}
    if ev.tables()["antipodal"]:
        worst = check_antipodal_pairs(ev)
        if worst > ev.tol.identity_residual:
            raise ToleranceViolation(
                f"antipodal pairs violate Ex + Ey = 0 (residual {worst})"
            )
    sb, w_sb = check_strongly_balanced(ev)
    if w_sb:
        witnesses["strongly_balanced"] = w_sb
    nb, w_nb = check_norton_balanced(ev)
    if w_nb:
        witnesses["norton_balanced"] = w_nb
    dep, w_dep = four_vector_everywhere(ev)
    if w_dep:
        witnesses["four_vector_dependence"] = w_dep
    if with_balanced:
        bal, comb, w_bal, worst_bal = check_balanced(ev, sources=sources)
        if not bal or not comb:
            witnesses["balanced"] = {"witness": w_bal, "max_sq_rel_residual": worst_bal}
    else:
        bal, comb = True, True
    flags = classify(ev)
    # hierarchy monotonicity is a theorem; enforce it as an internal sanity check
    assert (not sb) or nb, "strongly balanced must imply Norton-balanced"
    assert (not nb) or dep, "Norton-balanced must imply four-vector dependence"
    return BalanceReport(balanced=bal, symmetric_balanced=comb,
                         strongly_balanced=sb, norton_balanced=nb,
                         four_vector_dependent_everywhere=dep,
                         classification=flags, witnesses=witnesses)

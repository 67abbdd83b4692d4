"""Bose-Mesner eigenstructure: eigenvalues, primitive idempotents, dual
eigenvalues, Krein parameters and Q-polynomial orderings.

Two routes are provided:

* the graph route (``analyze_spectrum``): idempotents by Lagrange
  interpolation in the sparse adjacency matrix, Krein parameters by the
  trace formula;
* the array route (``scheme_from_array``): everything from an intersection
  array alone via the standard three-term recurrence and character sums,
  used for parameter-only families and as a cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, ToleranceProfile
from .errors import EigenSolveFailure, ToleranceViolation
from .graphcore import DRGraph, IntersectionArray


@dataclass
class DualEigenSequence:
    theta_star: np.ndarray

    def __getitem__(self, i):
        return self.theta_star[i]

    def __len__(self):
        return len(self.theta_star)


@dataclass
class SpectralData:
    """Eigen data in a fixed provisional index order (theta[0] = k,
    remainder descending); Q-polynomial orderings are permutations of these
    indices with entry 0 first."""

    theta: np.ndarray
    idempotents: list
    multiplicities: list
    krein: np.ndarray
    krein_scale: np.ndarray
    qpoly_orderings: list

    def theta_seq(self, sigma) -> np.ndarray:
        return self.theta[list(sigma)]

    def a_star_seq(self, sigma) -> np.ndarray:
        """a*_i = q^i_{1,i} along the ordering sigma."""
        D = len(sigma) - 1
        return np.array(
            [self.krein[sigma[i], sigma[1], sigma[i]] for i in range(D + 1)]
        )


def eigenvalues(dr: DRGraph, tol: ToleranceProfile = DEFAULT) -> np.ndarray:
    """Distinct eigenvalues of A from the tridiagonal intersection matrix."""
    return eigenvalues_from_array(dr.intersection, tol)


def eigenvalues_from_array(ia: IntersectionArray, tol: ToleranceProfile = DEFAULT) -> np.ndarray:
    D = ia.D
    cf, bf, a = ia.c_full(), ia.b_full(), ia.a
    # similar symmetric tridiagonal: off-diagonal sqrt(b_i c_{i+1})
    diag = np.array(a, dtype=float)
    off = np.array([np.sqrt(bf[i] * cf[i + 1]) for i in range(D)], dtype=float)
    th = np.linalg.eigvalsh(np.diag(diag) + np.diag(off, 1) + np.diag(off, -1))
    th = np.sort(th)[::-1]
    k = ia.k
    if abs(th[0] - k) > 1e-8 * max(1.0, k):
        raise EigenSolveFailure(f"largest eigenvalue {th[0]} != valency {k}")
    th[0] = float(k)
    gaps = np.diff(th)
    if (np.abs(gaps) < 1e-8 * max(1.0, np.abs(th).max())).any():
        raise EigenSolveFailure("coincident eigenvalues within tolerance")
    return th


def idempotents(dr: DRGraph, theta: np.ndarray, tol: ToleranceProfile = DEFAULT):
    """Primitive idempotents by Lagrange interpolation in A.

    Returns (list of dense symmetric matrices, integer multiplicities).
    Verifies completeness, idempotency/orthogonality and A E_i = theta_i E_i.
    """
    n = dr.n
    A = dr.graph.adjacency_csr()
    D = dr.diameter
    idems = []
    for i in range(D + 1):
        M = np.eye(n)
        for j in range(D + 1):
            if j == i:
                continue
            M = (A @ M - theta[j] * M) / (theta[i] - theta[j])
        idems.append((M + M.T) / 2.0)
    resid = np.abs(sum(idems) - np.eye(n)).max()
    if resid > tol.matrix_identity:
        raise ToleranceViolation(f"sum E_i = I residual {resid}")
    for i, E in enumerate(idems):
        r = np.abs(A @ E - theta[i] * E).max()
        if r > tol.matrix_identity * max(1.0, abs(theta[0])):
            raise ToleranceViolation(f"A E_{i} = theta_{i} E_{i} residual {r}")
    for i in range(D + 1):
        for j in range(i, D + 1):
            P = idems[i] @ idems[j]
            r = np.abs(P - (idems[i] if i == j else 0.0)).max()
            if r > tol.matrix_identity * 10:
                raise ToleranceViolation(f"E_{i} E_{j} orthogonality residual {r}")
    mults = []
    for E in idems:
        t = float(np.trace(E))
        m = round(t)
        if abs(t - m) > tol.snap_round:
            raise ToleranceViolation(f"non-integer multiplicity {t}")
        mults.append(int(m))
    if sum(mults) != n:
        raise ToleranceViolation(f"multiplicities {mults} do not sum to {n}")
    return idems, mults


def krein_parameters(idems, mults, n: int, tol: ToleranceProfile = DEFAULT):
    """q^h_{ij} = (n / m_h) tr((E_i o E_j) E_h); symmetric in all indices.

    Returns (q, qscale) where qscale carries the same sums with absolute
    values taken entrywise; zero tests are relative to qscale, which keeps
    them meaningful when Krein parameters span many orders of magnitude.
    """
    m = len(idems)
    q = np.zeros((m, m, m))
    qscale = np.zeros((m, m, m))
    for h in range(m):
        for i in range(h, m):
            for j in range(i, m):
                s = float(np.einsum("xy,xy,xy->", idems[h], idems[i], idems[j],
                                    optimize=True))
                sa = float(np.einsum("xy,xy,xy->", np.abs(idems[h]),
                                     np.abs(idems[i]), np.abs(idems[j]),
                                     optimize=True))
                for (a, b, c) in {(h, i, j), (h, j, i), (i, h, j),
                                  (i, j, h), (j, h, i), (j, i, h)}:
                    q[a, b, c] = n * s / mults[a]
                    qscale[a, b, c] = n * sa / mults[a]
    if q.min() < -tol.krein_negative:
        h, i, j = np.unravel_index(np.argmin(q), q.shape)
        raise ToleranceViolation(f"Krein parameter q^{h}_{{{i},{j}}} = {q.min()} < 0")
    q[q < 0] = 0.0
    # q^0_{ij} must be delta_ij m_i
    for i in range(m):
        for j in range(m):
            want = mults[i] if i == j else 0.0
            if abs(q[0, i, j] - want) > 1e-7 * max(1.0, max(mults)):
                raise ToleranceViolation(f"q^0_{{{i},{j}}} = {q[0, i, j]}, expected {want}")
    return q, qscale


def find_qpoly_orderings(krein: np.ndarray, krein_scale: np.ndarray | None = None,
                         tol: ToleranceProfile = DEFAULT) -> list:
    """All orderings (E_0 fixed first) satisfying the Q-polynomial zero/nonzero
    pattern; greedy extension from each candidate E_1, branching on ties,
    then full verification.  Zero tests are relative to the entrywise scale
    tensor when given, else to the largest Krein parameter."""
    m = krein.shape[0]
    if krein_scale is None:
        krein_scale = np.full_like(krein, max(krein.max(), 1.0))
    nonzero = krein > tol.qpoly_zero * np.maximum(krein_scale, 1e-30)

    def pattern_ok(sigma):
        for h in range(m):
            for i in range(m):
                for j in range(m):
                    v = nonzero[sigma[h], sigma[i], sigma[j]]
                    if h > i + j or i > h + j or j > h + i:
                        if v:
                            return False
                    elif h == i + j or i == h + j or j == h + i:
                        if not v:
                            return False
        return True

    found = []
    for s in range(1, m):
        stack = [[0, s]]
        while stack:
            part = stack.pop()
            if len(part) == m:
                if pattern_ok(part):
                    found.append(tuple(part))
                continue
            last = part[-1]
            used = set(part)
            for t in range(1, m):
                if t not in used and nonzero[t, s, last]:
                    stack.append(part + [t])
    found = sorted(set(found))
    if m <= 5:
        # cheap enough to cross-check the greedy search exhaustively
        brute = sorted(sigma for sigma in
                       (tuple([0, *perm]) for perm in itertools.permutations(range(1, m)))
                       if pattern_ok(sigma))
        if brute != found:
            raise ToleranceViolation(
                f"ordering search disagrees with brute force: {found} vs {brute}"
            )
    return found


def dual_eigenvalues(dr: DRGraph, E: np.ndarray, tol: ToleranceProfile = DEFAULT,
                     require_distinct: bool = True) -> DualEigenSequence:
    """theta*_i = n E_xy for pairs at distance i, averaged; the per-class
    spread must stay below tolerance.

    ``require_distinct=False`` allows repeated values, as needed when
    reading the coefficient sequence of a non-Q-polynomial idempotent
    (e.g. the E_D weights of the tight-case dependence).
    """
    n = dr.n
    D = dr.diameter
    ths = np.empty(D + 1)
    scaled = n * E
    for i in range(D + 1):
        vals = scaled[dr.dist == i]
        lo, hi = float(vals.min()), float(vals.max())
        if hi - lo > tol.dual_eigen_spread * max(1.0, abs(hi), abs(lo)):
            raise ToleranceViolation(
                f"entries of E at distance {i} spread over [{lo}, {hi}]"
            )
        ths[i] = vals.mean()
    if require_distinct:
        scale = max(1.0, np.abs(ths).max())
        gaps = np.abs(np.subtract.outer(ths, ths)) + scale * np.eye(D + 1)
        if gaps.min() < 1e-9 * scale:
            raise ToleranceViolation("dual eigenvalues not mutually distinct")
    return DualEigenSequence(theta_star=ths)


def check_three_term(ia: IntersectionArray, theta_star, theta1: float,
                     tol: ToleranceProfile = DEFAULT) -> float:
    """Max residual of c_i th*_{i-1} + a_i th*_i + b_i th*_{i+1} = th_1 th*_i
    over 0 <= i <= D (boundary rows use c_0 = 0, b_D = 0)."""
    cf, bf, a = ia.c_full(), ia.b_full(), ia.a
    D = ia.D
    worst = 0.0
    for i in range(D + 1):
        lhs = a[i] * theta_star[i]
        if i > 0:
            lhs += cf[i] * theta_star[i - 1]
        if i < D:
            lhs += bf[i] * theta_star[i + 1]
        worst = max(worst, abs(lhs - theta1 * theta_star[i]))
    return worst


def analyze_spectrum(dr: DRGraph, tol: ToleranceProfile = DEFAULT) -> SpectralData:
    th = eigenvalues(dr, tol)
    idems, mults = idempotents(dr, th, tol)
    q, qscale = krein_parameters(idems, mults, dr.n, tol)
    orderings = find_qpoly_orderings(q, qscale, tol)
    return SpectralData(theta=th, idempotents=idems, multiplicities=mults,
                        krein=q, krein_scale=qscale, qpoly_orderings=orderings)


# ---------------------------------------------------------------------------
# array route

@dataclass
class ArrayScheme:
    """Spectral data derived from an intersection array alone."""

    ia: IntersectionArray
    theta: np.ndarray          # descending, theta[0] = k
    u: np.ndarray              # u[s, j]: normalized eigenvector entries
    multiplicities: np.ndarray
    krein: np.ndarray
    krein_scale: np.ndarray
    qpoly_orderings: list

    def dual_sequence(self, sigma) -> DualEigenSequence:
        s = sigma[1]
        return DualEigenSequence(theta_star=self.multiplicities[s] * self.u[s])

    def theta_seq(self, sigma) -> np.ndarray:
        return self.theta[list(sigma)]

    def a_star_seq(self, sigma) -> np.ndarray:
        D = len(sigma) - 1
        return np.array(
            [self.krein[sigma[i], sigma[1], sigma[i]] for i in range(D + 1)]
        )


def scheme_from_array(ia: IntersectionArray, tol: ToleranceProfile = DEFAULT) -> ArrayScheme:
    D = ia.D
    th = eigenvalues_from_array(ia, tol)
    cf, bf, a = ia.c_full(), ia.b_full(), ia.a
    ks = np.array(ia.k_i, dtype=float)
    n = ia.n
    u = np.empty((D + 1, D + 1))
    for s in range(D + 1):
        u[s, 0] = 1.0
        u[s, 1] = th[s] / ia.k
        for j in range(1, D):
            u[s, j + 1] = ((th[s] - a[j]) * u[s, j] - cf[j] * u[s, j - 1]) / bf[j]
    mults = n / (ks[None, :] * u * u).sum(axis=1)
    snapped = np.rint(mults)
    if np.abs(mults - snapped).max() > 1e-6 * max(1.0, snapped.max()):
        raise ToleranceViolation(f"non-integer multiplicities {mults}")
    mults = snapped
    if int(mults.sum()) != n:
        raise ToleranceViolation(f"multiplicities {mults} do not sum to {n}")
    q = np.zeros((D + 1, D + 1, D + 1))
    qscale = np.zeros((D + 1, D + 1, D + 1))
    ua = np.abs(u)
    for h in range(D + 1):
        for i in range(D + 1):
            for j in range(D + 1):
                f = mults[i] * mults[j] / n
                q[h, i, j] = f * float((ks * u[i] * u[j] * u[h]).sum())
                qscale[h, i, j] = f * float((ks * ua[i] * ua[j] * ua[h]).sum())
    if (q < -tol.krein_negative * np.maximum(qscale, 1.0)).any():
        raise ToleranceViolation(f"negative Krein parameter {q.min()} from array")
    q[q < 0] = 0.0
    orderings = find_qpoly_orderings(q, qscale, tol)
    return ArrayScheme(ia=ia, theta=th, u=u, multiplicities=mults, krein=q,
                       krein_scale=qscale, qpoly_orderings=orderings)

"""Pure NumPy/SciPy backend, API-identical to the compiled core.

Used when the extension is unavailable (or forced via
NORTONLAB_FORCE_FALLBACK=1) and as the cross-check oracle in tests.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

BACKEND = "reference"

_SHELL_KEYS = (
    "c_minus", "degsum_minus", "degmin_minus", "degmax_minus",
    "b_plus", "degsum_plus", "degmin_plus", "degmax_plus", "cross_adj",
)


def bfs_all(n, indptr, indices):
    adj = sp.csr_matrix(
        (np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(n, n)
    )
    d = shortest_path(adj, method="D", unweighted=True, directed=False)
    out = np.full((n, n), -1, dtype=np.int32)
    finite = np.isfinite(d)
    out[finite] = d[finite].astype(np.int32)
    return out


def p_tensor(dist, D):
    """A_i @ A_j must be constant on each distance class."""
    n = dist.shape[0]
    m = D + 1
    layers = [(dist == h).astype(np.float64) for h in range(m)]
    p = np.zeros((m, m, m), dtype=np.int64)
    # first pair found at each distance, for witness reporting
    firsts = {}
    flat = dist.reshape(-1)
    for h in range(m):
        idx = np.flatnonzero(flat == h)
        if len(idx):
            firsts[h] = (idx[0] // n, idx[0] % n)
    for i in range(m):
        for j in range(i, m):
            prod = layers[i].T @ layers[j]  # counts |G_i(x) & G_j(y)|
            counts = np.rint(prod).astype(np.int64)
            for h in range(m):
                mask = dist == h
                if not mask.any():
                    continue
                vals = counts[mask]
                v0 = vals[0]
                if (vals != v0).any():
                    xs, ys = np.nonzero(mask)
                    bad = np.flatnonzero(vals != v0)[0]
                    x0, y0 = firsts[h]
                    return None, (h, i, j, int(xs[bad]), int(ys[bad]),
                                  int(vals[bad]), int(x0), int(y0), int(v0))
                p[h, i, j] = v0
                p[h, j, i] = v0
    return p, None


def shell_stats(n, indptr, indices, dist, D):
    adj = sp.csr_matrix(
        (np.ones(len(indices), dtype=np.float64), indices, indptr), shape=(n, n)
    ).toarray()
    sentinel = n + 1
    out = {k: np.zeros((n, n), dtype=np.int32) for k in _SHELL_KEYS}
    out["degmin_minus"][:] = sentinel
    out["degmax_minus"][:] = -1
    out["degmin_plus"][:] = sentinel
    out["degmax_plus"][:] = -1
    big = np.float64(n + 10)
    for x in range(n):
        nbrs = np.flatnonzero(adj[x] > 0)
        if len(nbrs) == 0:
            continue
        sub = adj[np.ix_(nbrs, nbrs)]
        dn = dist[nbrs]                       # (k, n): dist from each neighbor
        iy = dist[x]                          # (n,)
        mask_m = (dn == iy[None, :] - 1) & (iy[None, :] >= 1)
        mask_p = (dn == iy[None, :] + 1) & (iy[None, :] >= 1)
        mm = mask_m.astype(np.float64)
        mp = mask_p.astype(np.float64)
        degs_m = sub @ mm                     # induced degree of each z per y
        degs_p = sub @ mp
        out["c_minus"][x] = mm.sum(axis=0)
        out["b_plus"][x] = mp.sum(axis=0)
        out["degsum_minus"][x] = (degs_m * mm).sum(axis=0)
        out["degsum_plus"][x] = (degs_p * mp).sum(axis=0)
        out["cross_adj"][x] = (degs_p * mm).sum(axis=0)
        dm = np.where(mask_m, degs_m, big)
        out["degmin_minus"][x] = np.where(mask_m.any(axis=0), dm.min(axis=0), sentinel)
        dm = np.where(mask_m, degs_m, -1.0)
        out["degmax_minus"][x] = dm.max(axis=0)
        dp = np.where(mask_p, degs_p, big)
        out["degmin_plus"][x] = np.where(mask_p.any(axis=0), dp.min(axis=0), sentinel)
        dp = np.where(mask_p, degs_p, -1.0)
        out["degmax_plus"][x] = dp.max(axis=0)
        # pairs below distance 1 carry no shell data; match the compiled
        # backend and zero every field there
        zero = iy < 1
        for k in _SHELL_KEYS:
            out[k][x, zero] = 0
    return out

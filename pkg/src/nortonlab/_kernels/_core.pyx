# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: all-pairs BFS, exhaustive intersection-number
certification, and per-pair neighbor-shell statistics.

Shell statistics for an ordered pair (x, y) at distance i concern the sets

    S- = G(x) & G_{i-1}(y)        (size c_i)
    S+ = G(x) & G_{i+1}(y)        (size b_i)

and report induced degree sums / minima / maxima inside each set plus the
number of adjacent cross pairs.  Inner loops run over bit-packed adjacency
rows restricted to G(x).
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint64_t
from libc.string cimport memset

cnp.import_array()

BACKEND = "compiled"


cdef inline int popcount64(uint64_t v) nogil:
    v = v - ((v >> 1) & 0x5555555555555555ULL)
    v = (v & 0x3333333333333333ULL) + ((v >> 2) & 0x3333333333333333ULL)
    v = (v + (v >> 4)) & 0x0F0F0F0F0F0F0F0FULL
    return <int>((v * 0x0101010101010101ULL) >> 56)


def bfs_all(int n, int64_t[::1] indptr, int32_t[::1] indices):
    """Distance matrix by BFS from every vertex; -1 marks unreachable."""
    dist_arr = np.full((n, n), -1, dtype=np.int32)
    cdef int32_t[:, ::1] dist = dist_arr
    queue_arr = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] queue = queue_arr
    cdef Py_ssize_t src, head, tail, v, u, e
    with nogil:
        for src in range(n):
            head = 0
            tail = 0
            queue[tail] = <int32_t>src
            tail += 1
            dist[src, src] = 0
            while head < tail:
                v = queue[head]
                head += 1
                for e in range(indptr[v], indptr[v + 1]):
                    u = indices[e]
                    if dist[src, u] < 0:
                        dist[src, u] = dist[src, v] + 1
                        queue[tail] = <int32_t>u
                        tail += 1
    return dist_arr


def p_tensor(int32_t[:, ::1] dist, int D):
    """Exhaustive distance-regularity check.

    Returns (p, witness): p is the (D+1)^3 tensor of intersection numbers,
    witness is None when the graph is distance-regular, otherwise a tuple
    (h, i, j, x, y, cnt, x0, y0, cnt0) exhibiting two pairs at distance h
    whose shell counts differ (lexicographically minimal failing (x, y)).
    """
    cdef int n = dist.shape[0]
    cdef int m = D + 1
    ref_arr = np.full((m, m * m), -1, dtype=np.int64)
    cdef int64_t[:, ::1] ref = ref_arr
    first_x_arr = np.full(m, -1, dtype=np.int64)
    first_y_arr = np.full(m, -1, dtype=np.int64)
    cdef int64_t[::1] first_x = first_x_arr
    cdef int64_t[::1] first_y = first_y_arr
    cnt_arr = np.zeros(m * m, dtype=np.int64)
    cdef int64_t[::1] cnt = cnt_arr
    cdef Py_ssize_t x, y, z
    cdef int h, q, bad
    witness = None
    with nogil:
        bad = 0
        for x in range(n):
            if bad:
                break
            for y in range(n):
                if bad:
                    break
                h = dist[x, y]
                memset(&cnt[0], 0, m * m * sizeof(int64_t))
                for z in range(n):
                    cnt[dist[x, z] * m + dist[y, z]] += 1
                if first_x[h] < 0:
                    first_x[h] = x
                    first_y[h] = y
                    for q in range(m * m):
                        ref[h, q] = cnt[q]
                else:
                    for q in range(m * m):
                        if ref[h, q] != cnt[q]:
                            bad = 1
                            break
                    if bad:
                        with gil:
                            witness = (h, q // m, q % m, <long>x, <long>y,
                                       <long>cnt[q], <long>first_x[h],
                                       <long>first_y[h], <long>ref[h, q])
    if witness is not None:
        return None, witness
    p_arr = ref_arr.reshape(m, m, m).transpose(0, 1, 2).copy()
    return p_arr, None


def shell_stats(int n, int64_t[::1] indptr, int32_t[::1] indices,
                int32_t[:, ::1] dist, int D):
    """Per ordered pair (x, y) with dist >= 1: sizes, induced degree sums,
    minima and maxima of S- and S+, and the S- x S+ adjacency count.

    Returns a dict of (n, n) int32 arrays:
      c_minus, degsum_minus, degmin_minus, degmax_minus,
      b_plus,  degsum_plus,  degmin_plus,  degmax_plus,  cross_adj.
    Minima are n+1 (sentinels) for empty sets.
    """
    cdef int kmax = 0
    cdef Py_ssize_t v
    for v in range(n):
        if indptr[v + 1] - indptr[v] > kmax:
            kmax = <int>(indptr[v + 1] - indptr[v])
    cdef int words = (kmax + 63) >> 6

    out = {
        name: np.zeros((n, n), dtype=np.int32)
        for name in ("c_minus", "degsum_minus", "degmin_minus", "degmax_minus",
                     "b_plus", "degsum_plus", "degmin_plus", "degmax_plus",
                     "cross_adj")
    }
    cdef int32_t[:, ::1] c_minus = out["c_minus"]
    cdef int32_t[:, ::1] degsum_minus = out["degsum_minus"]
    cdef int32_t[:, ::1] degmin_minus = out["degmin_minus"]
    cdef int32_t[:, ::1] degmax_minus = out["degmax_minus"]
    cdef int32_t[:, ::1] b_plus = out["b_plus"]
    cdef int32_t[:, ::1] degsum_plus = out["degsum_plus"]
    cdef int32_t[:, ::1] degmin_plus = out["degmin_plus"]
    cdef int32_t[:, ::1] degmax_plus = out["degmax_plus"]
    cdef int32_t[:, ::1] cross_adj = out["cross_adj"]

    rows_arr = np.zeros((kmax, words), dtype=np.uint64)
    cdef uint64_t[:, ::1] rows = rows_arr
    selm_arr = np.zeros(words, dtype=np.uint64)
    selp_arr = np.zeros(words, dtype=np.uint64)
    cdef uint64_t[::1] selm = selm_arr
    cdef uint64_t[::1] selp = selp_arr
    nbr_arr = np.zeros(kmax, dtype=np.int32)
    cdef int32_t[::1] nbr = nbr_arr
    pos_arr = np.full(n, -1, dtype=np.int32)
    cdef int32_t[::1] pos = pos_arr
    memm_arr = np.zeros(kmax, dtype=np.int32)
    memp_arr = np.zeros(kmax, dtype=np.int32)
    cdef int32_t[::1] memm = memm_arr
    cdef int32_t[::1] memp = memp_arr

    cdef Py_ssize_t x, y, e, w, t
    cdef int k, i, cm, bp, dsum, dmin, dmax, d, cw, csum
    cdef int sentinel = n + 1
    with nogil:
        for x in range(n):
            k = <int>(indptr[x + 1] - indptr[x])
            for t in range(k):
                nbr[t] = indices[indptr[x] + t]
                pos[nbr[t]] = <int32_t>t
            # bit-pack the adjacency among G(x)
            for t in range(k):
                for w in range(words):
                    rows[t, w] = 0
                v = nbr[t]
                for e in range(indptr[v], indptr[v + 1]):
                    if pos[indices[e]] >= 0:
                        rows[t, pos[indices[e]] >> 6] |= (<uint64_t>1) << (pos[indices[e]] & 63)
            for y in range(n):
                i = dist[x, y]
                if i < 1:
                    continue
                for w in range(words):
                    selm[w] = 0
                    selp[w] = 0
                cm = 0
                bp = 0
                for t in range(k):
                    d = dist[y, nbr[t]]
                    if d == i - 1:
                        selm[t >> 6] |= (<uint64_t>1) << (t & 63)
                        memm[cm] = <int32_t>t
                        cm += 1
                    elif d == i + 1:
                        selp[t >> 6] |= (<uint64_t>1) << (t & 63)
                        memp[bp] = <int32_t>t
                        bp += 1
                c_minus[x, y] = cm
                b_plus[x, y] = bp
                dsum = 0
                dmin = sentinel
                dmax = -1
                csum = 0
                for t in range(cm):
                    cw = 0
                    for w in range(words):
                        cw += popcount64(rows[memm[t], w] & selm[w])
                    dsum += cw
                    if cw < dmin:
                        dmin = cw
                    if cw > dmax:
                        dmax = cw
                    for w in range(words):
                        csum += popcount64(rows[memm[t], w] & selp[w])
                degsum_minus[x, y] = dsum
                degmin_minus[x, y] = dmin if cm > 0 else sentinel
                degmax_minus[x, y] = dmax if cm > 0 else -1
                cross_adj[x, y] = csum
                dsum = 0
                dmin = sentinel
                dmax = -1
                for t in range(bp):
                    cw = 0
                    for w in range(words):
                        cw += popcount64(rows[memp[t], w] & selp[w])
                    dsum += cw
                    if cw < dmin:
                        dmin = cw
                    if cw > dmax:
                        dmax = cw
                degsum_plus[x, y] = dsum
                degmin_plus[x, y] = dmin if bp > 0 else sentinel
                degmax_plus[x, y] = dmax if bp > 0 else -1
            for t in range(k):
                pos[nbr[t]] = -1
    return out

"""Tiny finite-field helpers for the explicit family constructors.

GF(2) vectors and subspaces are bitmask integers; GF(4) lives in lookup
tables with elements 0, 1, w, w^2 encoded as 0..3 (addition is XOR).
"""

from __future__ import annotations

from functools import lru_cache

# --- GF(2), vectors as ints, subspace = canonical tuple of RREF row masks ---


def gf2_rref(rows, width):
    """Reduced row echelon form of GF(2) row bitmasks; returns sorted tuple."""
    rows = [r for r in rows if r]
    basis = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    # back-substitute to reduced form
    for i in range(len(basis)):
        for j in range(len(basis)):
            if i != j:
                pivot = 1 << (basis[j].bit_length() - 1)
                if basis[i] & pivot:
                    basis[i] ^= basis[j]
    return tuple(sorted(basis, reverse=True))


def gf2_rank(rows):
    basis = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    return len(basis)


def gf2_span(basis):
    """All vectors in the span (including 0)."""
    vecs = [0]
    for b in basis:
        vecs += [v ^ b for v in vecs]
    return vecs


@lru_cache(maxsize=None)
def gf2_subspaces(width: int, dim: int):
    """All dim-dimensional subspaces of GF(2)^width as canonical RREF tuples."""
    out = {gf2_rref((), width)} if dim == 0 else set()
    if dim == 0:
        return sorted(out)
    smaller = gf2_subspaces(width, dim - 1) if dim > 1 else [()]
    for sub in smaller:
        inside = set(gf2_span(sub))
        for v in range(1, 1 << width):
            if v not in inside:
                out.add(gf2_rref(sub + (v,), width))
    return sorted(out)


# --- GF(4) = {0, 1, w, w+1} with w^2 = w + 1; encode as 0,1,2,3 -------------

GF4_MUL = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]
GF4_INV = {1: 1, 2: 3, 3: 2}


def gf4_mul(a: int, b: int) -> int:
    return GF4_MUL[a][b]


def gf4_conj(a: int) -> int:
    """Frobenius x -> x^2 over GF(4)."""
    return GF4_MUL[a][a]


def gf4_rank(mat) -> int:
    """Rank of a small matrix over GF(4); mat is a list of row lists (0..3)."""
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0]) if m else 0
    rank = 0
    for col in range(cols):
        piv = None
        for r in range(rank, rows):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = GF4_INV[m[rank][col]]
        m[rank] = [gf4_mul(inv, v) for v in m[rank]]
        for r in range(rows):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [v ^ gf4_mul(f, w) for v, w in zip(m[r], m[rank])]
        rank += 1
    return rank

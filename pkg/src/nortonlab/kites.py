"""Kite counting: the kite function zeta_i, its row/column averages, the kite
numbers z_i, and the reinforced property.

All statistics reduce to induced-degree counts over neighbor shells, which
the kernel layer provides for every ordered pair at once:

* row side, pairs (x, y) at distance i: zeta_i(x, y, z) is the induced
  degree of z inside G(x) & G_{i-1}(y);
* column side, pairs (y, z) at distance i-1: a_1 - zeta_i(x, y, z) is the
  induced degree of x inside G(z) & G_i(y).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, ToleranceProfile
from .errors import InvalidPair, InvalidTriple, TooLarge
from .graphcore import DRGraph


@dataclass
class KiteStats:
    D: int
    a1: int
    z: list                       # z_2 .. z_D (floats, rational in exact terms)
    zeta_constant: dict           # i -> bool, over all valid triples
    row_averages_constant: dict   # i -> bool
    col_averages_constant: dict   # i -> bool
    reinforced: bool
    witnesses: dict = field(default_factory=dict)  # i -> non-constancy witness

    def z_at(self, i: int) -> float:
        return self.z[i - 2]

    def as_dict(self) -> dict:
        return {
            "a1": self.a1,
            "z": {str(i): self.z[i - 2] for i in range(2, self.D + 1)},
            "zeta_constant": {str(i): bool(v) for i, v in self.zeta_constant.items()},
            "row_averages_constant": {str(i): bool(v) for i, v in
                                      self.row_averages_constant.items()},
            "col_averages_constant": {str(i): bool(v) for i, v in
                                      self.col_averages_constant.items()},
            "reinforced": bool(self.reinforced),
            "witnesses": {str(i): w for i, w in self.witnesses.items()},
        }


def zeta(dr: DRGraph, x: int, y: int, z: int) -> int:
    """|G(x) & G_{i-1}(y) & G(z)| for a triple with the i-kite head pattern."""
    i = int(dr.dist[x, y])
    if i < 2 or dr.dist[x, z] != 1 or dr.dist[y, z] != i - 1:
        raise InvalidTriple(
            f"need d(x,y)=i>=2, d(x,z)=1, d(y,z)=i-1; got "
            f"d(x,y)={i}, d(x,z)={dr.dist[x, z]}, d(y,z)={dr.dist[y, z]}"
        )
    nz = dr.graph.neighbors(z)
    return int(np.count_nonzero((dr.dist[x, nz] == 1) & (dr.dist[y, nz] == i - 1)))


def zeta_row_avg(dr: DRGraph, x: int, y: int) -> float:
    """Average of zeta_i(x, y, z) over z in G(x) & G_{i-1}(y)."""
    i = int(dr.dist[x, y])
    if i < 2:
        raise InvalidPair(f"need d(x,y) >= 2, got {i}")
    st = dr.shell_stats()
    return st["degsum_minus"][x, y] / st["c_minus"][x, y]


def zeta_col_avg(dr: DRGraph, y: int, z: int) -> float:
    """Average of zeta_i(x, y, z) over x in G_i(y) & G(z), where i-1 = d(y,z)."""
    j = int(dr.dist[y, z])
    if j < 1:
        raise InvalidPair(f"need d(y,z) >= 1, got {j}")
    st = dr.shell_stats()
    a1 = dr.intersection.a[1]
    return a1 - st["degsum_plus"][z, y] / st["b_plus"][z, y]


KITE_ENUMERATION_CAP = 2_000


def kite_numbers(dr: DRGraph, tol: ToleranceProfile = DEFAULT,
                 max_vertices: int = KITE_ENUMERATION_CAP) -> KiteStats:
    """Full-enumeration kite statistics with exact-integer constancy flags.

    Enumeration is exhaustive over ordered pairs; graphs above the cap are
    refused rather than silently sampled.
    """
    if dr.n > max_vertices:
        raise TooLarge(
            f"kite enumeration capped at {max_vertices} vertices; got {dr.n}"
        )
    st = dr.shell_stats()
    ia = dr.intersection
    D = dr.diameter
    a1 = ia.a[1]
    ks = ia.k_i
    n = dr.n
    z = []
    zeta_const = {}
    rows_const = {}
    cols_const = {}
    witnesses = {}
    for i in range(2, D + 1):
        mask = dr.dist == i
        degsum = st["degsum_minus"][mask]
        dmin = st["degmin_minus"][mask]
        dmax = st["degmax_minus"][mask]
        kites = int(degsum.sum())
        ci = ia.c[i - 1]
        z_i = kites / (n * ks[i] * ci)
        z.append(z_i)
        lo, hi = int(dmin.min()), int(dmax.max())
        zeta_const[i] = lo == hi
        if not zeta_const[i]:
            xs, ys = np.nonzero(mask)
            jlo = int(np.argmin(dmin))
            jhi = int(np.argmax(dmax))
            witnesses[i] = {
                "low": [int(xs[jlo]), int(ys[jlo]), lo],
                "high": [int(xs[jhi]), int(ys[jhi]), hi],
            }
        rows_const[i] = int(degsum.min()) == int(degsum.max())
        # column side: ordered pairs (z, y) at distance i-1, shell G(z) & G_i(y)
        cmask = dr.dist == i - 1
        csum = st["degsum_plus"][cmask]
        cols_const[i] = int(csum.min()) == int(csum.max())
        # lem:adjust / lem:2adjust consistency, exact in integers:
        # kites = sum over (z,y) pairs of (a_1 b_{i-1} - degsum_plus)
        alt = int((a1 * ia.b[i - 1] - csum).sum())
        assert alt == kites, f"row/column kite counts disagree at i={i}: {kites} vs {alt}"
        assert ks[i] * ci == ks[i - 1] * ia.b[i - 1]
        assert -1e-12 <= z_i <= a1 + 1e-12
    reinforced = all(rows_const[i] and cols_const[i] for i in range(2, D + 1))
    return KiteStats(D=D, a1=a1, z=z, zeta_constant=zeta_const,
                     row_averages_constant=rows_const,
                     col_averages_constant=cols_const,
                     reinforced=reinforced, witnesses=witnesses)


def verify_kite_recurrence(ks: KiteStats, pp, tol: ToleranceProfile = DEFAULT) -> bool:
    """z_i = z_2 alpha_i + a_1 beta_i for 2 <= i <= D."""
    z2 = ks.z_at(2)
    for i in range(2, ks.D + 1):
        want = z2 * pp.alpha[i] + ks.a1 * pp.beta_seq[i]
        if abs(ks.z_at(i) - want) >= tol.kite_recurrence:
            return False
    return True

"""Named graph families: explicit constructors and closed-form parameter data.

``construct`` builds the explicit vertex/edge sets (for buildable specs);
``family_data`` evaluates the families' closed-form intersection arrays,
eigenvalue/dual-eigenvalue sequences and the published verdicts, including
for families too large to build.  ``catalogue`` returns the desk-scale test
corpus.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ._gf import gf2_rref, gf2_span, gf2_subspaces, gf4_conj, gf4_rank
from .errors import InvalidParams, NotBuildable, TooLarge
from .graphcore import Graph, IntersectionArray

BUILD_CAP = 20_000


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict
    buildable: bool = True
    drg_instance: bool = True   # False for the Shrikhande factor (D = 2)
    key: str = ""
    label: str = ""

    def param_str(self) -> str:
        return ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))


@dataclass
class QStructure:
    """One Q-polynomial structure: sequences plus the published verdicts."""

    label: str
    theta: list
    theta_star: list
    gamma_star: float | None = None
    dc: bool | None = None
    xi: float | None = None            # common root of the Phi family, if stated
    norton_balanced: bool | None = None


@dataclass
class FamilyData:
    intersection: IntersectionArray
    structures: list
    z: list | None = None              # closed-form kite numbers z_2..z_D
    reinforced: bool | None = None
    notes: dict = field(default_factory=dict)

    @property
    def theta(self):
        return self.structures[0].theta

    @property
    def theta_star(self):
        return self.structures[0].theta_star


# ---------------------------------------------------------------------------
# explicit constructors

def _check_cap(n, label, cap=None):
    cap = BUILD_CAP if cap is None else cap
    if n > cap:
        raise TooLarge(f"{label} has {n} vertices, above the cap {cap}")


def _binom(n, k):
    import math
    return math.comb(n, k)


def _graph_from_neighbor_map(n, nbrs, name):
    edges = [(u, v) for u in range(n) for v in nbrs(u) if u < v]
    return Graph.from_edges(n, edges, name=name)


def _hamming_graph(D, N):
    n = N ** D
    _check_cap(n, f"H({D},{N})")
    pows = [N ** i for i in range(D)]

    def nbrs(u):
        for i in range(D):
            digit = (u // pows[i]) % N
            for v in range(N):
                if v != digit:
                    yield u + (v - digit) * pows[i]

    return _graph_from_neighbor_map(n, nbrs, f"H({D},{N})")


def _johnson_graph(N, D, name=None):
    _check_cap(_binom(N, D), f"J({N},{D})")
    verts = list(itertools.combinations(range(N), D))
    index = {v: i for i, v in enumerate(verts)}
    edges = []
    for i, v in enumerate(verts):
        vset = set(v)
        for out in v:
            rest = vset - {out}
            for inn in range(N):
                if inn not in vset:
                    w = tuple(sorted(rest | {inn}))
                    j = index[w]
                    if i < j:
                        edges.append((i, j))
    return Graph.from_edges(len(verts), edges, name=name or f"J({N},{D})")


def _odd_graph(D):
    # O_{D+1}: D-subsets of a (2D+1)-set, adjacent when disjoint
    N = 2 * D + 1
    _check_cap(_binom(N, D), f"O_{D + 1}")
    verts = list(itertools.combinations(range(N), D))
    index = {v: i for i, v in enumerate(verts)}
    edges = []
    for i, v in enumerate(verts):
        vset = set(v)
        pool = [x for x in range(N) if x not in vset]
        for w in itertools.combinations(pool, D):
            j = index[w]
            if i < j:
                edges.append((i, j))
    return Graph.from_edges(len(verts), edges, name=f"O_{D + 1}")


def _grassmann_graph(q, N, D):
    if q != 2:
        raise NotBuildable("explicit Grassmann construction implemented for q=2 only")
    count = 1
    for i in range(D):
        count = count * (q ** (N - i) - 1) // (q ** (i + 1) - 1)
    _check_cap(count, f"J_{q}({N},{D})")
    subs = gf2_subspaces(N, D)
    index = {s: i for i, s in enumerate(subs)}
    # adjacency: dim(x & y) = D-1, i.e. x, y share a (D-1)-shadow
    shadow = {}
    for s in subs:
        vecs = [v for v in gf2_span(s) if v]
        seen = set()
        for tri in itertools.combinations(vecs, D - 1):
            sub = gf2_rref(tri, N)
            if len(sub) == D - 1:
                seen.add(sub)
        for sh in seen:
            shadow.setdefault(sh, []).append(index[s])
    edges = set()
    for members in shadow.values():
        for a, b in itertools.combinations(sorted(members), 2):
            edges.add((a, b))
    return Graph.from_edges(len(subs), sorted(edges), name=f"J_{q}({N},{D})")


def _quad_hyperbolic(v, D):
    # Q(x) = x1 x2 + x3 x4 + ... on GF(2)^(2D)
    q = 0
    for i in range(D):
        q ^= ((v >> (2 * i)) & 1) & ((v >> (2 * i + 1)) & 1)
    return q


def _dualpolar_d_graph(q, D):
    if q != 2:
        raise NotBuildable("explicit D_D(q) construction implemented for q=2 only")
    if D > 4:
        raise TooLarge("explicit D_D(2) capped at D=4 (270 vertices)")
    width = 2 * D

    def bilin(u, v):
        return _quad_hyperbolic(u ^ v, D) ^ _quad_hyperbolic(u, D) ^ _quad_hyperbolic(v, D)

    singular = [v for v in range(1, 1 << width) if _quad_hyperbolic(v, D) == 0]
    level = {gf2_rref((v,), width) for v in singular}
    for _ in range(D - 1):
        nxt = set()
        for s in level:
            span = set(gf2_span(s))
            for v in singular:
                if v in span:
                    continue
                if all(bilin(v, b) == 0 for b in s):
                    nxt.add(gf2_rref(s + (v,), width))
        level = nxt
    subs = sorted(level)
    index = {s: i for i, s in enumerate(subs)}
    shadow = {}
    for s in subs:
        vecs = [v for v in gf2_span(s) if v]
        seen = set()
        for tri in itertools.combinations(vecs, D - 1):
            sub = gf2_rref(tri, width)
            if len(sub) == D - 1:
                seen.add(sub)
        for sh in seen:
            shadow.setdefault(sh, []).append(index[s])
    edges = set()
    for members in shadow.values():
        for a, b in itertools.combinations(sorted(members), 2):
            edges.add((a, b))
    return Graph.from_edges(len(subs), sorted(edges), name=f"D_{D}({q})")


def _halved_cube_graph(N):
    _check_cap(1 << (N - 1), f"1/2 H({N},2)")
    verts = [v for v in range(1 << N) if bin(v).count("1") % 2 == 0]
    index = {v: i for i, v in enumerate(verts)}
    edges = []
    for i, v in enumerate(verts):
        for a in range(N):
            for b in range(a + 1, N):
                w = v ^ (1 << a) ^ (1 << b)
                j = index[w]
                if i < j:
                    edges.append((i, j))
    return Graph.from_edges(len(verts), edges, name=f"1/2 H({N},2)")


def _folded_cube_graph(N):
    # antipodal classes {x, ~x}; representatives have top bit 0
    _check_cap(1 << (N - 1), f"~H({N},2)")
    n = 1 << (N - 1)
    full = (1 << N) - 1

    def rep(v):
        return v if v < (1 << (N - 1)) else v ^ full

    edges = set()
    for v in range(n):
        for a in range(N):
            w = rep(v ^ (1 << a))
            if v < w:
                edges.add((v, w))
            elif w < v:
                edges.add((w, v))
    return Graph.from_edges(n, sorted(edges), name=f"~H({N},2)")


def _folded_half_cube_graph(N):
    if N % 2:
        raise InvalidParams("folded-half cube needs even N")
    _check_cap(1 << (N - 2), f"1/2 ~H({N},2)")
    full = (1 << N) - 1
    verts = [v for v in range(1 << (N - 1)) if bin(v).count("1") % 2 == 0]
    index = {v: i for i, v in enumerate(verts)}

    def rep(v):
        return v if v < (1 << (N - 1)) else v ^ full

    edges = set()
    for i, v in enumerate(verts):
        for a in range(N):
            for b in range(a + 1, N):
                w = rep(v ^ (1 << a) ^ (1 << b))
                j = index[w]
                if i < j:
                    edges.add((i, j))
    return Graph.from_edges(len(verts), sorted(edges), name=f"1/2 ~H({N},2)")


def shrikhande_graph() -> Graph:
    """Cayley graph on Z4 x Z4 with connection set {+-(1,0), +-(0,1), +-(1,1)}."""
    conn = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)]
    edges = set()
    for a in range(4):
        for b in range(4):
            u = 4 * a + b
            for da, db in conn:
                v = 4 * ((a + da) % 4) + (b + db) % 4
                edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(16, sorted(edges), name="Shrikhande")


def _doob_graph(ns, mk):
    if ns < 1:
        raise InvalidParams("Doob graph needs at least one Shrikhande factor")
    factors = []
    shr = shrikhande_graph()
    shr_adj = {u: set(map(int, shr.neighbors(u))) for u in range(16)}
    for _ in range(ns):
        factors.append((16, shr_adj))
    k4_adj = {u: {v for v in range(4) if v != u} for u in range(4)}
    for _ in range(mk):
        factors.append((4, k4_adj))
    sizes = [f[0] for f in factors]
    n = int(np.prod(sizes))
    if n > BUILD_CAP:
        raise TooLarge(f"Doob({ns},{mk}) has {n} vertices")
    strides = []
    s = 1
    for size in reversed(sizes):
        strides.append(s)
        s *= size
    strides.reverse()

    def nbrs(u):
        for (size, adj), stride in zip(factors, strides):
            digit = (u // stride) % size
            for d in adj[digit]:
                yield u + (d - digit) * stride

    return _graph_from_neighbor_map(n, nbrs, f"Doob({ns},{mk})")


def _hermitean_graph(D, pn):
    if pn != 2 or D != 3:
        raise NotBuildable("explicit Hermitean forms graph implemented for D=3, p^n=2")
    # Hermitean 3x3 matrices over GF(4) w.r.t. conjugation x -> x^2:
    # GF(2) diagonal (3 bits) + 3 free GF(4) upper entries (2 bits each).
    n = 512

    def decode(u):
        d = [(u >> i) & 1 for i in range(3)]
        e = [(u >> (3 + 2 * i)) & 3 for i in range(3)]
        return d, e

    def rank1(u):
        d, e = decode(u)
        m = [
            [d[0], e[0], e[1]],
            [gf4_conj(e[0]), d[1], e[2]],
            [gf4_conj(e[1]), gf4_conj(e[2]), d[2]],
        ]
        return gf4_rank(m) == 1

    # addition of Hermitean matrices is XOR of encodings, so x ~ y iff
    # rank(x - y) = 1 iff rank1(x ^ y)
    deltas = [w for w in range(1, n) if rank1(w)]
    if len(deltas) != 21:
        raise InvalidParams(
            f"Hermitean model check failed: {len(deltas)} rank-1 forms, expected 21"
        )
    edges = [(u, u ^ w) for u in range(n) for w in deltas if u < (u ^ w)]
    return Graph.from_edges(n, sorted(set(edges)), name=f"Her_{D}({pn})")


_CONSTRUCTORS = {
    "hamming": lambda p: _hamming_graph(p["D"], p["N"]),
    "johnson": lambda p: _johnson_graph(p["N"], p["D"]),
    "odd": lambda p: _odd_graph(p["D"]),
    "grassmann": lambda p: _grassmann_graph(p["q"], p["N"], p["D"]),
    "dualpolar_d": lambda p: _dualpolar_d_graph(p["q"], p["D"]),
    "halved_cube": lambda p: _halved_cube_graph(p["N"]),
    "folded_cube": lambda p: _folded_cube_graph(p["N"]),
    "folded_half_cube": lambda p: _folded_half_cube_graph(p["N"]),
    "doob": lambda p: _doob_graph(p["n"], p["m"]),
    "hermitean": lambda p: _hermitean_graph(p["D"], p["pn"]),
    "shrikhande": lambda p: shrikhande_graph(),
}


def construct(spec: FamilySpec) -> Graph:
    """Explicit graph for a buildable family spec."""
    if not spec.buildable:
        raise NotBuildable(f"{spec.family} with {spec.params} is parameter-only")
    if spec.family not in _CONSTRUCTORS:
        raise InvalidParams(f"unknown family {spec.family!r}")
    return _CONSTRUCTORS[spec.family](spec.params)


# ---------------------------------------------------------------------------
# closed-form parameter data


def _ia(D, c, a, b) -> IntersectionArray:
    ia = IntersectionArray(D=D, c=tuple(c), a=tuple(a), b=tuple(b))
    ia.validate()
    return ia


def _ia_from_cb(D, c, b) -> IntersectionArray:
    k = b[0]
    cf = [0] + list(c)
    bf = list(b) + [0]
    a = [k - cf[i] - bf[i] for i in range(D + 1)]
    if any(x < 0 for x in a):
        raise InvalidParams(f"negative a_i from c={c}, b={b}")
    return _ia(D, c, a, b)


def _intify(seq):
    out = []
    for v in seq:
        r = round(v)
        out.append(int(r) if abs(v - r) < 1e-9 else float(v))
    return out


def _hamming_data(D, N):
    c = [i for i in range(1, D + 1)]
    b = [(N - 1) * (D - i) for i in range(D)]
    ia = _ia_from_cb(D, c, b)
    th = [D * (N - 1) - i * N for i in range(D + 1)]
    structures = [QStructure(
        label="principal", theta=th, theta_star=list(th), gamma_star=0.0,
        dc=True, xi=0.0, norton_balanced=True,
    )]
    if N == 2 and D % 2 == 0:
        th2 = [(-1) ** i * (D - 2 * i) for i in range(D + 1)]
        structures.append(QStructure(
            label="second", theta=th2, theta_star=list(th2), gamma_star=0.0,
            dc=True, xi=None, norton_balanced=True,
        ))
    return FamilyData(intersection=ia, structures=structures,
                      z=[0] * (D - 1), reinforced=True)


def _johnson_data(N, D):
    c = [i * i for i in range(1, D + 1)]
    b = [(D - i) * (N - D - i) for i in range(D)]
    ia = _ia_from_cb(D, c, b)
    th = [(D - i) * (N - D - i) - i for i in range(D + 1)]
    ths = [N - 1 - i * N * (N - 1) / (D * (N - D)) for i in range(D + 1)]
    st = QStructure(label="principal", theta=th, theta_star=ths, gamma_star=0.0,
                    dc=True, xi=2.0, norton_balanced=True)
    return FamilyData(intersection=ia, structures=[st],
                      z=[2 * (i - 1) for i in range(2, D + 1)], reinforced=True)


def _odd_data(D):
    c = [(2 * i + 1 - (-1) ** i) // 4 for i in range(1, D + 1)]
    b = [D + (3 - 2 * i + (-1) ** i) // 4 for i in range(D)]
    ia = _ia_from_cb(D, c, b)
    th = [(-1) ** i * (D - i + 1) for i in range(D + 1)]
    ths = [((-1) ** i * (4 * D * D - 4 * i * D + 4 * D - 2 * i + 1) - 1) / (2 * (D + 1))
           for i in range(D + 1)]
    st = QStructure(label="principal", theta=th, theta_star=ths,
                    gamma_star=-2.0 / (D + 1), dc=True, xi=0.0, norton_balanced=True)
    return FamilyData(intersection=ia, structures=[st],
                      z=[0] * (D - 1), reinforced=True, notes={"almost_bipartite": True})


def _grassmann_data(q, N, D):
    gauss = lambda i: (q ** i - 1) // (q - 1)
    c = [gauss(i) ** 2 for i in range(1, D + 1)]
    b = [q * (q ** D - q ** i) * (q ** (N - D) - q ** i) // (q - 1) ** 2 for i in range(D)]
    ia = _ia_from_cb(D, c, b)
    th = [q ** (1 - i) * (q ** D - q ** i) * (q ** (N - D) - q ** i) / (q - 1) ** 2
          - (q ** i - 1) / (q - 1) for i in range(D + 1)]
    A = (q ** N - q) / (q - 1)
    B = (q ** N - q) / (q ** D - 1) * (q ** N - 1) / (q ** (N - D) - 1)
    ths = [A - q ** (-i) * B * (q ** i - 1) / (q - 1) for i in range(D + 1)]
    antip = N == 2 * D
    dc = True if (antip or D == 3) else False
    nb = True if antip else (False if D >= 4 else None)
    st = QStructure(
        label="principal", theta=th, theta_star=ths,
        gamma_star=2 * (q - 1) * (q ** (2 * D - 1) - 1) / (q ** D - 1) if antip else None,
        dc=dc, xi=2.0 * q if antip else None, norton_balanced=nb,
    )
    return FamilyData(intersection=ia, structures=[st],
                      z=[2 * q * (q ** (i - 1) - 1) / (q - 1) for i in range(2, D + 1)],
                      reinforced=True)


def _dualpolar_d_data(q, D):
    # D_D(q): e = -1
    c = [(q ** i - 1) // (q - 1) for i in range(1, D + 1)]
    b = [(q ** D - q ** i) // (q - 1) for i in range(D)]
    ia = _ia_from_cb(D, c, b)
    th = [(q ** D - 1) / (q - 1) - (q ** i - 1) * (q ** (D - i) + 1) / (q - 1)
          for i in range(D + 1)]
    e = -1
    front = (q ** (D + e) + q) / (q ** e + 1)
    ths = [front * (q ** (-i) * (q ** (D + e) + 1) - q ** e - 1) / (q - 1)
           for i in range(D + 1)]
    st = QStructure(label="principal", theta=th, theta_star=ths,
                    gamma_star=(q - 1) * (q ** (D - 2) + 1), dc=True, xi=0.0,
                    norton_balanced=True)
    return FamilyData(intersection=ia, structures=[st], z=[0] * (D - 1),
                      reinforced=True, notes={"bipartite": True})


def _halved_cube_data(N):
    D = N // 2
    if N % 2 == 0:
        c = [i * (2 * i - 1) for i in range(1, D + 1)]
        b = [(D - i) * (2 * D - 1 - 2 * i) for i in range(D)]
        ia = _ia_from_cb(D, c, b)
        th = [D * (2 * D - 1) - 2 * i * (2 * D - i) for i in range(D + 1)]
        ths = [2 * D - 4 * i for i in range(D + 1)]
        sts = [QStructure(label="principal", theta=th, theta_star=ths, gamma_star=0.0,
                          dc=True, xi=4.0, norton_balanced=True)]
    else:
        c = [i * (2 * i - 1) for i in range(1, D + 1)]
        b = [(D - i) * (2 * D + 1 - 2 * i) for i in range(D)]
        ia = _ia_from_cb(D, c, b)
        th = [D * (2 * D + 1) - 2 * i * (2 * D - i + 1) for i in range(D + 1)]
        ths = [2 * D + 1 - 4 * i for i in range(D + 1)]
        th2 = [D * (2 * D + 1) - 4 * i * (2 * D - 2 * i + 1) for i in range(D + 1)]
        sts = [
            QStructure(label="principal", theta=th, theta_star=ths, gamma_star=0.0,
                       dc=True, xi=4.0, norton_balanced=True),
            QStructure(label="second", theta=th2, theta_star=list(th2), gamma_star=16.0,
                       dc=True, xi=4.0, norton_balanced=True),
        ]
    return FamilyData(intersection=ia, structures=sts,
                      z=[4 * (i - 1) for i in range(2, D + 1)], reinforced=True)


def _folded_cube_data(N):
    D = N // 2
    if N % 2 == 0:
        c = [i for i in range(1, D)] + [2 * D]
        b = [2 * D - i for i in range(D)]
        ia = _ia_from_cb(D, c, b)
        th = [2 * D - 4 * i for i in range(D + 1)]
        ths = [D * (2 * D - 1) - 2 * i * (2 * D - i) for i in range(D + 1)]
        sts = [QStructure(label="principal", theta=th, theta_star=ths, gamma_star=4.0,
                          dc=True, xi=0.0, norton_balanced=True)]
        notes = {"bipartite": True}
    else:
        c = [i for i in range(1, D + 1)]
        b = [2 * D + 1 - i for i in range(D)]
        ia = _ia_from_cb(D, c, b)
        th = [2 * D + 1 - 4 * i for i in range(D + 1)]
        ths = [D * (2 * D + 1) - 2 * i * (2 * D - i + 1) for i in range(D + 1)]
        th2 = [(-1) ** i * (2 * D - 2 * i + 1) for i in range(D + 1)]
        sts = [
            QStructure(label="principal", theta=th, theta_star=ths, gamma_star=4.0,
                       dc=True, xi=0.0, norton_balanced=True),
            QStructure(label="second", theta=th2, theta_star=list(th2), gamma_star=0.0,
                       dc=True, xi=None, norton_balanced=True),
        ]
        notes = {"almost_bipartite": True}
    return FamilyData(intersection=ia, structures=sts,
                      z=[0] * (D - 1), reinforced=True, notes=notes)


def _folded_half_cube_data(N):
    if N % 4:
        raise InvalidParams("folded-half cube data implemented for N = 4D")
    D = N // 4
    c = [i * (2 * i - 1) for i in range(1, D)] + [2 * D * (2 * D - 1)]
    b = [(2 * D - i) * (4 * D - 2 * i - 1) for i in range(D)]
    ia = _ia_from_cb(D, c, b)
    th = [2 * D * (4 * D - 1) - 8 * i * (2 * D - i) for i in range(D + 1)]
    st = QStructure(label="principal", theta=th, theta_star=list(th), gamma_star=16.0,
                    dc=True, xi=4.0, norton_balanced=True)
    return FamilyData(intersection=ia, structures=[st],
                      z=[4 * (i - 1) for i in range(2, D + 1)], reinforced=True)


def _hermitean_data(D, pn):
    q = -pn
    c = [q ** (i - 1) * (q ** i - 1) // (q - 1) for i in range(1, D + 1)]
    b = [-(q ** (2 * D) - q ** (2 * i)) // (q - 1) for i in range(D)]
    ia = _ia_from_cb(D, c, b)
    th = [-(q ** (2 * D - i) - 1) / (q - 1) for i in range(D + 1)]
    is_q2 = pn == 2
    st = QStructure(
        label="principal", theta=th, theta_star=list(th),
        gamma_star=(1 / q - 1) if is_q2 else None,
        dc=(True if (is_q2 or D == 3) else False),
        xi=0.0 if is_q2 else None,
        norton_balanced=False if is_q2 else None,
    )
    return FamilyData(intersection=ia, structures=[st], z=[0] * (D - 1),
                      reinforced=True, notes={"a1star_zero": is_q2})


def _doob_data(ns, mk):
    D = 2 * ns + mk
    data = _hamming_data(D, 4)
    st = data.structures[0]
    st.norton_balanced = False
    return FamilyData(intersection=data.intersection, structures=[st], z=None,
                      reinforced=False,
                      notes={"z_minus": [0.0] * (D - 1),
                             "z_plus": {i + 1: 4 * i / (3 * D - 2 * i) for i in range(2, D)}})


def _halved_dual_polar_data(pn, D):
    q = float(pn) ** 2
    s = float(pn)  # q^(1/2)
    c = [(q ** i - 1) / (q - 1) * (q ** i / s - 1) / (s - 1) for i in range(1, D + 1)]
    b = [(q ** D - q ** i) / (q - 1) * (q ** D - q ** i * s) / (s - 1) for i in range(D)]
    c = [int(round(v)) for v in c]
    b = [int(round(v)) for v in b]
    ia = _ia_from_cb(D, c, b)
    th = [s * (q ** D - 1) / (q - 1) * (q ** D / s - 1) / (s - 1)
          - (q ** i - 1) / (q - 1) * (q ** (2 * D - i) - 1) / (s - 1)
          for i in range(D + 1)]
    front = (q ** (2 * D - 1) - q) / (q ** D - q)
    ths = [s * (q ** D - 1) / (q - 1) * front
           - (q ** D / s + 1) / q ** (i - 1) * (q ** i - 1) / (q - 1) * front
           for i in range(D + 1)]
    gam = (q - 1) * (s + 1) * (q ** (2 * D) - q ** 2) / (s ** 3 * (q ** D - q))
    st = QStructure(label="principal", theta=th, theta_star=ths, gamma_star=gam,
                    dc=True, xi=s * (s + 1) ** 2, norton_balanced=True)
    return FamilyData(intersection=ia, structures=[st],
                      z=[s * (q - 1) * (q ** (i - 1) - 1) / (s - 1) ** 2
                         for i in range(2, D + 1)],
                      reinforced=True)


def _bilinear_forms_data(q, D, N):
    if N < D:
        raise InvalidParams("bilinear forms graph needs N >= D")
    c = [q ** (i - 1) * (q ** i - 1) // (q - 1) for i in range(1, D + 1)]
    b = [q ** (2 * i) * (q ** (D - i) - 1) * (q ** (N - i) - 1) // (q - 1) for i in range(D)]
    ia = _ia_from_cb(D, c, b)
    # theta/theta* derived downstream from the array (scheme route); the
    # published verdicts for D >= 4:
    st = QStructure(label="principal", theta=[], theta_star=[], gamma_star=None,
                    dc=(False if D >= 4 else True), xi=None,
                    norton_balanced=(False if D >= 4 else None))
    return FamilyData(intersection=ia, structures=[st], z=None, reinforced=None)


def _alternating_forms_data(q, N):
    D = N // 2
    c = [q ** (2 * i - 2) * (q ** (2 * i) - 1) // (q ** 2 - 1) for i in range(1, D + 1)]
    b = [q ** (4 * i) * (q ** (N - 2 * i) - 1) * (q ** (N - 2 * i - 1) - 1) // (q ** 2 - 1)
         for i in range(D)]
    ia = _ia_from_cb(D, c, b)
    st = QStructure(label="principal", theta=[], theta_star=[], gamma_star=None,
                    dc=(False if D >= 4 else True), xi=None,
                    norton_balanced=(False if D >= 4 else None))
    return FamilyData(intersection=ia, structures=[st], z=None, reinforced=None)


_DATA = {
    "hamming": lambda p: _hamming_data(p["D"], p["N"]),
    "johnson": lambda p: _johnson_data(p["N"], p["D"]),
    "odd": lambda p: _odd_data(p["D"]),
    "grassmann": lambda p: _grassmann_data(p["q"], p["N"], p["D"]),
    "dualpolar_d": lambda p: _dualpolar_d_data(p["q"], p["D"]),
    "halved_cube": lambda p: _halved_cube_data(p["N"]),
    "folded_cube": lambda p: _folded_cube_data(p["N"]),
    "folded_half_cube": lambda p: _folded_half_cube_data(p["N"]),
    "doob": lambda p: _doob_data(p["n"], p["m"]),
    "hermitean": lambda p: _hermitean_data(p["D"], p["pn"]),
    "halved_dual_polar": lambda p: _halved_dual_polar_data(p["pn"], p["D"]),
    "bilinear_forms": lambda p: _bilinear_forms_data(p["q"], p["D"], p["N"]),
    "alternating_forms": lambda p: _alternating_forms_data(p["q"], p["N"]),
}


def family_data(spec: FamilySpec) -> FamilyData:
    """Closed-form intersection array, eigen sequences and published verdicts."""
    if spec.family == "shrikhande":
        raise InvalidParams("the Shrikhande graph has diameter 2; no DRG family data")
    if spec.family not in _DATA:
        raise InvalidParams(f"unknown family {spec.family!r}")
    try:
        return _DATA[spec.family](spec.params)
    except KeyError as exc:
        raise InvalidParams(f"missing parameter {exc} for family {spec.family}")


def _spec(key, family, params, label, buildable=True, drg_instance=True):
    return FamilySpec(family=family, params=params, buildable=buildable,
                      drg_instance=drg_instance, key=key, label=label)


def catalogue() -> list:
    """The default desk-scale corpus."""
    return [
        _spec("H_3_2", "hamming", {"D": 3, "N": 2}, "H(3,2)"),
        _spec("H_4_2", "hamming", {"D": 4, "N": 2}, "H(4,2)"),
        _spec("H_3_4", "hamming", {"D": 3, "N": 4}, "H(3,4)"),
        _spec("J_6_3", "johnson", {"N": 6, "D": 3}, "J(6,3)"),
        _spec("J_7_3", "johnson", {"N": 7, "D": 3}, "J(7,3)"),
        _spec("J_8_4", "johnson", {"N": 8, "D": 4}, "J(8,4)"),
        _spec("O_4", "odd", {"D": 3}, "O_4"),
        _spec("Jq2_6_3", "grassmann", {"q": 2, "N": 6, "D": 3}, "J_2(6,3)"),
        _spec("Doob_1_1", "doob", {"n": 1, "m": 1}, "Doob(1,1)"),
        _spec("halfH_6_2", "halved_cube", {"N": 6}, "1/2 H(6,2)"),
        _spec("halfH_8_2", "halved_cube", {"N": 8}, "1/2 H(8,2)"),
        _spec("halfH_7_2", "halved_cube", {"N": 7}, "1/2 H(7,2)"),
        _spec("foldH_8_2", "folded_cube", {"N": 8}, "~H(8,2)"),
        _spec("foldH_7_2", "folded_cube", {"N": 7}, "~H(7,2)"),
        _spec("halffoldH_12_2", "folded_half_cube", {"N": 12}, "1/2 ~H(12,2)"),
        _spec("Her_3_2", "hermitean", {"D": 3, "pn": 2}, "Her_3(2)"),
        _spec("DP_D4_2", "dualpolar_d", {"q": 2, "D": 4}, "D_4(2)"),
        _spec("Shrikhande", "shrikhande", {}, "Shrikhande", drg_instance=False),
        _spec("halfDP_q4_D4", "halved_dual_polar", {"pn": 2, "D": 4},
              "1/2 D_8(2) params", buildable=False),
        _spec("Bil_2_4_4", "bilinear_forms", {"q": 2, "D": 4, "N": 4},
              "H_2(4,4) params", buildable=False),
        _spec("Alt_2_8", "alternating_forms", {"q": 2, "N": 8},
              "Alt_2(8) params", buildable=False),
    ]


def catalogue_by_key() -> dict:
    return {s.key: s for s in catalogue()}

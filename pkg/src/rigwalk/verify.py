"""Empirical checks of the "typical graph" properties P0-P8 and the
auxiliary facts about B-cycles and clique sizes.

Each property holds only with high probability, so individual seeds may
fail at finite n.  :func:`verify_frequencies` aggregates pass counts over
seeds; nothing here raises on a failed property.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import theory
from .genrand import RngStream, intersection_of, sample_bipartite
from .model import BipartiteGraph, DerivedQuantities, GraphParams, IntersectionGraph, derive
from .traversal import bfs_distance, bfs_levels, is_bipartite, is_connected

__all__ = [
    "IntegrityError",
    "DegreeProfile",
    "Verdict",
    "PropertyReport",
    "psi",
    "degree_profile",
    "check_P0",
    "check_P1",
    "check_P2",
    "conductance_ratio",
    "check_P3",
    "check_P4",
    "check_P5",
    "check_P6",
    "check_P7",
    "check_P8",
    "check_fact8",
    "check_fact9",
    "check_fact10",
    "count_four_link_cycles",
    "short_b_cycles",
    "property_report",
    "verify_frequencies",
    "bfs_distance",
]

ALL_PROPERTIES = ("P0", "P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "F8", "F9", "F10")
DEFAULT_A_STAR = 0.25


class IntegrityError(ValueError):
    """The bipartite graph and intersection graph do not belong together."""


def psi(eps: float) -> float:
    """Chernoff rate ψ(ε) = ε ln ε + 1 - ε (ψ(0) = 1)."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if eps == 0:
        return 1.0
    return eps * math.log(eps) + 1.0 - eps


def _scale(n: int, a_star: float) -> float:
    return a_star * math.log(n) / math.log(math.log(n))


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool | None
    statistic: object
    bound: object
    estimate: bool = False
    detail: dict = field(default_factory=dict)
    runtime: float = 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": "estimate" if self.estimate else ("pass" if self.passed else "fail"),
            "passed": bool(self.passed),
            "statistic": _plain(self.statistic),
            "bound": _plain(self.bound),
            "detail": _plain(self.detail),
            "runtime": self.runtime,
        }


def _plain(x):
    """Recursively convert numpy scalars, arrays and sets to JSON-ready values."""
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, (str, int, float, bool)) else _plain(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset, np.ndarray)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_plain(v) for v in items]
    if isinstance(x, np.generic):
        return x.item()
    return x


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        v = fn(*args, **kwargs)
        return Verdict(**{**v.__dict__, "runtime": time.perf_counter() - t0})

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- degree profile ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DegreeProfile:
    n: int
    degrees: np.ndarray
    wprime_size: np.ndarray
    D: dict
    D_ki: dict
    small_set: frozenset
    Dstar_ki0: dict
    i0: int | None

    @property
    def large_set(self) -> frozenset:
        return frozenset(range(self.n)) - self.small_set


def _wprime_sizes(b: BipartiteGraph) -> np.ndarray:
    sizes = b.clique_sizes()
    shared = np.repeat(sizes >= 2, sizes)
    return np.bincount(b.attr_vertices[shared], minlength=b.n)


def degree_profile(b: BipartiteGraph, g: IntersectionGraph, q: DerivedQuantities | None = None) -> DegreeProfile:
    """Degree counts D(k), joint counts D(k, i) with i = |W'(v)|, the SMALL set
    and the isolated counts D*(k, i0)."""
    if b.n != g.n:
        raise IntegrityError(f"vertex counts differ: B has {b.n}, G has {g.n}")
    ref = intersection_of(b)
    if ref.edge_count != g.edge_count or not np.array_equal(ref.indices, g.indices):
        raise IntegrityError("G is not the intersection graph of B")
    q = derive(b.params) if q is None else q
    n = b.n
    deg = g.degrees
    wp = _wprime_sizes(b)
    D = {int(k): int(c) for k, c in zip(*np.unique(deg, return_counts=True))}
    pairs, counts = np.unique(np.column_stack([deg, wp]), axis=0, return_counts=True)
    D_ki = {(int(k), int(i)): int(c) for (k, i), c in zip(pairs, counts)}
    small = frozenset(np.flatnonzero(wp <= 0.1 * math.log(n)).tolist())

    i0 = q.i0
    thr = math.log(n) / math.log(math.log(n)) ** 3
    reach = max(0, math.ceil(thr) - 1)  # distances strictly below thr
    cand = np.flatnonzero(wp == i0)
    is_cand = np.zeros(n, dtype=bool)
    is_cand[cand] = True
    Dstar: dict[int, int] = {}
    for v in cand:
        if reach > 0:
            dist = bfs_levels(g, int(v), cap=reach)
            near = np.flatnonzero((dist > 0) & is_cand)
            if near.size:
                continue
        k = int(deg[v])
        Dstar[k] = Dstar.get(k, 0) + 1
    return DegreeProfile(n, deg, wp, D, D_ki, small, Dstar, i0)


# -- P0, P1 ----------------------------------------------------------------------

@_timed
def check_P0(g: IntersectionGraph) -> Verdict:
    """Connected and not bipartite (has an odd cycle)."""
    conn = is_connected(g)
    odd = not is_bipartite(g)
    return Verdict("P0", conn and odd, {"connected": conn, "odd_cycle": odd}, "connected and non-bipartite")


@_timed
def check_P1(g: IntersectionGraph, q: DerivedQuantities) -> Verdict:
    target = q.n * q.n * q.m * q.p * q.p / 2.0
    dev = abs(g.edge_count - target)
    bound = math.sqrt(q.n) * math.log(q.n)
    return Verdict("P1", dev <= bound, dev, bound, detail={"edges": g.edge_count, "target": target})


# -- P2 ----------------------------------------------------------------------------

def conductance_ratio(g: IntersectionGraph, S) -> float:
    """e(S, S̄) / (2 e(S, S) + e(S, S̄)) for a vertex set S."""
    mask = np.zeros(g.n, dtype=bool)
    mask[list(S)] = True
    deg = g.degrees
    vol = int(deg[mask].sum())
    if vol == 0:
        return math.nan
    e = g.edges()
    internal = int((mask[e[:, 0]] & mask[e[:, 1]]).sum())
    return (vol - 2 * internal) / vol


def _p2_exact(g: IntersectionGraph):
    n = g.n
    deg = g.degrees
    edges = g.edges()
    best, arg = math.inf, None
    limit = n // 2
    chunk = 1 << 16
    for lo in range(1, 1 << n, chunk):
        masks = np.arange(lo, min(lo + chunk, 1 << n), dtype=np.int64)
        size = np.zeros(masks.size, dtype=np.int64)
        vol = np.zeros(masks.size, dtype=np.int64)
        bits = [(masks >> v) & 1 for v in range(n)]
        for v in range(n):
            size += bits[v]
            vol += bits[v] * deg[v]
        internal = np.zeros(masks.size, dtype=np.int64)
        for u, v in edges:
            internal += bits[u] & bits[v]
        ok = (size <= limit) & (vol > 0)
        if not ok.any():
            continue
        ratio = np.where(ok, (vol - 2 * internal) / np.maximum(vol, 1), np.inf)
        j = int(np.argmin(ratio))
        if ratio[j] < best:
            best, arg = float(ratio[j]), int(masks[j])
    S = [v for v in range(n) if arg is not None and arg >> v & 1]
    return best, S


def _p2_search(g: IntersectionGraph, master: int, restarts: int):
    """Upper bound on the minimum ratio: BFS balls around random vertices,
    each improved by greedy single-vertex moves."""
    n = g.n
    deg = g.degrees.astype(np.int64)
    rng = RngStream(master, 0, "p2-search").generator()
    best, best_S = math.inf, None
    for _ in range(restarts):
        src = int(rng.integers(n))
        dist = bfs_levels(g, src)
        order = np.argsort(np.where(dist < 0, n + 1, dist), kind="stable")
        size = int(rng.integers(1, n // 2 + 1))
        mask = np.zeros(n, dtype=bool)
        mask[order[:size]] = True
        inside = np.zeros(n, dtype=np.int64)  # neighbours of v inside S
        src_idx = np.repeat(np.arange(n), g.degrees)
        np.add.at(inside, src_idx, mask[g.indices].astype(np.int64))
        vol = int(deg[mask].sum())
        internal2 = int(inside[mask].sum())
        improved = True
        while improved:
            improved = False
            cur = (vol - internal2) / vol if vol else math.inf
            # candidate moves: boundary vertices in or out
            for v in rng.permutation(n)[: min(n, 256)]:
                if mask[v]:
                    if mask.sum() <= 1:
                        continue
                    nvol = vol - deg[v]
                    nint = internal2 - 2 * inside[v]
                else:
                    if mask.sum() >= n // 2 or inside[v] == 0:
                        continue
                    nvol = vol + deg[v]
                    nint = internal2 + 2 * inside[v]
                if nvol > 0 and (nvol - nint) / nvol < cur - 1e-15:
                    flip = 1 if not mask[v] else -1
                    mask[v] = not mask[v]
                    nb = g.neighbors(v)
                    inside[nb] += flip
                    vol, internal2 = nvol, nint
                    cur = (vol - internal2) / vol
                    improved = True
        ratio = (vol - internal2) / vol
        if ratio < best:
            best, best_S = ratio, np.flatnonzero(mask).tolist()
    return best, best_S


@_timed
def check_P2(g: IntersectionGraph, mode: str = "auto", master: int = 0, restarts: int = 32) -> Verdict:
    """min over |S| <= n/2 of e(S,S̄)/(2e(S,S)+e(S,S̄)) against 1/50.

    ``exact`` enumerates all subsets (n <= 20); ``heuristic`` reports the
    best ratio found by local search, an upper bound on the minimum, and is
    labelled an estimate.
    """
    if mode == "auto":
        mode = "exact" if g.n <= 20 else "heuristic"
    if mode == "exact":
        if g.n > 20:
            raise ValueError("exact P2 needs n <= 20")
        ratio, S = _p2_exact(g)
        return Verdict("P2", ratio > 1 / 50, ratio, 1 / 50, detail={"mode": "exact", "argmin": S})
    ratio, S = _p2_search(g, master, restarts)
    return Verdict(
        "P2", ratio > 1 / 50, ratio, 1 / 50, estimate=True,
        detail={"mode": "heuristic", "restarts": restarts, "argmin_size": len(S or [])},
    )


# -- P3, P4, P5 ------------------------------------------------------------------

@_timed
def check_P3(profile: DegreeProfile, q: DerivedQuantities) -> Verdict:
    max_w = int(profile.wprime_size.max(initial=0))
    max_d = int(profile.degrees.max(initial=0))
    return Verdict("P3", max_w <= q.delta and max_d <= q.delta,
                   {"max_wprime": max_w, "max_degree": max_d}, q.delta)


@njit(cache=True, nogil=True)
def _max_common(indptr, indices):
    n = indptr.size - 1
    best = 0
    for u in range(n):
        for a in range(indptr[u], indptr[u + 1]):
            v = indices[a]
            if v <= u:
                continue
            i, j, c = indptr[u], indptr[v], 0
            while i < indptr[u + 1] and j < indptr[v + 1]:
                x, y = indices[i], indices[j]
                if x == y:
                    c += 1
                    i += 1
                    j += 1
                elif x < y:
                    i += 1
                else:
                    j += 1
            if c > best:
                best = c
    return best


def p4_bound(q: DerivedQuantities) -> float:
    return max(2.0 * q.np, 4.0) * math.log(q.n) / math.log(math.log(q.n))


@_timed
def check_P4(g: IntersectionGraph, q: DerivedQuantities) -> Verdict:
    """Adjacent pairs share at most max{2np, 4} ln n / ln ln n neighbours."""
    worst = int(_max_common(g.indptr, g.indices))
    bound = p4_bound(q)
    return Verdict("P4", worst <= bound, worst, bound)


@_timed
def check_P5(profile: DegreeProfile, g: IntersectionGraph) -> Verdict:
    deg = profile.degrees
    wp = profile.wprime_size
    slack = int((deg - (wp - 1)).min(initial=0)) if deg.size else 0
    ok_all = bool((deg >= wp - 1).all())
    large = np.array(sorted(profile.large_set), dtype=np.int64)
    bound_large = math.log(profile.n) / 11.0
    min_large = int(deg[large].min()) if large.size else None
    ok_large = min_large is None or min_large >= bound_large
    return Verdict("P5", ok_all and ok_large,
                   {"min_deg_minus_wprime_plus1": slack, "min_large_degree": min_large},
                   {"all": "deg >= |W'|-1", "large": bound_large})


# -- P6 --------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _max_back_neighbours(indptr, indices, sources, depth):
    n = indptr.size - 1
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    worst = 0
    for s in sources:
        dist[s] = 0
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            v = queue[head]
            head += 1
            if dist[v] >= depth:
                continue
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    queue[tail] = u
                    tail += 1
        for h in range(1, tail):
            u = queue[h]
            back = 0
            for k in range(indptr[u], indptr[u + 1]):
                if dist[indices[k]] == dist[u] - 1:
                    back += 1
            if back > worst:
                worst = back
        for h in range(tail):
            dist[queue[h]] = -1
    return worst


@_timed
def check_P6(g: IntersectionGraph, a_star: float = DEFAULT_A_STAR, sample: int = 64, master: int = 0) -> Verdict:
    """Within depth a⋆ ln n/ln ln n of any v, each vertex of layer i has at
    most two neighbours in layer i-1.  Sources are all vertices for
    n <= 10^4, else ``sample`` random ones."""
    depth = math.floor(_scale(g.n, a_star))
    if g.n <= 10_000:
        sources = np.arange(g.n, dtype=np.int64)
    else:
        sources = RngStream(master, 0, "p6").generator().choice(g.n, size=sample, replace=False).astype(np.int64)
    worst = int(_max_back_neighbours(g.indptr, g.indices, sources, depth)) if depth >= 1 else 0
    return Verdict("P6", worst <= 2, worst, 2, estimate=g.n > 10_000,
                   detail={"depth": depth, "a_star": a_star, "sources": int(sources.size),
                           "vacuous": depth < 1})


# -- B-cycles and P7 --------------------------------------------------------------

def _bipartite_csr(b: BipartiteGraph):
    """B as one graph on n + m nodes: vertices 0..n-1, attribute w at n + w."""
    n = b.n
    indptr = np.concatenate([b.vert_ptr, b.vert_ptr[-1] + b.attr_ptr[1:]])
    indices = np.concatenate([b.vert_attrs + n, b.attr_vertices])
    return indptr.astype(np.int64), indices.astype(np.int64)


def short_b_cycles(b: BipartiteGraph, max_links: int) -> list[tuple[int, ...]]:
    """All B-cycles with at most ``max_links`` links, as node tuples on the
    n + m node set, canonical up to rotation and reflection (the smallest
    node first, then the smaller of its two neighbours)."""
    if max_links < 4:
        return []
    indptr, indices = _bipartite_csr(b)
    out = []
    for s in range(indptr.size - 1):
        path = [s]
        on_path = {s}

        def extend(v):
            for k in range(indptr[v], indptr[v + 1]):
                u = int(indices[k])
                if u == s and len(path) >= 4 and path[1] < path[-1]:
                    out.append(tuple(path))
                elif u > s and u not in on_path and len(path) < max_links:
                    path.append(u)
                    on_path.add(u)
                    extend(u)
                    path.pop()
                    on_path.discard(u)

        extend(s)
    return out


def count_four_link_cycles(b: BipartiteGraph) -> int:
    """Number of B-cycles with 4 links: Σ over attribute pairs of C(c, 2),
    c = number of vertices holding both attributes."""
    keys = []
    m = b.m
    for v in range(b.n):
        ws = b.attributes_of(v)
        if ws.size >= 2:
            i, j = np.triu_indices(ws.size, 1)
            keys.append(ws[i] * m + ws[j])
    if not keys:
        return 0
    _, c = np.unique(np.concatenate(keys), return_counts=True)
    return int((c * (c - 1) // 2).sum())


def _link_distance_sets(indptr, indices, sets, cap):
    """Minimum link distance between distinct node sets (cap if none closer).

    Multi-source BFS from every set at once; two sets meet when their
    frontiers touch.
    """
    N = indptr.size - 1
    owner = np.full(N, -1, dtype=np.int64)
    dist = np.full(N, -1, dtype=np.int64)
    frontier = []
    best = cap
    for j, nodes in enumerate(sets):
        for x in nodes:
            if owner[x] >= 0 and owner[x] != j:
                return 0
            owner[x] = j
            dist[x] = 0
            frontier.append(x)
    d = 0
    while frontier and 2 * d < best:
        nxt = []
        for v in frontier:
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if owner[u] < 0:
                    owner[u] = owner[v]
                    dist[u] = d + 1
                    nxt.append(u)
                elif owner[u] != owner[v]:
                    best = min(best, dist[u] + dist[v] + 1)
        frontier = nxt
        d += 1
    return best


@_timed
def check_P7(b: BipartiteGraph, q: DerivedQuantities | None = None, a_star: float = DEFAULT_A_STAR) -> Verdict:
    """Small vertices and short B-cycles are pairwise at least
    a⋆ ln n/ln ln n links apart."""
    res = _fact8(b, a_star)
    return Verdict("P7", res["passed"], res["min_separation"], res["threshold"], detail=res)


def _fact8(b: BipartiteGraph, a_star: float) -> dict:
    n = b.n
    thr = _scale(n, a_star)
    L = math.floor(thr)
    wp = _wprime_sizes(b)
    small = np.flatnonzero(wp <= 0.1 * math.log(n))
    cycles = short_b_cycles(b, L)
    indptr, indices = _bipartite_csr(b)
    groups = [[int(v)] for v in small] + [list(c) for c in cycles]
    cap = math.ceil(thr) + 1
    sep = {}
    # pairwise separations per kind
    small_groups = [[int(v)] for v in small]
    cyc_groups = [list(c) for c in cycles]
    sep["small_small"] = _link_distance_sets(indptr, indices, small_groups, cap) if len(small_groups) > 1 else cap
    sep["cycle_cycle"] = _link_distance_sets(indptr, indices, cyc_groups, cap) if len(cyc_groups) > 1 else cap
    if small_groups and cyc_groups:
        sep["small_cycle"] = _mixed_distance(indptr, indices, small_groups, cyc_groups, cap)
    else:
        sep["small_cycle"] = cap
    min_sep = min(sep.values()) if groups else cap
    return {
        "passed": all(v >= thr for v in sep.values()),
        "threshold": thr,
        "a_star": a_star,
        "min_separation": min_sep,
        "separations": sep,
        "small_count": int(small.size),
        "short_cycle_count": len(cycles),
        "threshold_below_2": thr < 2,
    }


def _mixed_distance(indptr, indices, A, B, cap):
    N = indptr.size - 1
    targets = np.zeros(N, dtype=bool)
    for c in B:
        targets[c] = True
    best = cap
    for grp in A:
        for x in grp:
            if targets[x]:
                return 0
        seen = {x: 0 for x in grp}
        frontier = list(grp)
        d = 0
        while frontier and d + 1 < best:
            nxt = []
            for v in frontier:
                for k in range(indptr[v], indptr[v + 1]):
                    u = int(indices[k])
                    if u not in seen:
                        seen[u] = d + 1
                        if targets[u]:
                            best = min(best, d + 1)
                        nxt.append(u)
            frontier = nxt
            d += 1
    return best


@_timed
def check_fact8(b: BipartiteGraph, a_star: float = DEFAULT_A_STAR) -> Verdict:
    res = _fact8(b, a_star)
    return Verdict("F8", res["passed"], res["separations"], res["threshold"], detail=res)


@_timed
def check_fact9(b: BipartiteGraph) -> Verdict:
    """At most ln^3 n B-cycles with 4 links."""
    count = count_four_link_cycles(b)
    bound = math.log(b.n) ** 3
    p = b.params
    expected = p.n * (p.n - 1) * p.m * (p.m - 1) * p.p**4 / 4.0
    return Verdict("F9", count <= bound, count, bound, detail={"expected": expected})


@_timed
def check_fact10(b: BipartiteGraph) -> Verdict:
    """Every clique V(w) has at most max{2, np} ln n / ln ln n vertices."""
    biggest = int(b.clique_sizes().max(initial=0))
    n = b.n
    bound = max(2.0, n * b.params.p) * math.log(n) / math.log(math.log(n))
    return Verdict("F10", biggest <= bound, biggest, bound)


# -- P8 ------------------------------------------------------------------------------

@_timed
def check_P8(profile: DegreeProfile, q: DerivedQuantities) -> Verdict:
    ln_n = math.log(q.n)
    lnln_n = math.log(ln_n)
    bands = theory.degree_bands(q)
    Dbar = theory.dbar_table(q)
    D = profile.D
    bad_a = []
    for k in bands.K1:
        if D.get(k, 0) > lnln_n**2:
            bad_a.append(("K1", k))
    for k in bands.K2:
        if D.get(k, 0) > ln_n**4:
            bad_a.append(("K2", k))
    for k in bands.K3:
        if not 0.5 * Dbar[k] <= D.get(k, 0) <= 1.5 * Dbar[k]:
            bad_a.append(("K3", k))
    p8b_applies = (q.c - 1.0) >= ln_n ** (-1.0 / 3.0)
    low = [k for k in D if k <= math.sqrt(ln_n) and D[k] > 0]
    p8b = (not low) if p8b_applies else None
    kmax = max(q.k0, q.delta)
    Dk_i0 = theory.dbar_matrix(q, kmax)[:, q.i0]
    bad_c = [k for k in bands.I if profile.Dstar_ki0.get(k, 0) < Dk_i0[k] / 2]
    p8c = bool(bands.I) and not bad_c
    passed = not bad_a and p8b is not False and p8c
    return Verdict(
        "P8", passed,
        {"P8a_violations": len(bad_a), "P8b_low_degree": low, "I_size": len(bands.I)},
        "bands",
        detail={"P8a": not bad_a, "P8a_first": bad_a[:5], "P8b": p8b, "P8b_applies": p8b_applies,
                "P8c": p8c, "P8c_I_empty": not bands.I, "P8c_violations": bad_c[:5]},
    )


# -- report ---------------------------------------------------------------------------

@dataclass
class PropertyReport:
    params: dict
    verdicts: dict
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema": "report-v1",
            "kind": "properties",
            "params": self.params,
            "verdicts": {k: self.verdicts[k].to_dict() for k in sorted(self.verdicts)},
            "warnings": self.warnings,
        }


def property_report(
    b: BipartiteGraph,
    g: IntersectionGraph,
    q: DerivedQuantities | None = None,
    a_star: float = DEFAULT_A_STAR,
    properties=ALL_PROPERTIES,
    p2_mode: str = "auto",
    master: int = 0,
) -> PropertyReport:
    q = derive(b.params) if q is None else q
    props = set(properties)
    need_profile = props & {"P3", "P5", "P8"}
    profile = degree_profile(b, g, q) if need_profile else None
    out = {}
    if "P0" in props:
        out["P0"] = check_P0(g)
    if "P1" in props:
        out["P1"] = check_P1(g, q)
    if "P2" in props:
        out["P2"] = check_P2(g, p2_mode, master)
    if "P3" in props:
        out["P3"] = check_P3(profile, q)
    if "P4" in props:
        out["P4"] = check_P4(g, q)
    if "P5" in props:
        out["P5"] = check_P5(profile, g)
    if "P6" in props:
        out["P6"] = check_P6(g, a_star, master=master)
    if "P7" in props:
        out["P7"] = check_P7(b, q, a_star)
    if "P8" in props:
        out["P8"] = check_P8(profile, q)
    if "F8" in props:
        out["F8"] = check_fact8(b, a_star)
    if "F9" in props:
        out["F9"] = check_fact9(b)
    if "F10" in props:
        out["F10"] = check_fact10(b)
    warn = []
    if _scale(b.n, a_star) < 2:
        warn.append(f"a_star ln n / ln ln n = {_scale(b.n, a_star):.3f} < 2: P6/P7 are nearly vacuous")
    return PropertyReport(q.as_dict(), out, warn)


def verify_frequencies(
    params: GraphParams,
    seeds,
    properties=ALL_PROPERTIES,
    a_star: float = DEFAULT_A_STAR,
    p2_mode: str = "auto",
) -> dict:
    """Pass counts per property over graphs sampled with the given seeds.

    Returns ``{name: (passes, trials)}``.
    """
    q = derive(params)
    tally = {name: [0, 0] for name in properties}
    for s in seeds:
        b = sample_bipartite(params, RngStream(s, 0, "bipartite"))
        g = intersection_of(b)
        rep = property_report(b, g, q, a_star, properties, p2_mode, master=s)
        for name, v in rep.verdicts.items():
            tally[name][1] += 1
            tally[name][0] += bool(v.passed)
    return {k: tuple(v) for k, v in tally.items()}

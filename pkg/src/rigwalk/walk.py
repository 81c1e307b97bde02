"""Simple random walks: cover times, returns, avoidance windows and mixing.

Monte Carlo routines split their trials over independent :class:`RngStream`
instances whose keys depend only on (master seed, start vertex, batch or
trial index).  Results are therefore identical for any worker count; the pool
size is read from ``RIGWALK_THREADS``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from . import _kernels as K
from .genrand import RngStream
from .model import CapacityError, IntersectionGraph, ParameterError
from .traversal import bfs_distance, bfs_levels, component_size, is_bipartite

__all__ = [
    "WalkError",
    "WalkStats",
    "CoverEstimate",
    "ReturnStats",
    "MergedGraph",
    "cover_walk",
    "exact_cover_time",
    "exact_cover_time_all",
    "default_starts",
    "estimate_cover_time",
    "exact_return_series",
    "return_stats",
    "mixing_time",
    "default_horizon",
    "window_first_hits",
    "unvisit_probability",
    "joint_unvisit_probability",
    "unvisit_prediction",
    "merge_vertices",
    "far_pair",
    "stationary_occupancy",
]

STEP_CAP = 10**10
EXACT_MAX_N = 12
EXACT_RETURN_MAX_N = 2000
COVER_BATCH = 32
RETURN_BATCH = 256
WINDOW_BATCH = 64
BLOCK = 1 << 16
FIRST_BLOCK = 1 << 10
MILESTONES = (0.5, 0.9, 0.99)


class WalkError(RuntimeError):
    """A walk cannot complete (disconnected graph, periodic chain, step cap)."""


def _threads() -> int:
    env = os.environ.get("RIGWALK_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _map(fn, items, threads=None):
    threads = _threads() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _require_covers(g, start: int) -> None:
    reach = component_size(g, start)
    if reach < g.n:
        raise WalkError(
            f"graph is disconnected: only {reach} of {g.n} vertices reachable from {start}; "
            "a cover walk would never finish"
        )


# -- cover time -------------------------------------------------------------

def _blocks(rng):
    """Uniform blocks growing geometrically up to BLOCK; the stream is read
    sequentially, so results do not depend on the block sizes."""
    size = FIRST_BLOCK
    while True:
        yield rng.random(size)
        size = min(2 * size, BLOCK)


def cover_walk(g: IntersectionGraph, start: int, stream: RngStream, step_cap: int = STEP_CAP):
    """One cover walk from ``start``.

    Returns ``(steps, first_visits)`` where ``first_visits[v]`` is the step of
    the first visit to v (0 for the start).
    """
    _require_covers(g, start)
    first = np.full(g.n, -1, dtype=np.int64)
    first[start] = 0
    state = np.zeros(5, dtype=np.int64)
    state[K.CUR] = start
    state[K.REMAINING] = g.n - 1
    for u in _blocks(stream.generator()):
        status = K.cover_single(g.indptr, g.indices, u, state, first, step_cap)
        if status == 1:
            return int(state[K.STEPS]), first
        if status < 0:
            raise WalkError(f"step cap {step_cap} reached with {state[K.REMAINING]} vertices unvisited")


def _cover_batch(g, start: int, trials: int, stream: RngStream, step_cap: int = STEP_CAP):
    targets = np.array([max(1, math.ceil(f * g.n)) for f in MILESTONES], dtype=np.int64)
    steps = np.zeros(trials, dtype=np.int64)
    ms = np.zeros((trials, targets.size), dtype=np.int64)
    visited = np.zeros(g.n, dtype=np.bool_)
    state = np.zeros(5, dtype=np.int64)
    state[K.REMAINING] = -1
    for u in _blocks(stream.generator()):
        status = K.cover_batch(g.indptr, g.indices, start, u, state, visited, steps, targets, ms, step_cap)
        if status == 1:
            return steps, ms
        if status < 0:
            raise WalkError(f"step cap {step_cap} reached from start {start}")


@dataclass
class WalkStats:
    start: int
    trials: int
    mean_cover_steps: float
    stderr: float
    total_steps: int = 0
    per_trial_steps: list | None = None
    first_visit_quantiles: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "start": self.start,
            "trials": self.trials,
            "mean": self.mean_cover_steps,
            "stderr": self.stderr,
            "total_steps": self.total_steps,
            "first_visit_quantiles": self.first_visit_quantiles,
        }
        if self.per_trial_steps is not None:
            d["per_trial_steps"] = self.per_trial_steps
        return d


def _summarise(start: int, steps: list[int], ms_rows: np.ndarray, keep: bool) -> WalkStats:
    n_t = len(steps)
    total = sum(steps)
    total_sq = sum(s * s for s in steps)
    mean = Fraction(total, n_t)
    if n_t > 1:
        var = Fraction(n_t * total_sq - total * total, n_t * (n_t - 1))
        stderr = math.sqrt(var / n_t)
    else:
        stderr = math.nan
    quant = {}
    for j, f in enumerate(MILESTONES):
        quant[str(f)] = float(Fraction(int(ms_rows[:, j].sum()), n_t))
    return WalkStats(
        start=int(start),
        trials=n_t,
        mean_cover_steps=float(mean),
        stderr=stderr,
        total_steps=total,
        per_trial_steps=list(steps) if keep else None,
        first_visit_quantiles=quant,
    )


@dataclass
class CoverEstimate:
    per_start: list
    c_empirical: float
    argmax_start: int | None
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "starts": [s.start for s in self.per_start],
            "per_start": [s.to_dict() for s in self.per_start],
            "c_empirical": self.c_empirical,
            "argmax_start": self.argmax_start,
            "error": self.error,
        }


def default_starts(g, master: int = 0, k_random: int = 4) -> list[int]:
    """Min-degree vertex, max-degree vertex, then ``k_random`` uniform picks."""
    deg = g.degrees
    picks = [int(np.argmin(deg)), int(np.argmax(deg))]
    rng = RngStream(master, 0, "starts").generator()
    picks += [int(v) for v in rng.integers(0, g.n, size=k_random)]
    return list(dict.fromkeys(picks))


def estimate_cover_time(
    g: IntersectionGraph,
    starts=None,
    trials_per_start: int = 50,
    master: int = 0,
    k_random: int = 4,
    keep_trials: bool = False,
    threads: int | None = None,
) -> CoverEstimate:
    """Mean cover steps from each start; C is the max over starts.

    Trials from start v, batch b use stream ``(master, v << 32 | b, "cover")``.
    """
    if trials_per_start <= 0:
        return CoverEstimate([], math.nan, None, error="no trials requested")
    starts = default_starts(g, master, k_random) if starts is None else [int(s) for s in starts]
    for s in starts:
        _require_covers(g, s)
    jobs = []
    for s in starts:
        for b in range(0, trials_per_start, COVER_BATCH):
            jobs.append((s, b // COVER_BATCH, min(COVER_BATCH, trials_per_start - b)))

    def run(job):
        s, b, size = job
        return _cover_batch(g, s, size, RngStream(master, (s << 32) | b, "cover"))

    results = _map(run, jobs, threads)
    per_start = []
    for s in starts:
        chunks = [r for (js, _, _), r in zip(jobs, results) if js == s]
        steps = [int(x) for st, _ in chunks for x in st]
        ms = np.concatenate([m for _, m in chunks])
        per_start.append(_summarise(s, steps, ms, keep_trials))
    best = max(per_start, key=lambda w: w.mean_cover_steps)
    return CoverEstimate(per_start, best.mean_cover_steps, best.start)


def exact_cover_time(g: IntersectionGraph, start: int) -> float:
    """Expected cover time from ``start`` by dynamic programming over
    (visited set, position) states, for n <= 12.

    Sets are processed from large to small; within a set the expected
    remaining time solves a linear system whose right-hand side couples to
    already-solved supersets.
    """
    n = g.n
    if n > EXACT_MAX_N:
        raise CapacityError(f"exact cover time supports n <= {EXACT_MAX_N}, got {n}")
    _require_covers(g, start)
    if n == 1:
        return 0.0
    adj = [g.neighbors(v).tolist() for v in range(n)]
    deg = [len(a) for a in adj]
    full = (1 << n) - 1
    E = np.zeros((1 << n, n))
    others = [v for v in range(n) if v != start]
    masks = []
    for sub in range(1 << (n - 1)):
        mask = 1 << start
        for j, v in enumerate(others):
            if sub >> j & 1:
                mask |= 1 << v
        masks.append(mask)
    masks.sort(key=lambda mk: -bin(mk).count("1"))
    for mask in masks:
        if mask == full:
            continue
        members = [v for v in range(n) if mask >> v & 1]
        pos = {v: i for i, v in enumerate(members)}
        M = np.eye(len(members))
        rhs = np.ones(len(members))
        for i, v in enumerate(members):
            w = 1.0 / deg[v]
            for u in adj[v]:
                if mask >> u & 1:
                    M[i, pos[u]] -= w
                else:
                    rhs[i] += w * E[mask | (1 << u), u]
        E[mask, members] = np.linalg.solve(M, rhs)
    return float(E[1 << start, start])


def exact_cover_time_all(g: IntersectionGraph) -> float:
    """Exact C(G): max over all starts."""
    return max(exact_cover_time(g, s) for s in range(g.n))


# -- returns ----------------------------------------------------------------

def _transition(g) -> sp.csr_matrix:
    deg = np.diff(g.indptr).astype(np.float64)
    inv = np.divide(1.0, deg, out=np.zeros_like(deg), where=deg > 0)
    data = np.repeat(inv, np.diff(g.indptr))
    return sp.csr_matrix((data, g.indices, g.indptr), shape=(g.n, g.n))


def exact_return_series(g, v: int, T: int) -> np.ndarray:
    """``r[j] = Pr{walk from v is at v at step j}`` for j = 0..T-1."""
    P = _transition(g)
    PT = P.T.tocsr()
    x = np.zeros(g.n)
    x[v] = 1.0
    r = np.empty(T)
    for j in range(T):
        r[j] = x[v]
        x = PT @ x
    return r


@dataclass(frozen=True)
class ReturnStats:
    vertex: int
    T: int
    trials: int
    pbar_v: float
    pbar_stderr: float
    R_T1: float
    R_T1_mc: float
    R_T1_mc_stderr: float
    R_T1_exact: float | None
    pi_v: float
    p_v: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def return_stats(
    g, v: int, T: int, trials: int = 10_000, master: int = 0, exact: bool | None = None
) -> ReturnStats:
    """First-return probability within T-1 steps and R_{T,v}(1).

    ``pbar_v`` estimates Pr{τ_v <= T-1}; ``R_T1_mc`` is one plus the mean
    number of returns in steps 1..T-1.  For n <= 2000 (or ``exact=True``)
    R_{T,v}(1) is also summed exactly from transition-matrix powers and that
    value feeds p_v = π_v / R_{T,v}(1).
    """
    if T < 2:
        raise ParameterError("T must be >= 2")
    if trials < 2:
        raise ParameterError("need at least two trials")
    if exact is None:
        exact = g.n <= EXACT_RETURN_MAX_N
    jobs = [(b, min(RETURN_BATCH, trials - b * RETURN_BATCH)) for b in range(math.ceil(trials / RETURN_BATCH))]

    def run(job):
        b, size = job
        u = RngStream(master, (int(v) << 32) | b, "returns").generator().random((size, T - 1))
        return K.return_counts(g.indptr, g.indices, int(v), u)

    counts = np.concatenate([c for c, _ in _map(run, jobs)])
    hit = counts > 0
    pbar = float(hit.mean())
    R_mc = 1.0 + float(counts.mean())
    R_mc_se = float(counts.std(ddof=1) / math.sqrt(trials))
    R_exact = float(exact_return_series(g, v, T).sum()) if exact else None
    R = R_exact if R_exact is not None else R_mc
    pi_v = np.diff(g.indptr)[v] / g.indices.size
    return ReturnStats(
        vertex=int(v),
        T=int(T),
        trials=int(trials),
        pbar_v=pbar,
        pbar_stderr=float(math.sqrt(pbar * (1 - pbar) / trials)),
        R_T1=R,
        R_T1_mc=R_mc,
        R_T1_mc_stderr=R_mc_se,
        R_T1_exact=R_exact,
        pi_v=float(pi_v),
        p_v=float(pi_v / R),
    )


# -- mixing -------------------------------------------------------------------

def mixing_time(g, eps: float | None = None, cap: int = 10_000, sample: int = 32, master: int = 0) -> int:
    """Smallest t with max_{u in U, v} |P_u^t(v) - π_v| <= eps.

    U is every vertex for n <= 2000, otherwise ``sample`` random vertices plus
    the minimum-degree vertex (then the result is an estimate).  Default
    eps = n^-3.
    """
    if g.n < 2 or component_size(g, 0) < g.n:
        raise WalkError("mixing time needs a connected graph")
    if is_bipartite(g):
        raise WalkError("graph is bipartite: the simple random walk is periodic and never mixes")
    eps = g.n ** -3.0 if eps is None else eps
    deg = np.diff(g.indptr).astype(np.float64)
    pi = deg / deg.sum()
    if g.n <= EXACT_RETURN_MAX_N:
        U = np.arange(g.n)
    else:
        rng = RngStream(master, 0, "mixing").generator()
        U = np.unique(np.concatenate([rng.choice(g.n, size=min(sample, g.n), replace=False), [np.argmin(deg)]]))
    PT = _transition(g).T.tocsr()
    X = np.zeros((g.n, U.size))
    X[U, np.arange(U.size)] = 1.0
    for t in range(cap + 1):
        if np.max(np.abs(X - pi[:, None])) <= eps:
            return t
        X = PT @ X
    raise WalkError(
        f"no convergence to within {eps:g} after {cap} steps: second-largest eigenvalue "
        "modulus of the transition matrix is too close to 1 (spectral gap too small)"
    )


def default_horizon(g, master: int = 0) -> tuple[int, bool]:
    """Estimator horizon T: mixing time at eps = n^-3, capped at 20 ceil(ln n).

    Returns ``(T, capped)``.
    """
    cap = 20 * math.ceil(math.log(g.n))
    try:
        t = mixing_time(g, cap=cap, master=master)
    except WalkError as exc:
        if "bipartite" in str(exc) or "connected" in str(exc):
            raise
        return cap, True
    return max(t, 2), False


# -- avoidance windows ---------------------------------------------------------

def window_first_hits(g, targets, T: int, t: int, trials: int, master: int = 0) -> np.ndarray:
    """``H[r, j]``: first step in [T, t] at which trial r visits ``targets[j]``.

    Each trial has its own stream (master, r, "window"): one uniform picks the
    start, then one per move, so trials with a longer t extend shorter ones.
    """
    targets = np.atleast_1d(np.asarray(targets, dtype=np.int64))
    jobs = [(b, min(WINDOW_BATCH, trials - b)) for b in range(0, trials, WINDOW_BATCH)]

    def run(job):
        b, size = job
        U = np.empty((size, t + 1))
        for r in range(size):
            U[r] = RngStream(master, b + r, "window").generator().random(t + 1)
        return K.window_first_hits(g.indptr, g.indices, targets, int(T), U)

    return np.concatenate(_map(run, jobs)) if jobs else np.zeros((0, targets.size), dtype=np.int64)


def unvisit_probability(g, v, T: int, t: int, trials: int = 1000, master: int = 0):
    """Fraction of walks from a uniform start that avoid v during steps T..t.

    ``v`` may be a vertex or an array of vertices (then an array is returned).
    """
    scalar = np.ndim(v) == 0
    vs = np.atleast_1d(np.asarray(v, dtype=np.int64))
    if t < T:
        out = np.ones(vs.size)
    else:
        H = window_first_hits(g, vs, T, t, trials, master)
        out = (H > t).mean(axis=0)
    return float(out[0]) if scalar else out


def joint_unvisit_probability(g, x: int, y: int, T: int, t: int, trials: int = 1000, master: int = 0) -> float:
    """Fraction of walks avoiding both x and y during steps T..t."""
    if t < T:
        return 1.0
    H = window_first_hits(g, [x, y], T, t, trials, master)
    return float(((H[:, 0] > t) & (H[:, 1] > t)).mean())


def unvisit_prediction(p_v: float, t: int) -> float:
    """(1 + p_v)^(-t)."""
    return math.exp(-t * math.log1p(p_v))


# -- merged vertices ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MergedGraph:
    """``base`` with x and y identified into one vertex ϰ.

    ``graph`` has n - 1 vertices: y is removed and ids above y shift down by
    one.  ϰ has neighbour multiset N(x) ∪ N(y) and sits at id ``kappa``.
    """

    base: IntersectionGraph
    x: int
    y: int
    distance: float
    graph: IntersectionGraph

    @property
    def kappa(self) -> int:
        return self.x - (self.x > self.y)

    def relabel(self, v: int) -> int:
        """Id in ``graph`` of base vertex v (y maps to ϰ)."""
        if v == self.y:
            return self.kappa
        return v - (v > self.y)

    @property
    def degree(self) -> int:
        return self.graph.degree(self.kappa)


def merge_vertices(g: IntersectionGraph, x: int, y: int, min_dist: int = 20) -> MergedGraph:
    if min_dist < 3:
        raise ParameterError("min_dist must be >= 3 so N(x) and N(y) are disjoint")
    d = bfs_distance(g, x, y, cap=min_dist)
    if d < min_dist:
        raise ParameterError(f"dist({x}, {y}) = {d} < {min_dist}")
    new_id = np.arange(g.n) - (np.arange(g.n) > y)
    new_id[y] = new_id[x]
    adj = [new_id[g.neighbors(v)] for v in range(g.n)]
    adj[x] = np.sort(np.concatenate([adj[x], adj[y]]))
    adj = [np.sort(a) for v, a in enumerate(adj) if v != y]
    indptr = np.zeros(g.n, dtype=np.int64)
    np.cumsum([a.size for a in adj], out=indptr[1:])
    merged = IntersectionGraph(g.n - 1, indptr, np.concatenate(adj).astype(np.int64))
    return MergedGraph(g, int(x), int(y), d, merged)


def far_pair(g, min_dist: int = 20, master: int = 0, tries: int = 64):
    """A pair (x, y) at distance >= ``min_dist``, x uniform among tried sources
    and y uniform among vertices that far from x; None when no try succeeds."""
    if component_size(g, 0) < g.n:
        raise WalkError("far_pair needs a connected graph")
    rng = RngStream(master, 0, "far-pair").generator()
    for _ in range(tries):
        x = int(rng.integers(g.n))
        # with cap = min_dist - 1 the unlabelled vertices are exactly the far ones
        far = np.flatnonzero(bfs_levels(g, x, cap=min_dist - 1) < 0)
        if far.size:
            return x, int(rng.choice(far))
    return None


def stationary_occupancy(g, steps: int, stream: RngStream, start: int = 0) -> np.ndarray:
    """Empirical visit frequencies over ``steps`` moves of one walk."""
    counts = np.zeros(g.n, dtype=np.int64)
    rng = stream.generator()
    cur = start
    done = 0
    while done < steps:
        size = min(BLOCK, steps - done)
        chunk, cur = K.occupancy(g.indptr, g.indices, cur, rng.random(size))
        counts += chunk
        done += size
    return counts / steps

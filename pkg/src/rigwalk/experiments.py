"""Multi-graph experiments: paired intersection-vs-ER cover times and the
exact cover-time corpus of small named graphs."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .genrand import RngStream, sample_er, sample_graph
from .model import (
    GraphParams,
    IntersectionGraph,
    complete_graph,
    cycle_graph,
    derive,
    path_graph,
    star_graph,
)
from .traversal import is_connected
from .walk import estimate_cover_time, exact_cover_time

__all__ = ["ComparisonRow", "compare_seed", "compare", "random_connected_graph", "oracle_corpus", "oracle_rows"]


@dataclass(frozen=True)
class ComparisonRow:
    seed: int
    cover_rig: float
    cover_er: float

    @property
    def winner(self) -> str:
        if math.isnan(self.cover_rig) or math.isnan(self.cover_er):
            return "undecided"
        if self.cover_rig > self.cover_er:
            return "rig"
        return "er" if self.cover_er > self.cover_rig else "tie"


def _cover(g: IntersectionGraph, trials: int, k_random: int, master: int) -> float:
    if not is_connected(g):
        return math.nan
    return estimate_cover_time(g, trials_per_start=trials, master=master, k_random=k_random).c_empirical


def compare_seed(params: GraphParams, seed: int, trials: int = 50, k_random: int = 4) -> ComparisonRow:
    """Cover time of G(n, m, p) and of G(n, q) with q = p_I, both sampled
    from ``seed``.  A disconnected sample gives NaN."""
    p = GraphParams(params.n, params.m, params.p, seed)
    q = derive(p)
    _, g = sample_graph(p)
    er = sample_er(p.n, q.pI, RngStream(seed, 0, "er"))
    return ComparisonRow(seed, _cover(g, trials, k_random, seed), _cover(er, trials, k_random, seed))


def compare(params: GraphParams, seeds, trials: int = 50, k_random: int = 4) -> list[ComparisonRow]:
    return [compare_seed(params, int(s), trials, k_random) for s in seeds]


def random_connected_graph(n: int, rng: np.random.Generator, density: float | None = None) -> IntersectionGraph:
    """Random recursive tree on n vertices plus each remaining pair
    with probability ``density`` (drawn uniformly in [0, 1) if omitted)."""
    if n < 2:
        raise ValueError("need n >= 2")
    density = rng.random() if density is None else density
    order = rng.permutation(n)
    edges = [(int(order[i]), int(order[rng.integers(i)])) for i in range(1, n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                edges.append((u, v))
    return IntersectionGraph.from_edges(n, edges)


def oracle_corpus(random_count: int = 20, seed: int = 0) -> list[tuple[str, IntersectionGraph, float | None]]:
    """Named small graphs with their closed-form cover time where one is
    known (max over starts), plus seeded random connected graphs, n <= 12."""
    out = []
    for n in range(2, 13):
        L = n - 1  # worst start is the middle: reach an end, then cross
        out.append((f"path{n}", path_graph(n), float(L * L + (L // 2) * (L - L // 2))))
    for n in range(3, 13):
        out.append((f"cycle{n}", cycle_graph(n), n * (n - 1) / 2))
    for n in range(2, 13):
        h = sum(1.0 / j for j in range(1, n))
        out.append((f"complete{n}", complete_graph(n), (n - 1) * h))
    for leaves in range(1, 12):
        h = sum(1.0 / j for j in range(1, leaves + 1))
        out.append((f"star{leaves}", star_graph(leaves), 2 * leaves * h - 1))
    rng = RngStream(seed, 0, "oracle-corpus").generator()
    for r in range(random_count):
        n = int(rng.integers(3, 13))
        out.append((f"random{r}", random_connected_graph(n, rng), None))
    return out


def oracle_rows(corpus=None) -> list[dict]:
    """Exact cover time per graph: max over starts, and from vertex 0."""
    corpus = oracle_corpus() if corpus is None else corpus
    rows = []
    for name, g, closed in corpus:
        per_start = [exact_cover_time(g, v) for v in range(g.n)]
        rows.append({
            "graph": name,
            "n": g.n,
            "edges": g.edge_count,
            "cover_from_0": per_start[0],
            "cover_max": max(per_start),
            "closed_form": closed,
        })
    return rows

"""Reproducible samplers for B(n, m, p), the induced G(n, m, p) and G(n, q).

Every sampler is a pure function of its inputs and an :class:`RngStream`.  A
stream is keyed by ``(master_seed, tag, index)`` through numpy's
``SeedSequence`` spawn keys and drives a counter-based Philox generator, so
trials can be farmed out in any order without changing results.
"""
from __future__ import annotations

import math
import warnings
import zlib
from dataclasses import dataclass

import numpy as np

from .model import (
    SEED_MASK,
    BipartiteGraph,
    GraphParams,
    IntersectionGraph,
    ParameterError,
)

__all__ = [
    "RngStream",
    "sample_bipartite",
    "intersection_of",
    "sample_graph",
    "sample_er",
    "large_clique_warning",
]


@dataclass(frozen=True)
class RngStream:
    master_seed: int
    stream_index: int = 0
    tag: str = "graph"

    def seed_sequence(self) -> np.random.SeedSequence:
        tag_key = zlib.crc32(self.tag.encode("utf-8"))
        return np.random.SeedSequence(
            int(self.master_seed) & SEED_MASK,
            spawn_key=(tag_key, int(self.stream_index) & SEED_MASK),
        )

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.seed_sequence()))

    def child(self, index: int, tag: str | None = None) -> "RngStream":
        return RngStream(self.master_seed, index, self.tag if tag is None else tag)


def _skip_positions(rng: np.random.Generator, total: int, prob: float) -> np.ndarray:
    """Sorted indices in ``range(total)`` kept independently with probability ``prob``.

    Geometric gaps between successes, so the cost is proportional to the
    number of successes rather than ``total``.
    """
    if total <= 0 or prob <= 0.0:
        return np.zeros(0, dtype=np.int64)
    if prob >= 1.0:
        return np.arange(total, dtype=np.int64)
    mean = total * prob
    chunk = int(mean + 6.0 * math.sqrt(mean) + 16)
    parts = []
    last = -1
    while True:
        gaps = rng.geometric(prob, size=chunk).astype(np.int64)
        pos = last + np.cumsum(gaps)
        cut = np.searchsorted(pos, total)
        parts.append(pos[:cut])
        if cut < pos.size:
            break
        last = int(pos[-1])
        chunk = max(16, chunk // 4)
    return np.concatenate(parts)


def sample_bipartite(params: GraphParams, stream: RngStream | None = None) -> BipartiteGraph:
    """Sample B(n, m, p).

    The (attribute, vertex) index space is scanned attribute by attribute with
    geometric skips over vertex indices, so each V(w) comes out sorted.
    """
    if stream is None:
        stream = RngStream(params.seed, 0, "bipartite")
    n, m = params.n, params.m
    pos = _skip_positions(stream.generator(), n * m, params.p)
    attrs = pos // n
    verts = pos % n
    attr_ptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(np.bincount(attrs, minlength=m), out=attr_ptr[1:])
    return BipartiteGraph.from_csr(params, attr_ptr, verts)


def large_clique_warning(b: BipartiteGraph) -> str | None:
    sizes = b.clique_sizes()
    biggest = int(sizes.max()) if sizes.size else 0
    limit = b.n ** (2.0 / 3.0)
    if biggest > limit:
        return f"largest attribute clique has {biggest} vertices (> n^(2/3) = {limit:.1f})"
    return None


def intersection_of(b: BipartiteGraph) -> IntersectionGraph:
    """Intersection graph: expand each V(w) into a clique and drop repeated pairs."""
    msg = large_clique_warning(b)
    if msg:
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    n = b.n
    sizes = b.clique_sizes()
    keys = []
    for s in np.unique(sizes[sizes >= 2]):
        s = int(s)
        ws = np.flatnonzero(sizes == s)
        members = b.attr_vertices[b.attr_ptr[ws][:, None] + np.arange(s)]
        iu, ju = np.triu_indices(s, 1)
        # members rows are sorted, so column iu < column ju elementwise
        keys.append((members[:, iu] * n + members[:, ju]).ravel())
    if keys:
        key = np.unique(np.concatenate(keys))
    else:
        key = np.zeros(0, dtype=np.int64)
    return IntersectionGraph.from_unique_pairs(n, key // n, key % n)


def sample_graph(params: GraphParams, stream: RngStream | None = None):
    """Convenience: ``(B, G)`` for one draw."""
    b = sample_bipartite(params, stream)
    return b, intersection_of(b)


def _pair_from_index(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map k in [0, C(n,2)) to the pair (j, i), j < i, with k = i(i-1)/2 + j."""
    i = np.floor((1.0 + np.sqrt(1.0 + 8.0 * k.astype(np.float64))) / 2.0).astype(np.int64)
    # float sqrt can be off by one for large k
    over = i * (i - 1) // 2 > k
    i[over] -= 1
    under = (i + 1) * i // 2 <= k
    i[under] += 1
    j = k - i * (i - 1) // 2
    return j, i


def sample_er(n: int, q: float, stream: RngStream) -> IntersectionGraph:
    """Erdős–Rényi G(n, q) by geometric skipping over the C(n, 2) pair indices."""
    if not 0.0 <= q <= 1.0:
        raise ParameterError(f"q must lie in [0, 1], got {q!r}")
    if n < 1:
        raise ParameterError("n must be positive")
    total = n * (n - 1) // 2
    k = _skip_positions(stream.generator(), total, q)
    lo, hi = _pair_from_index(k)
    return IntersectionGraph.from_unique_pairs(n, lo, hi)

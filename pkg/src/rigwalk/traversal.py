"""Breadth-first search helpers on CSR graphs."""
from __future__ import annotations

import math

import numpy as np
from numba import njit

__all__ = [
    "bfs_levels",
    "bfs_distance",
    "component_size",
    "is_connected",
    "is_bipartite",
]


@njit(cache=True, nogil=True)
def _bfs(indptr, indices, source, cap):
    n = indptr.size - 1
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    dist[source] = 0
    queue[0] = source
    head, tail = 0, 1
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v]
        if dv >= cap:
            continue
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if dist[u] < 0:
                dist[u] = dv + 1
                queue[tail] = u
                tail += 1
    return dist


def bfs_levels(g, source: int, cap: int | None = None) -> np.ndarray:
    """Distances from ``source``; ``-1`` for vertices beyond ``cap`` or unreachable."""
    c = np.iinfo(np.int64).max if cap is None else int(cap)
    return _bfs(g.indptr, g.indices, int(source), c)


def bfs_distance(g, x: int, y: int, cap: int | None = None) -> float:
    """Graph distance between x and y; ``math.inf`` if it exceeds ``cap``."""
    if x == y:
        return 0
    d = bfs_levels(g, x, cap)[y]
    return math.inf if d < 0 else int(d)


def component_size(g, source: int = 0) -> int:
    return int((bfs_levels(g, source) >= 0).sum())


def is_connected(g) -> bool:
    return g.n > 0 and component_size(g, 0) == g.n


@njit(cache=True, nogil=True)
def _two_colourable(indptr, indices):
    n = indptr.size - 1
    colour = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            v = queue[head]
            head += 1
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if colour[u] < 0:
                    colour[u] = 1 - colour[v]
                    queue[tail] = u
                    tail += 1
                elif colour[u] == colour[v]:
                    return False
    return True


def is_bipartite(g) -> bool:
    """True when g has no odd cycle."""
    return bool(_two_colourable(g.indptr, g.indices))

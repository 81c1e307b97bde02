"""Parameters, derived scalars and graph containers for G(n, m, p).

A binomial random intersection graph has ``n`` vertices and ``m`` attributes;
every (vertex, attribute) pair is linked independently with probability ``p``
and two vertices are adjacent when they share an attribute.  The user-facing
parameterisation is ``(n, c, np)`` where ``c`` is the multiplier above the
connectivity threshold ``m p (1 - (1 - p)^(n-1)) = c ln n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ParameterError",
    "CapacityError",
    "GraphParams",
    "DerivedQuantities",
    "BipartiteGraph",
    "IntersectionGraph",
    "derive_params",
    "derive",
    "edge_density",
    "attribute_share_probability",
    "dumps_bipartite",
    "loads_bipartite",
    "dumps_graph",
    "loads_graph",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "star_graph",
]

SEED_MASK = (1 << 64) - 1


class ParameterError(ValueError):
    """Raised for parameters outside the model's domain."""


class CapacityError(RuntimeError):
    """Raised when an exact routine is asked for an instance that is too large."""


@dataclass(frozen=True)
class GraphParams:
    n: int
    m: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ParameterError(f"n must be an integer >= 2, got {self.n!r}")
        if int(self.m) != self.m or self.m < 1:
            raise ParameterError(f"m must be an integer >= 1, got {self.m!r}")
        if not 0.0 < self.p < 1.0:
            raise ParameterError(f"p must lie in (0, 1), got {self.p!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "seed", int(self.seed) & SEED_MASK)


@dataclass(frozen=True)
class DerivedQuantities:
    """Scalars derived from (n, m, p).  ``c`` is the realised multiplier."""

    n: int
    m: int
    p: float
    c: float
    np: float
    d0: float
    d1: float
    delta: int
    kappa: float
    cbar: float
    pI: float
    pI_hat: float
    qB_hat: float
    i0: int
    k0: int
    eps_n: float

    @property
    def ln_n(self) -> float:
        return math.log(self.n)

    @property
    def lnln_n(self) -> float:
        return math.log(math.log(self.n))

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def attribute_share_probability(n: int, p: float) -> float:
    """``1 - (1 - p)^(n-1)``: chance an attribute of v is held by someone else."""
    return -math.expm1((n - 1) * math.log1p(-p))


def _kappa(np_: float) -> float:
    # np / (1 - e^{-np}), -> 1 as np -> 0
    if np_ == 0.0:
        return 1.0
    return np_ / -math.expm1(-np_)


def edge_density(params: GraphParams) -> tuple[float, float]:
    """Return ``(pI, pI_hat)``: exact edge density and its threshold approximation."""
    n, m, p = params.n, params.m, params.p
    pI = -math.expm1(m * math.log1p(-p * p))
    np_ = n * p
    pI_hat = _kappa(np_) * math.log(n) / n
    return pI, pI_hat


def derive(params: GraphParams) -> DerivedQuantities:
    """All scalars for given (n, m, p); ``c`` is recomputed from the integer m."""
    n, m, p = params.n, params.m, params.p
    ln_n = math.log(n)
    d0 = m * p * attribute_share_probability(n, p)
    c = d0 / ln_n
    np_ = n * p
    d1 = n * m * p * p
    delta = math.ceil(max(4.0 * d0, 12.0 * d1))
    kappa = _kappa(np_)
    pI, pI_hat = edge_density(params)
    # i0 needs c > 1 to be positive; clamp so sub-threshold graphs stay describable
    i0 = max(1, math.ceil((c - 1.0) * ln_n))
    growth = 10.0 * math.exp(np_) * math.expm1(np_)
    k0 = math.ceil(i0 * max(growth, 2.0))
    return DerivedQuantities(
        n=n,
        m=m,
        p=p,
        c=c,
        np=np_,
        d0=d0,
        d1=d1,
        delta=int(delta),
        kappa=kappa,
        cbar=kappa * c,
        pI=pI,
        pI_hat=pI_hat,
        qB_hat=ln_n / n,
        i0=int(i0),
        k0=int(k0),
        eps_n=math.log(ln_n) / ln_n,
    )


def derive_params(
    n: int, c_target: float, np_target: float, seed: int = 0
) -> tuple[GraphParams, DerivedQuantities]:
    """Choose (m, p) for a target threshold multiplier and mean clique size.

    ``p = np_target / n`` and ``m`` is the nearest integer to
    ``c_target ln n / (p (1 - (1-p)^(n-1)))``.  The returned ``c`` is the
    realised value for that integer ``m``.
    """
    if int(n) != n or n < 8:
        raise ParameterError(f"n must be an integer >= 8, got {n!r}")
    if not c_target > 1.0:
        raise ParameterError(
            f"c must exceed 1 (m p (1-(1-p)^(n-1)) = c ln n above threshold), got {c_target!r}"
        )
    if c_target > 50.0:
        raise ParameterError(f"c must be <= 50, got {c_target!r}")
    if not 0.0 < np_target <= 30.0:
        raise ParameterError(f"np must lie in (0, 30], got {np_target!r}")
    n = int(n)
    p = np_target / n
    if p >= 1.0:
        raise ParameterError(f"np/n = {p} is not a probability < 1")
    m = round(c_target * math.log(n) / (p * attribute_share_probability(n, p)))
    if m < 1:
        raise ParameterError("parameters give fewer than one attribute")
    params = GraphParams(n=n, m=m, p=p, seed=seed)
    return params, derive(params)


def _csr_from_lists(lists: Sequence[Iterable[int]]) -> tuple[np.ndarray, np.ndarray]:
    sizes = [len(x) for x in lists]
    indptr = np.zeros(len(lists) + 1, dtype=np.int64)
    np.cumsum(sizes, out=indptr[1:])
    if indptr[-1]:
        indices = np.concatenate([np.asarray(x, dtype=np.int64) for x in lists if len(x)])
    else:
        indices = np.zeros(0, dtype=np.int64)
    return indptr, indices


def _freeze(*arrays: np.ndarray) -> None:
    for a in arrays:
        a.flags.writeable = False


def _transpose_csr(indptr, indices, n_cols):
    """CSR of the transpose; column lists come out sorted."""
    rows = np.repeat(np.arange(len(indptr) - 1, dtype=np.int64), np.diff(indptr))
    order = np.lexsort((rows, indices))
    t_indices = rows[order]
    counts = np.bincount(indices, minlength=n_cols)
    t_indptr = np.zeros(n_cols + 1, dtype=np.int64)
    np.cumsum(counts, out=t_indptr[1:])
    return t_indptr, t_indices


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """Vertex/attribute incidence, stored in both directions as CSR arrays.

    ``attr_ptr``/``attr_vertices`` hold V(w) for each attribute w,
    ``vert_ptr``/``vert_attrs`` hold W(v) for each vertex v.  All lists are
    sorted and duplicate free.
    """

    params: GraphParams
    attr_ptr: np.ndarray
    attr_vertices: np.ndarray
    vert_ptr: np.ndarray = field(repr=False)
    vert_attrs: np.ndarray = field(repr=False)

    @classmethod
    def from_attribute_lists(cls, params: GraphParams, vertices_of_attr) -> "BipartiteGraph":
        lists = [sorted(set(int(v) for v in vs)) for vs in vertices_of_attr]
        if len(lists) != params.m:
            raise ParameterError(f"expected {params.m} attribute lists, got {len(lists)}")
        for vs in lists:
            if vs and (vs[0] < 0 or vs[-1] >= params.n):
                raise ParameterError("vertex id out of range")
        attr_ptr, attr_vertices = _csr_from_lists(lists)
        return cls.from_csr(params, attr_ptr, attr_vertices)

    @classmethod
    def from_csr(cls, params: GraphParams, attr_ptr, attr_vertices) -> "BipartiteGraph":
        attr_ptr = np.asarray(attr_ptr, dtype=np.int64)
        attr_vertices = np.asarray(attr_vertices, dtype=np.int64)
        vert_ptr, vert_attrs = _transpose_csr(attr_ptr, attr_vertices, params.n)
        _freeze(attr_ptr, attr_vertices, vert_ptr, vert_attrs)
        return cls(params, attr_ptr, attr_vertices, vert_ptr, vert_attrs)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def link_count(self) -> int:
        return int(self.attr_vertices.size)

    def vertices_of(self, w: int) -> np.ndarray:
        return self.attr_vertices[self.attr_ptr[w]:self.attr_ptr[w + 1]]

    def attributes_of(self, v: int) -> np.ndarray:
        return self.vert_attrs[self.vert_ptr[v]:self.vert_ptr[v + 1]]

    def clique_sizes(self) -> np.ndarray:
        return np.diff(self.attr_ptr)

    @property
    def vertices_of_attr(self) -> list[list[int]]:
        return [self.vertices_of(w).tolist() for w in range(self.m)]

    @property
    def attr_of_vertex(self) -> list[list[int]]:
        return [self.attributes_of(v).tolist() for v in range(self.n)]


@dataclass(frozen=True, eq=False)
class IntersectionGraph:
    """Simple undirected graph in CSR form with sorted neighbour lists."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        _freeze(self.indptr, self.indices)

    @classmethod
    def from_edges(cls, n: int, edges) -> "IntersectionGraph":
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        e = e.reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ParameterError("vertex id out of range")
        e = e[e[:, 0] != e[:, 1]]
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        key = np.unique(lo * n + hi)
        return cls.from_unique_pairs(n, key // n, key % n)

    @classmethod
    def from_unique_pairs(cls, n: int, lo: np.ndarray, hi: np.ndarray) -> "IntersectionGraph":
        """Build from distinct unordered pairs with ``lo < hi``."""
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        indices = np.ascontiguousarray(dst[order], dtype=np.int64)
        counts = np.bincount(src, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(int(n), indptr, indices)

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Iterable[int]]) -> "IntersectionGraph":
        edges = [(v, u) for v, nbrs in enumerate(adjacency) for u in nbrs]
        g = cls.from_edges(len(adjacency), edges)
        for v, nbrs in enumerate(adjacency):
            if set(nbrs) != set(g.neighbors(v).tolist()):
                raise ParameterError(f"adjacency is not symmetric at vertex {v}")
        return g

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def edge_count(self) -> int:
        return int(self.indices.size // 2)

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self.n)]

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def edges(self) -> np.ndarray:
        """Edges as an (E, 2) array with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def to_scipy(self):
        import scipy.sparse as sp

        data = np.ones(self.indices.size, dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))


# -- named graphs, used as oracles and in the corpus ------------------------

def path_graph(n: int) -> IntersectionGraph:
    return IntersectionGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> IntersectionGraph:
    if n < 3:
        raise ParameterError("a cycle needs at least 3 vertices")
    return IntersectionGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> IntersectionGraph:
    return IntersectionGraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> IntersectionGraph:
    return IntersectionGraph.from_edges(leaves + 1, [(0, j) for j in range(1, leaves + 1)])


# -- text formats ------------------------------------------------------------

def dumps_bipartite(b: BipartiteGraph) -> str:
    """``rig-v1 n m p seed`` header, then ``w: v1 v2 ...`` for every non-empty V(w)."""
    prm = b.params
    out = [f"rig-v1 {prm.n} {prm.m} {prm.p!r} {prm.seed}"]
    sizes = b.clique_sizes()
    for w in np.flatnonzero(sizes):
        vs = b.vertices_of(int(w))
        out.append(f"{w}: " + " ".join(map(str, vs.tolist())))
    return "\n".join(out) + "\n"


def loads_bipartite(text: str) -> BipartiteGraph:
    lines = text.splitlines()
    if not lines:
        raise ParameterError("empty rig-v1 document")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "rig-v1":
        raise ParameterError(f"bad rig-v1 header: {lines[0]!r}")
    params = GraphParams(n=int(head[1]), m=int(head[2]), p=float(head[3]), seed=int(head[4]))
    lists: list[list[int]] = [[] for _ in range(params.m)]
    for line in lines[1:]:
        if not line.strip():
            continue
        w, _, rest = line.partition(":")
        lists[int(w)] = [int(v) for v in rest.split()]
    return BipartiteGraph.from_attribute_lists(params, lists)


def dumps_graph(g: IntersectionGraph) -> str:
    """``ig-v1 n`` header, then ``v: u1 u2 ...`` for every vertex."""
    out = [f"ig-v1 {g.n}"]
    for v in range(g.n):
        nb = g.neighbors(v)
        out.append(f"{v}:" + "".join(f" {u}" for u in nb.tolist()))
    return "\n".join(out) + "\n"


def loads_graph(text: str) -> IntersectionGraph:
    lines = text.splitlines()
    head = lines[0].split() if lines else []
    if len(head) != 2 or head[0] != "ig-v1":
        raise ParameterError(f"bad ig-v1 header: {lines[0] if lines else ''!r}")
    n = int(head[1])
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for line in lines[1:]:
        if not line.strip():
            continue
        v, _, rest = line.partition(":")
        adjacency[int(v)] = [int(u) for u in rest.split()]
    return IntersectionGraph.from_adjacency(adjacency)

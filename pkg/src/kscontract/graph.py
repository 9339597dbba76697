"""Weighted undirected graphs, their matrices, and a fundamental cycle basis."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidGraph, NotConnected

SPECTRAL_TOL = 1e-9
# connectivity test: lambda_2 must exceed this fraction of the mean edge weight
CONNECTIVITY_RTOL = 1e-8


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CycleBasis:
    """Fundamental cycles of a BFS spanning tree.

    ``cycles[k]`` is a closed vertex sequence ``(i0, ..., i_l = i0)``.
    ``matrix`` is the c x m cycle-edge incidence matrix: +1 where the cycle
    runs along an edge's canonical orientation, -1 against it.  The spanning
    tree itself is kept (``order``, ``parent``, ``parent_edge``) because the
    lift from edge differences back to phases walks it.
    """

    cycles: tuple[tuple[int, ...], ...]
    matrix: np.ndarray
    m: int
    order: tuple[int, ...]
    parent: tuple[int, ...]
    parent_edge: tuple[int, ...]
    tree_mask: np.ndarray
    cycle_edges: tuple[int, ...] = field(default=())

    @property
    def c(self) -> int:
        return len(self.cycles)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(cyc) - 1 for cyc in self.cycles)

    @cached_property
    def pinv(self) -> np.ndarray:
        """Moore-Penrose pseudoinverse of ``matrix`` (m x c)."""
        if self.c == 0:
            return _readonly(np.zeros((self.m, 0)))
        sol, *_ = np.linalg.lstsq(self.matrix.astype(float), np.eye(self.c), rcond=None)
        return _readonly(sol)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected connected graph with positive weights.

    Edges are stored as ``(i, j, w)`` with ``i < j``; the edge is oriented
    from ``i`` (source) to ``j``.  Construction validates the graph, including
    connectivity.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        n = int(self.n)
        if n < 2:
            raise InvalidGraph(f"need at least 2 vertices, got {n}")
        canon = []
        seen = set()
        for edge in self.edges:
            if len(edge) != 3:
                raise InvalidGraph(f"edge must be (i, j, w), got {edge!r}")
            i, j, w = int(edge[0]), int(edge[1]), float(edge[2])
            if i == j:
                raise InvalidGraph(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidGraph(f"edge ({i}, {j}) out of range for n={n}")
            if not (np.isfinite(w) and w > 0):
                raise InvalidGraph(f"edge ({i}, {j}) has non-positive weight {w}")
            if i > j:
                i, j = j, i
            if (i, j) in seen:
                raise InvalidGraph(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
            canon.append((i, j, w))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(canon))
        if not canon:
            raise NotConnected("graph has no edges")
        lam2 = self.lambda2
        if lam2 <= CONNECTIVITY_RTOL * float(np.mean(self.weights)):
            raise NotConnected(f"graph is disconnected (lambda_2 = {lam2:.3e})")

    @classmethod
    def from_edges(cls, n: int, edges) -> WeightedGraph:
        """Build from ``(i, j)`` or ``(i, j, w)`` tuples; missing weights are 1."""
        return cls(n, tuple((e[0], e[1], e[2] if len(e) > 2 else 1.0) for e in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def src(self) -> np.ndarray:
        return _readonly(np.array([e[0] for e in self.edges], dtype=np.int64))

    @cached_property
    def dst(self) -> np.ndarray:
        return _readonly(np.array([e[1] for e in self.edges], dtype=np.int64))

    @cached_property
    def weights(self) -> np.ndarray:
        return _readonly(np.array([e[2] for e in self.edges], dtype=np.float64))

    @cached_property
    def incidence(self) -> np.ndarray:
        B = np.zeros((self.n, self.m))
        cols = np.arange(self.m)
        B[self.src, cols] = 1.0
        B[self.dst, cols] = -1.0
        return _readonly(B)

    @cached_property
    def laplacian(self) -> np.ndarray:
        B = self.incidence
        return _readonly((B * self.weights) @ B.T)

    @cached_property
    def laplacian_spectrum(self) -> np.ndarray:
        return _readonly(np.linalg.eigvalsh(self.laplacian))

    @property
    def lambda2(self) -> float:
        return float(self.laplacian_spectrum[1])

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.bincount(self.src, weights=self.weights, minlength=self.n)
        deg += np.bincount(self.dst, weights=self.weights, minlength=self.n)
        return _readonly(deg)

    @property
    def d_max(self) -> float:
        return float(self.degrees.max())

    @cached_property
    def neighbors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, sorted ``(neighbor, edge index)`` pairs."""
        adj = [[] for _ in range(self.n)]
        for e, (i, j, _) in enumerate(self.edges):
            adj[i].append((j, e))
            adj[j].append((i, e))
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def basis(self) -> CycleBasis:
        return _build_cycle_basis(self)

    def scaled(self, alpha: float) -> WeightedGraph:
        return WeightedGraph(self.n, tuple((i, j, alpha * w) for i, j, w in self.edges))

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [{"i": i, "j": j, "w": w} for i, j, w in self.edges]}

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


def incidence_matrix(g: WeightedGraph) -> np.ndarray:
    """n x m incidence matrix, +1 at the lower-index endpoint of each edge."""
    return g.incidence


def laplacian(g: WeightedGraph) -> np.ndarray:
    return g.laplacian


def algebraic_connectivity(g: WeightedGraph) -> float:
    """Second-smallest Laplacian eigenvalue, from a dense symmetric eigensolve."""
    return g.lambda2


def max_weighted_degree(g: WeightedGraph) -> float:
    return g.d_max


def cycle_basis(g: WeightedGraph) -> CycleBasis:
    return g.basis


def _build_cycle_basis(g: WeightedGraph) -> CycleBasis:
    n = g.n
    parent = [-1] * n
    parent_edge = [-1] * n
    depth = [0] * n
    visited = [False] * n
    visited[0] = True
    order = []
    tree = np.zeros(g.m, dtype=bool)
    queue = deque([0])
    while queue:
        v = queue.popleft()
        order.append(v)
        for nb, e in g.neighbors[v]:
            if not visited[nb]:
                visited[nb] = True
                parent[nb] = v
                parent_edge[nb] = e
                depth[nb] = depth[v] + 1
                tree[e] = True
                queue.append(nb)

    cycles = []
    cycle_edges = []
    rows = []
    for e, (i, j, _) in enumerate(g.edges):
        if tree[e]:
            continue
        # tree path j -> i through the lowest common ancestor
        a, b = j, i
        up_a, up_b = [a], [b]
        while a != b:
            if depth[a] >= depth[b]:
                a = parent[a]
                up_a.append(a)
            else:
                b = parent[b]
                up_b.append(b)
        path = up_a + up_b[-2::-1]  # j ... lca ... i
        seq = tuple(path) + (j,)  # then edge i -> j closes the cycle
        row = np.zeros(g.m, dtype=np.int64)
        for k in range(len(seq) - 1):
            p, q = seq[k], seq[k + 1]
            idx = _edge_index(g, p, q)
            row[idx] = 1 if p < q else -1
        cycles.append(seq)
        cycle_edges.append(e)
        rows.append(row)

    matrix = np.array(rows, dtype=np.int64).reshape(len(rows), g.m)
    return CycleBasis(
        cycles=tuple(cycles),
        matrix=_readonly(matrix),
        m=g.m,
        order=tuple(order),
        parent=tuple(parent),
        parent_edge=tuple(parent_edge),
        tree_mask=_readonly(tree),
        cycle_edges=tuple(cycle_edges),
    )


def _edge_index(g: WeightedGraph, p: int, q: int) -> int:
    for nb, e in g.neighbors[p]:
        if nb == q:
            return e
    raise KeyError((p, q))


# --- standard test graphs -------------------------------------------------


def complete_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    return WeightedGraph(n, tuple((i, j, weight) for i in range(n) for j in range(i + 1, n)))


def ring_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    """Cycle 0 - 1 - ... - (n-1) - 0."""
    return WeightedGraph(n, tuple((i, (i + 1) % n, weight) for i in range(n)))


def path_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    return WeightedGraph(n, tuple((i, i + 1, weight) for i in range(n - 1)))


def star_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    return WeightedGraph(n, tuple((0, i, weight) for i in range(1, n)))


def double_ring_graph(k: int = 7, weight: float = 1.0) -> WeightedGraph:
    """Two k-cycles sharing vertex 0; 2k - 1 vertices and two independent cycles.

    Ring A is 0 - 1 - ... - (k-1) - 0, ring B is 0 - k - ... - (2k-2) - 0.
    With k = 7 this is the 13-vertex graph used for two-parameter scans.
    """
    a = [(i, (i + 1) % k, weight) for i in range(k)]
    ring_b = [0] + list(range(k, 2 * k - 1))
    b = [(ring_b[i], ring_b[(i + 1) % k], weight) for i in range(k)]
    return WeightedGraph(2 * k - 1, tuple(a + b))


def random_connected_graph(
    n: int,
    p: float,
    rng: np.random.Generator,
    weight_range: tuple[float, float] = (0.5, 2.0),
) -> WeightedGraph:
    """Random spanning tree plus independent extra edges with probability ``p``."""
    perm = rng.permutation(n)
    pairs = set()
    for k in range(1, n):
        a, b = int(perm[k]), int(perm[rng.integers(k)])
        pairs.add((min(a, b), max(a, b)))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in pairs and rng.random() < p:
                pairs.add((i, j))
    lo, hi = weight_range
    edges = tuple((i, j, float(rng.uniform(lo, hi))) for i, j in sorted(pairs))
    return WeightedGraph(n, edges)

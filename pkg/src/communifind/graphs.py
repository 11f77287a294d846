"""Undirected graph container, random-graph generators, and edge-list IO.

Graphs are simple (no self-loops, no duplicate edges), undirected and
unweighted, with dense 0-based node labels.  The adjacency structure is kept
in compressed sparse rows with each neighbor list sorted ascending, which
gives deterministic iteration order everywhere downstream.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence, TextIO

import numpy as np

from .rng import SeededRng

__all__ = [
    "Graph",
    "GraphGenSpec",
    "TargetSpec",
    "EdgeListParseError",
    "generate",
    "gen_erdos_renyi",
    "gen_barabasi_albert",
    "gen_watts_strogatz",
    "canonical_sparse_target",
    "clique",
    "density",
    "is_connected",
    "read_edge_list",
    "write_edge_list",
]

Model = Literal["er", "ba", "sw"]


# =====================================================================
# Graph container
# =====================================================================


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph in CSR form.

    ``indptr``/``indices`` hold both directions of every edge, with each
    row's neighbor list sorted ascending; ``edge_count`` counts undirected
    edges once.
    """

    n: int
    edge_count: int
    indptr: np.ndarray
    indices: np.ndarray

    # -------------------------------------------------------------- build

    @staticmethod
    def from_pairs(
        n: int,
        pairs: Iterable[tuple[int, int]] | np.ndarray,
        *,
        collapse_duplicates: bool = False,
    ) -> "Graph":
        """Build a graph from (u, v) pairs given in either orientation.

        Duplicate pairs (after canonicalization) raise unless
        ``collapse_duplicates`` is set, in which case they merge silently.
        """
        arr = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs, dtype=np.int64)
        if arr.size == 0:
            return Graph._from_codes(n, np.empty(0, dtype=np.int64))
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("edge pairs must form an (E, 2) array")
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError(f"edge endpoint out of range for n={n}")
        u = np.minimum(arr[:, 0], arr[:, 1])
        v = np.maximum(arr[:, 0], arr[:, 1])
        if np.any(u == v):
            raise ValueError("self-loops are not allowed")
        codes = np.unique(u * np.int64(n) + v)
        if not collapse_duplicates and codes.size != arr.shape[0]:
            raise ValueError("duplicate edges are not allowed")
        return Graph._from_codes(n, codes)

    @staticmethod
    def _from_codes(n: int, codes: np.ndarray) -> "Graph":
        """Build from sorted, unique canonical edge codes ``u * n + v`` (u < v)."""
        if n < 0:
            raise ValueError("node count must be nonnegative")
        us = codes // n
        vs = codes % n
        rows = np.concatenate([us, vs])
        cols = np.concatenate([vs, us])
        order = np.lexsort((cols, rows))
        indices = np.ascontiguousarray(cols[order])
        degrees = np.bincount(rows, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=indptr[1:])
        indices.flags.writeable = False
        indptr.flags.writeable = False
        return Graph(n=n, edge_count=int(codes.size), indptr=indptr, indices=indices)

    # -------------------------------------------------------------- views

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, u: int) -> int:
        return int(self.indptr[u + 1] - self.indptr[u])

    def neighbors(self, u: int) -> np.ndarray:
        """Sorted neighbor list of ``u`` (read-only view)."""
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return i < row.size and row[i] == v

    def edge_codes(self) -> np.ndarray:
        """Canonical codes ``u * n + v`` (u < v), ascending."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        mask = self.indices > rows
        return rows[mask] * np.int64(self.n) + self.indices[mask]

    def edge_pairs(self) -> np.ndarray:
        """All undirected edges as an (E, 2) array with u < v, lexicographic."""
        codes = self.edge_codes()
        return np.column_stack([codes // self.n, codes % self.n])

    def to_dense(self) -> np.ndarray:
        """Dense float adjacency matrix."""
        a = np.zeros((self.n, self.n))
        rows = np.repeat(np.arange(self.n), self.degrees)
        a[rows, self.indices] = 1.0
        return a

    @property
    def mean_degree(self) -> float:
        return 2.0 * self.edge_count / self.n if self.n else 0.0

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.edge_count == other.edge_count
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


def density(g: Graph) -> float:
    """Fraction of realized node pairs, 2E / (n (n - 1))."""
    if g.n < 2:
        raise ValueError("density requires at least two nodes")
    return 2.0 * g.edge_count / (g.n * (g.n - 1))


def is_connected(g: Graph) -> bool:
    """Breadth-first reachability check from node 0."""
    if g.n == 0:
        return True
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if not seen[v]:
                seen[v] = True
                queue.append(int(v))
    return bool(seen.all())


# =====================================================================
# Generator specifications
# =====================================================================


@dataclass(frozen=True)
class GraphGenSpec:
    """Parameters of one random background graph.

    Exactly one family parameter must be set for the chosen model:
    ``avg_degree`` for Erdős–Rényi ("er"), ``m`` for preferential attachment
    ("ba"), ``k`` for the rewired ring lattice ("sw", with rewiring
    probability ``beta``).
    """

    model: Model
    n: int
    avg_degree: float | None = None
    m: int | None = None
    k: int | None = None
    beta: float = 0.1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.model not in ("er", "ba", "sw"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.n < 2:
            raise ValueError(f"need n >= 2, got n={self.n}")
        if self.model == "er":
            if self.avg_degree is None or self.m is not None or self.k is not None:
                raise ValueError("model 'er' takes avg_degree only")
            if not 0.0 <= self.avg_degree <= self.n - 1:
                raise ValueError(f"avg_degree must lie in [0, n-1], got {self.avg_degree}")
        elif self.model == "ba":
            if self.m is None or self.avg_degree is not None or self.k is not None:
                raise ValueError("model 'ba' takes m only")
            if not 1 <= self.m < self.n:
                raise ValueError(f"m must lie in [1, n), got {self.m}")
        else:  # sw
            if self.k is None or self.avg_degree is not None or self.m is not None:
                raise ValueError("model 'sw' takes k (and optional beta) only")
            if self.k % 2 != 0 or not 2 <= self.k < self.n:
                raise ValueError(f"k must be even with 2 <= k < n, got {self.k}")
            if not 0.0 <= self.beta <= 1.0:
                raise ValueError(f"beta must lie in [0, 1], got {self.beta}")

    def nominal_mean_degree(self) -> float:
        """Mean degree implied by the parameters (exact for 'ba' and 'sw')."""
        if self.model == "er":
            return float(self.avg_degree)
        if self.model == "ba":
            m = self.m
            edges = m * (m + 1) // 2 + m * (self.n - m - 1)
            return 2.0 * edges / self.n
        return float(self.k)


def generate(spec: GraphGenSpec) -> Graph:
    """Dispatch to the generator selected by ``spec.model``."""
    if spec.model == "er":
        return gen_erdos_renyi(spec)
    if spec.model == "ba":
        return gen_barabasi_albert(spec)
    return gen_watts_strogatz(spec)


def gen_erdos_renyi(spec: GraphGenSpec) -> Graph:
    """G(n, p) with p = avg_degree / (n - 1).

    Pairs are enumerated in lexicographic order and successes located by
    geometric gap-skipping, so the cost is O(n + E) rather than O(n^2).
    """
    if spec.model != "er":
        raise ValueError("gen_erdos_renyi requires an 'er' spec")
    n = spec.n
    p = spec.avg_degree / (n - 1)
    if p >= 1.0:
        us, vs = np.triu_indices(n, k=1)
        codes = us.astype(np.int64) * n + vs
        return Graph._from_codes(n, codes)
    if p <= 0.0:
        return Graph._from_codes(n, np.empty(0, dtype=np.int64))
    rng = SeededRng(spec.seed)
    us: list[int] = []
    vs: list[int] = []
    total = n * (n - 1) // 2
    pos = -1  # linear index into the lexicographic pair enumeration
    i = 0
    row_start = 0  # linear index of pair (i, i + 1)
    while True:
        pos += 1 + rng.geometric_skip(p)
        if pos >= total:
            break
        while pos - row_start >= n - 1 - i:
            row_start += n - 1 - i
            i += 1
        us.append(i)
        vs.append(i + 1 + (pos - row_start))
    codes = np.asarray(us, dtype=np.int64) * n + np.asarray(vs, dtype=np.int64)
    return Graph._from_codes(n, codes)  # lexicographic enumeration => already sorted


def gen_barabasi_albert(spec: GraphGenSpec) -> Graph:
    """Preferential attachment: seed clique on m + 1 nodes, then m edges per node.

    Each arriving node picks m distinct targets with probability proportional
    to current degree (repeated-node list sampling with rejection of
    duplicates).  The result is connected with exactly
    C(m+1, 2) + m (n - m - 1) edges.
    """
    if spec.model != "ba":
        raise ValueError("gen_barabasi_albert requires a 'ba' spec")
    n, m = spec.n, spec.m
    rng = SeededRng(spec.seed)
    pairs: list[tuple[int, int]] = [(a, b) for a in range(m + 1) for b in range(a + 1, m + 1)]
    # one entry per unit of degree; sampling an index uniformly is
    # degree-proportional sampling of the node stored there
    repeated: list[int] = [v for v in range(m + 1) for _ in range(m)]
    for u in range(m + 1, n):
        chosen: list[int] = []
        while len(chosen) < m:
            pick = repeated[rng.randrange(len(repeated))]
            if pick not in chosen:
                chosen.append(pick)
        for v in chosen:
            pairs.append((v, u))
            repeated.append(v)
        repeated.extend([u] * m)
    return Graph.from_pairs(n, pairs)


def gen_watts_strogatz(spec: GraphGenSpec) -> Graph:
    """Ring lattice with k/2 neighbors per side, each edge rewired with prob beta.

    Rewiring keeps the near endpoint and redraws the far one uniformly until
    it is neither the node itself nor an existing neighbor; a node already
    adjacent to everyone keeps its edge.  The edge count stays exactly n k / 2.
    """
    if spec.model != "sw":
        raise ValueError("gen_watts_strogatz requires an 'sw' spec")
    n, k, beta = spec.n, spec.k, spec.beta
    rng = SeededRng(spec.seed)
    adj: list[set[int]] = [set() for _ in range(n)]
    for u in range(n):
        for off in range(1, k // 2 + 1):
            v = (u + off) % n
            adj[u].add(v)
            adj[v].add(u)
    if beta > 0.0:
        for off in range(1, k // 2 + 1):
            for u in range(n):
                if rng.random() >= beta:
                    continue
                if len(adj[u]) >= n - 1:
                    continue  # no valid endpoint to rewire to
                old = (u + off) % n
                if old not in adj[u]:
                    continue  # this lattice edge was already rewired away
                while True:
                    w = rng.randrange(n)
                    if w != u and w not in adj[u]:
                        break
                adj[u].discard(old)
                adj[old].discard(u)
                adj[u].add(w)
                adj[w].add(u)
    pairs = [(u, v) for u in range(n) for v in sorted(adj[u]) if u < v]
    return Graph.from_pairs(n, pairs)


# =====================================================================
# Target sub-graphs
# =====================================================================


@dataclass(frozen=True)
class TargetSpec:
    """A small graph to hide: ``t`` nodes labelled 0..t-1 plus its edge set."""

    t: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.t < 2:
            raise ValueError(f"target needs at least two nodes, got t={self.t}")
        canon = []
        for u, v in self.edges:
            if u == v:
                raise ValueError("target edges may not be self-loops")
            if not (0 <= u < self.t and 0 <= v < self.t):
                raise ValueError(f"target edge ({u}, {v}) out of range for t={self.t}")
            canon.append((min(u, v), max(u, v)))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ValueError(f"duplicate target edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.t, dtype=np.int64)
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d

    def to_graph(self) -> Graph:
        return Graph.from_pairs(self.t, self.edges)


def clique(t: int) -> TargetSpec:
    """Complete graph on t nodes."""
    if t < 2:
        raise ValueError(f"clique needs t >= 2, got {t}")
    return TargetSpec(t, tuple((u, v) for u in range(t) for v in range(u + 1, t)))


_SPARSE_T = 20
_SPARSE_EDGES = 21
_SPARSE_MAX_DEGREE = 4


def canonical_sparse_target(seed: int = 0) -> TargetSpec:
    """Deterministic sparse target: 20 nodes, 21 edges, max degree exactly 4, connected.

    Construction is rejection sampling: a uniform random labelled tree
    (decoded from a random Prüfer sequence) capped at degree 4, plus two
    extra edges between non-adjacent nodes of degree < 4; attempts are
    discarded until the maximum degree is exactly 4.  Mean degree is
    2 * 21 / 20 = 2.1 by construction.
    """
    t = _SPARSE_T
    rng = SeededRng(seed)
    while True:
        seq = [rng.randrange(t) for _ in range(t - 2)]
        deg = [1] * t
        for x in seq:
            deg[x] += 1
        if max(deg) > _SPARSE_MAX_DEGREE:
            continue
        edges = _decode_pruefer(seq)
        for _ in range(_SPARSE_EDGES - (t - 1)):
            have = set(edges)
            candidates = [
                (u, v)
                for u in range(t)
                for v in range(u + 1, t)
                if deg[u] < _SPARSE_MAX_DEGREE and deg[v] < _SPARSE_MAX_DEGREE and (u, v) not in have
            ]
            u, v = candidates[rng.randrange(len(candidates))]
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
        if max(deg) == _SPARSE_MAX_DEGREE:
            return TargetSpec(t, tuple(edges))


def _decode_pruefer(seq: list[int]) -> list[tuple[int, int]]:
    """Standard Prüfer decoding; the tree spans 0..len(seq)+1."""
    t = len(seq) + 2
    deg = [1] * t
    for x in seq:
        deg[x] += 1
    edges = []
    for x in seq:
        leaf = min(v for v in range(t) if deg[v] == 1)
        edges.append((min(leaf, x), max(leaf, x)))
        deg[leaf] -= 1
        deg[x] -= 1
    a, b = [v for v in range(t) if deg[v] == 1]
    edges.append((a, b))
    return edges


# =====================================================================
# Edge-list IO
# =====================================================================


class EdgeListParseError(ValueError):
    """Malformed edge-list input; carries the offending 1-based line number."""

    def __init__(self, line_no: int, message: str) -> None:
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


_NODES_HEADER = "# nodes:"


def write_edge_list(g: Graph, out: TextIO) -> None:
    """Write one ``u v`` pair per line, preceded by a structured node-count header.

    The ``# nodes:`` header lets graphs with trailing isolated nodes (or no
    edges at all) survive a round trip; other ``#`` lines are free-form.
    """
    out.write(f"{_NODES_HEADER} {g.n}\n")
    out.write(f"# edges: {g.edge_count}\n")
    for u, v in g.edge_pairs():
        out.write(f"{u} {v}\n")


def read_edge_list(source: Iterable[str], *, num_nodes: int | None = None) -> Graph:
    """Parse an edge list: one ``u v`` pair per line, 0-based integer labels.

    Blank lines and ``#`` comments are skipped, except that a ``# nodes: N``
    header (as emitted by :func:`write_edge_list`) fixes the node count.  An
    explicit ``num_nodes`` argument overrides both the header and the
    max-label fallback.  Pairs are symmetrized; a repeated unordered pair,
    a self-loop, a non-integer token, or an out-of-range label is an error
    reported with its line number.
    """
    declared = num_nodes
    pairs: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    max_label = -1
    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if num_nodes is None and line.lower().startswith(_NODES_HEADER):
                tail = line[len(_NODES_HEADER) :].strip()
                try:
                    declared = int(tail)
                except ValueError:
                    raise EdgeListParseError(line_no, f"bad node-count header {line!r}") from None
                if declared < 0:
                    raise EdgeListParseError(line_no, "node count must be nonnegative")
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListParseError(line_no, f"expected two tokens, got {len(tokens)}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListParseError(line_no, f"non-integer node label in {line!r}") from None
        if u < 0 or v < 0:
            raise EdgeListParseError(line_no, "node labels must be nonnegative")
        if u == v:
            raise EdgeListParseError(line_no, f"self-loop at node {u}")
        pair = (min(u, v), max(u, v))
        if pair in seen:
            raise EdgeListParseError(line_no, f"duplicate edge {pair} (first on line {seen[pair]})")
        seen[pair] = line_no
        pairs.append(pair)
        max_label = max(max_label, pair[1])
    n = declared if declared is not None else max_label + 1
    if max_label >= n:
        bad = next(ln for (a, b), ln in seen.items() if b >= n)
        raise EdgeListParseError(bad, f"node label exceeds declared node count {n}")
    return Graph.from_pairs(n, pairs)

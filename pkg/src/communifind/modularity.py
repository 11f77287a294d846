"""Spectral modularity baseline for the same hidden-sub-graph task.

The modularity matrix B = A - d d^T / (2E) removes the degree-expected
connectivity; residual structure concentrates in a few eigenvectors.  Over a
window of background realizations the per-realization matrices are blended
with fixed coefficients, the top-r eigenvectors are scanned for the one with
the smallest L1 norm (localized eigenvectors are suspicious), and a 2-means
split of the node projections around that eigenvector's strongest node
separates candidate target nodes from the noise cloud.
"""

from __future__ import annotations

import dataclasses
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import Graph, TargetSpec, generate
from .identify import (
    Embedding,
    ExperimentConfig,
    PhaseSeconds,
    RunResult,
    apply_embedding,
    background_seed,
    draw_embedding,
    embedding_seed,
)

__all__ = [
    "ModularityMatrix",
    "FilterCoeffs",
    "EigenScan",
    "modularity_matrix",
    "temporal_filter",
    "eigen_l1_scores",
    "two_means_split",
    "baseline_candidates",
    "run_baseline_with_timings",
    "run_baseline",
]

_MODULARITY_MAX_NODES = 2048
_COEFF_SUM_TOL = 1e-9


@dataclass(frozen=True)
class ModularityMatrix:
    """Dense modularity matrix with the degree vector it was built from."""

    n: int
    matrix: np.ndarray
    degrees: np.ndarray


@dataclass(frozen=True)
class FilterCoeffs:
    """Blend weights over a window of realizations; must sum to one."""

    c: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.c) < 1:
            raise ValueError("need at least one coefficient")
        total = sum(self.c)
        if abs(total - 1.0) > _COEFF_SUM_TOL:
            raise ValueError(f"coefficients must sum to 1, got {total!r}")

    @staticmethod
    def uniform(window: int) -> "FilterCoeffs":
        if window < 1:
            raise ValueError("window must be >= 1")
        return FilterCoeffs(c=tuple(1.0 / window for _ in range(window)))

    def __len__(self) -> int:
        return len(self.c)


@dataclass(frozen=True)
class EigenScan:
    """Top-r eigenvector scan: L1 norms, the flagged (min-L1) eigenvector,
    the strongest node inside it, and the n x r node projection."""

    norms: np.ndarray
    flagged_index: int
    seed_node: int
    coords: np.ndarray
    eigenvalues: np.ndarray


def modularity_matrix(g: Graph) -> ModularityMatrix:
    """B = A - d d^T / (2E); rows sum to zero by construction."""
    if g.edge_count < 1:
        raise ValueError("modularity matrix needs at least one edge")
    if g.n > _MODULARITY_MAX_NODES:
        raise ValueError(
            f"dense modularity path is limited to n <= {_MODULARITY_MAX_NODES}, got n={g.n}"
        )
    d = g.degrees.astype(np.float64)
    b = g.to_dense() - np.outer(d, d) / (2.0 * g.edge_count)
    return ModularityMatrix(n=g.n, matrix=b, degrees=d)


def temporal_filter(mats: Sequence[ModularityMatrix], coeffs: FilterCoeffs) -> ModularityMatrix:
    """Coefficient blend of a window of modularity matrices.

    ``mats[l]`` is weighted by ``coeffs.c[l]`` (index 0 = most recent).  Row
    sums stay zero because each input's do; the degree vector is blended with
    the same weights.
    """
    if len(mats) != len(coeffs):
        raise ValueError(f"window size {len(mats)} != coefficient count {len(coeffs)}")
    n = mats[0].n
    for m in mats:
        if m.n != n:
            raise ValueError("all matrices in the window must share the node set")
    blended = np.zeros((n, n))
    degrees = np.zeros(n)
    for m, c in zip(mats, coeffs.c):
        blended += c * m.matrix
        degrees += c * m.degrees
    return ModularityMatrix(n=n, matrix=blended, degrees=degrees)


def eigen_l1_scores(b: ModularityMatrix, r: int = 10) -> EigenScan:
    """Scan the r leading eigenvectors for the most localized one.

    Eigenvectors are unit-L2, so the L1 norm ranges from 1 (a single spike)
    to sqrt(n) (fully delocalized); the minimum-L1 eigenvector is flagged
    and its largest-magnitude component names the seed anomalous node.
    """
    if not 1 <= r <= b.n:
        raise ValueError(f"r must lie in [1, {b.n}], got {r}")
    w, q = np.linalg.eigh(b.matrix)
    coords = q[:, ::-1][:, :r]  # descending eigenvalue order
    values = w[::-1][:r].copy()
    norms = np.abs(coords).sum(axis=0)
    flagged = int(np.argmin(norms))
    seed_node = int(np.argmax(np.abs(coords[:, flagged])))
    return EigenScan(
        norms=norms,
        flagged_index=flagged,
        seed_node=seed_node,
        coords=coords,
        eigenvalues=values,
    )


def two_means_split(coords: np.ndarray, seed_node: int, max_iter: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Two-cluster Lloyd split of node projections, seeded deterministically.

    Centroids start at the seed node's coordinates and the grand mean; ties
    in the distance comparison go to the seed cluster.  Returns
    (target_nodes, noise_nodes): the smaller cluster is the target, an exact
    size tie resolved to the cluster containing the seed node.  Degenerate
    input (all rows identical, or a cluster emptying out) is an error.
    """
    x = np.asarray(coords, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("coords must be an (n, r) array")
    n = x.shape[0]
    if not 0 <= seed_node < n:
        raise ValueError(f"seed node {seed_node} out of range")
    if np.all(x == x[0]):
        raise ValueError("cannot split: all node projections are identical")
    c_seed = x[seed_node].copy()
    c_noise = x.mean(axis=0)
    assign: np.ndarray | None = None
    for _ in range(max_iter):
        d_seed = ((x - c_seed) ** 2).sum(axis=1)
        d_noise = ((x - c_noise) ** 2).sum(axis=1)
        new_assign = d_noise < d_seed  # False (= seed cluster) wins ties
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        if assign.all() or not assign.any():
            raise ValueError("cannot split: one cluster is empty")
        c_seed = x[~assign].mean(axis=0)
        c_noise = x[assign].mean(axis=0)
    cluster_seed = np.flatnonzero(~assign)
    cluster_noise = np.flatnonzero(assign)
    if cluster_seed.size < cluster_noise.size:
        return cluster_seed, cluster_noise
    if cluster_noise.size < cluster_seed.size:
        return cluster_noise, cluster_seed
    if seed_node in cluster_seed:
        return cluster_seed, cluster_noise
    return cluster_noise, cluster_seed


def baseline_candidates(
    hosts: Sequence[Graph], coeffs: FilterCoeffs, r: int = 10
) -> np.ndarray:
    """Candidate target nodes from a window of embedded host graphs."""
    mats = [modularity_matrix(h) for h in hosts]
    blended = temporal_filter(mats, coeffs)
    scan = eigen_l1_scores(blended, r)
    target_nodes, _ = two_means_split(scan.coords, scan.seed_node)
    return np.sort(target_nodes).astype(np.int64)


def _baseline_single_run(
    cfg: ExperimentConfig, run_index: int, coeffs: FilterCoeffs, r: int
) -> tuple[RunResult, PhaseSeconds]:
    times = PhaseSeconds()
    embedding = draw_embedding(
        cfg.background.n, cfg.target.t, embedding_seed(cfg.base_seed, run_index)
    )
    hosts: list[Graph] = []
    t0 = time.perf_counter()
    for b in range(cfg.num_backgrounds):
        spec = dataclasses.replace(
            cfg.background, seed=background_seed(cfg.base_seed, run_index, b)
        )
        hosts.append(apply_embedding(generate(spec), cfg.target, embedding))
    t1 = time.perf_counter()
    candidates = baseline_candidates(hosts, coeffs, r)
    t2 = time.perf_counter()
    hits = int(np.isin(embedding.map, candidates).sum())
    rate = hits / cfg.target.t
    times.generation += t1 - t0
    times.scoring += t2 - t1
    times.selection += time.perf_counter() - t2
    return RunResult(embedding=embedding, candidates=candidates, hits=hits, rate=rate), times


def run_baseline_with_timings(
    cfg: ExperimentConfig,
    *,
    coeffs: FilterCoeffs | None = None,
    r: int = 10,
    jobs: int = 1,
) -> tuple[list[RunResult], PhaseSeconds]:
    """Run the modularity baseline under the same seeding scheme as the
    communicability pipeline, so per-run instances are directly comparable.

    ``cfg.num_backgrounds`` doubles as the filter window; ``coeffs`` defaults
    to the uniform blend.
    """
    if jobs < 1:
        raise ValueError(f"need jobs >= 1, got {jobs}")
    if coeffs is None:
        coeffs = FilterCoeffs.uniform(cfg.num_backgrounds)
    if len(coeffs) != cfg.num_backgrounds:
        raise ValueError("coefficient count must equal num_backgrounds")
    if jobs == 1 or cfg.runs == 1:
        outcomes = [_baseline_single_run(cfg, run, coeffs, r) for run in range(cfg.runs)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(
                pool.map(lambda run: _baseline_single_run(cfg, run, coeffs, r), range(cfg.runs))
            )
    results = [res for res, _ in outcomes]
    total = PhaseSeconds()
    for _, t in outcomes:
        total.generation += t.generation
        total.scoring += t.scoring
        total.selection += t.selection
    return results, total


def run_baseline(
    cfg: ExperimentConfig,
    *,
    coeffs: FilterCoeffs | None = None,
    r: int = 10,
    jobs: int = 1,
) -> list[RunResult]:
    results, _ = run_baseline_with_timings(cfg, coeffs=coeffs, r=r, jobs=jobs)
    return results

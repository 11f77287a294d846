"""Hide a target sub-graph in random backgrounds and try to find it again.

One experiment run draws a single random embedding of the target, overlays
it on ``num_backgrounds`` independently generated background graphs, sums
the per-node total-communicability scores across those realizations, and
selects the top-k nodes.  The identification rate is the fraction of target
nodes recovered.  Seeds are derived deterministically from the base seed and
the run index, so results are reproducible and independent of how runs are
scheduled across workers.
"""

from __future__ import annotations

import dataclasses
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .communicability import ScoreVector, accumulate, total_communicability
from .expm import KrylovParams
from .graphs import Graph, GraphGenSpec, TargetSpec, generate
from .rng import SeededRng, derive_seed

__all__ = [
    "Embedding",
    "ExperimentConfig",
    "RunResult",
    "PhaseSeconds",
    "RateSummary",
    "draw_embedding",
    "apply_embedding",
    "embed",
    "top_k",
    "identification_rate",
    "run_pipeline",
    "run_pipeline_with_timings",
    "summarize_rates",
    "run_seed",
    "embedding_seed",
    "background_seed",
]

_MASK64 = 0xFFFFFFFFFFFFFFFF
_EMBED_STREAM = 0
_BACKGROUND_STREAM = 1


# =====================================================================
# Embedding
# =====================================================================


@dataclass(frozen=True)
class Embedding:
    """Injective map from target node labels 0..t-1 to background node ids."""

    map: np.ndarray

    def __post_init__(self) -> None:
        # copy, so freezing never reaches back into a caller-owned array
        arr = np.array(self.map, dtype=np.int64, copy=True)
        if arr.ndim != 1:
            raise ValueError("embedding map must be one-dimensional")
        if np.unique(arr).size != arr.size:
            raise ValueError("embedding map must be injective")
        arr.flags.writeable = False
        object.__setattr__(self, "map", arr)

    @property
    def t(self) -> int:
        return self.map.size


def draw_embedding(n: int, t: int, seed: int) -> Embedding:
    """Uniform injective placement of t target labels onto n background nodes."""
    if t > n:
        raise ValueError(f"cannot embed {t} target nodes into {n} background nodes")
    rng = SeededRng(seed)
    return Embedding(map=np.asarray(rng.sample(n, t), dtype=np.int64))


def apply_embedding(background: Graph, target: TargetSpec, embedding: Embedding) -> Graph:
    """Union of the background with the target's edges mapped through the embedding.

    Mapped target edges that already exist in the background merge silently
    (the union is still a simple graph); mapped node degrees rise accordingly.
    """
    if embedding.t != target.t:
        raise ValueError("embedding size does not match target size")
    if embedding.map.size and int(embedding.map.max()) >= background.n:
        raise ValueError("embedding maps outside the background graph")
    n = background.n
    tedges = np.asarray(target.edges, dtype=np.int64)
    mapped_u = embedding.map[tedges[:, 0]]
    mapped_v = embedding.map[tedges[:, 1]]
    codes = np.minimum(mapped_u, mapped_v) * np.int64(n) + np.maximum(mapped_u, mapped_v)
    all_codes = np.union1d(background.edge_codes(), codes)
    return Graph._from_codes(n, all_codes)


def embed(background: Graph, target: TargetSpec, seed: int) -> tuple[Graph, Embedding]:
    """Draw a random embedding and overlay the target in one step."""
    embedding = draw_embedding(background.n, target.t, seed)
    return apply_embedding(background, target, embedding), embedding


# =====================================================================
# Selection and scoring
# =====================================================================


def top_k(scores: ScoreVector, k: int) -> np.ndarray:
    """Ids of the k highest-scoring nodes, ties broken by ascending node id.

    Selection is a partial introselect (no full sort): the k-th largest value
    is located first, then the tie boundary is resolved explicitly so the
    result always equals the first k ids of a stable sort by
    (score descending, id ascending).  Returned sorted ascending.
    """
    s = scores.scores
    n = s.size
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if k == n:
        return np.arange(n, dtype=np.int64)
    cut = np.argpartition(s, n - k)[n - k :]
    threshold = s[cut].min()
    above = np.flatnonzero(s > threshold)
    at = np.flatnonzero(s == threshold)[: k - above.size]
    return np.sort(np.concatenate([above, at])).astype(np.int64)


def identification_rate(candidates: np.ndarray, embedding: Embedding) -> float:
    """Fraction of embedded target nodes present among the candidates."""
    hits = int(np.isin(embedding.map, candidates).sum())
    return hits / embedding.t


# =====================================================================
# Experiment pipeline
# =====================================================================


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one identification experiment.

    ``background.seed`` is ignored: per-background seeds are derived from
    ``base_seed`` and the run index, one run reusing a single embedding
    across all its backgrounds.  ``k`` defaults to the target size.
    """

    background: GraphGenSpec
    target: TargetSpec
    num_backgrounds: int
    runs: int
    base_seed: int = 0
    k: int | None = None
    krylov: KrylovParams = field(default_factory=KrylovParams)

    def __post_init__(self) -> None:
        if self.num_backgrounds < 1:
            raise ValueError(f"need num_backgrounds >= 1, got {self.num_backgrounds}")
        if self.runs < 1:
            raise ValueError(f"need runs >= 1, got {self.runs}")
        if self.target.t > self.background.n:
            raise ValueError("target does not fit into the background graph")
        if self.k is not None and not 1 <= self.k <= self.background.n:
            raise ValueError(f"k must lie in [1, n], got {self.k}")

    @property
    def effective_k(self) -> int:
        return self.k if self.k is not None else self.target.t


@dataclass(frozen=True)
class RunResult:
    """Outcome of a single run: where the target sat and what was recovered."""

    embedding: Embedding
    candidates: np.ndarray
    hits: int
    rate: float


@dataclass
class PhaseSeconds:
    """Cumulative wall time per pipeline phase, summed over runs."""

    generation: float = 0.0
    scoring: float = 0.0
    selection: float = 0.0


@dataclass(frozen=True)
class RateSummary:
    mean: float
    std: float
    perfect_fraction: float


def run_seed(base_seed: int, run_index: int) -> int:
    """Seed of one run: base_seed + run_index (wrapped to 64 bits)."""
    return (base_seed + run_index) & _MASK64


def embedding_seed(base_seed: int, run_index: int) -> int:
    return derive_seed(run_seed(base_seed, run_index), _EMBED_STREAM, 0)


def background_seed(base_seed: int, run_index: int, background_index: int) -> int:
    return derive_seed(run_seed(base_seed, run_index), _BACKGROUND_STREAM, background_index)


def _single_run(cfg: ExperimentConfig, run_index: int) -> tuple[RunResult, PhaseSeconds]:
    times = PhaseSeconds()
    embedding = draw_embedding(
        cfg.background.n, cfg.target.t, embedding_seed(cfg.base_seed, run_index)
    )
    per_background: list[ScoreVector] = []
    for b in range(cfg.num_backgrounds):
        spec = dataclasses.replace(
            cfg.background, seed=background_seed(cfg.base_seed, run_index, b)
        )
        t0 = time.perf_counter()
        host = apply_embedding(generate(spec), cfg.target, embedding)
        t1 = time.perf_counter()
        per_background.append(total_communicability(host, cfg.krylov))
        t2 = time.perf_counter()
        times.generation += t1 - t0
        times.scoring += t2 - t1
    t3 = time.perf_counter()
    combined = accumulate(per_background)
    candidates = top_k(combined, cfg.effective_k)
    hits = int(np.isin(embedding.map, candidates).sum())
    times.selection += time.perf_counter() - t3
    rate = hits / cfg.target.t
    return RunResult(embedding=embedding, candidates=candidates, hits=hits, rate=rate), times


def run_pipeline_with_timings(
    cfg: ExperimentConfig, *, jobs: int = 1
) -> tuple[list[RunResult], PhaseSeconds]:
    """Execute all runs (optionally across threads) and collect phase times.

    Results are identical for any ``jobs``: every run derives its own seeds
    and results are collected in run order.
    """
    if jobs < 1:
        raise ValueError(f"need jobs >= 1, got {jobs}")
    if jobs == 1 or cfg.runs == 1:
        outcomes = [_single_run(cfg, r) for r in range(cfg.runs)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(lambda r: _single_run(cfg, r), range(cfg.runs)))
    results = [res for res, _ in outcomes]
    total = PhaseSeconds()
    for _, t in outcomes:
        total.generation += t.generation
        total.scoring += t.scoring
        total.selection += t.selection
    return results, total


def run_pipeline(cfg: ExperimentConfig, *, jobs: int = 1) -> list[RunResult]:
    """Execute all runs of the experiment; see :func:`run_pipeline_with_timings`."""
    results, _ = run_pipeline_with_timings(cfg, jobs=jobs)
    return results


def summarize_rates(results: Sequence[RunResult]) -> RateSummary:
    """Mean and sample std of per-run rates, plus the fraction of perfect runs."""
    rates = np.asarray([r.rate for r in results])
    mean = float(rates.mean())
    std = float(rates.std(ddof=1)) if rates.size > 1 else 0.0
    perfect = float(np.mean(rates == 1.0))
    return RateSummary(mean=mean, std=std, perfect_fraction=perfect)

"""Seeded RANSAC for 6-DoF registration from putative correspondences.

Each iteration samples a minimal triple of correspondences, solves the
rigid transform, and scores it with the configured metric; the hypothesis
with the maximum score wins, ties broken by earliest iteration. The
iteration budget is fixed (no early exit) so different metrics see the
same hypothesis stream, and the sample sequence is a pure function of the
seed.

Internally the per-iteration solves run through a batched kernel whose
arithmetic matches the public solver element for element, so replaying
the trace with `sample_minimal` + `estimate_rigid_transform` +
`evaluate_hypothesis` reproduces the result bit-exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import (BadConfig, MissingClouds, PersistentDegeneracy,
                     TooFewCorrespondences)
from .geom import (DEGENERACY_AREA_FACTOR, RigidTransform, _estimate_rigid_batch,
                   cloud_resolution, triangle_area)
from .metrics import (CLOUD_KINDS, CorrespondenceSet, HypothesisScore,
                      MetricSpec, _cloud_value, _corr_values_batch)
from .spatial import NeighborIndex

__all__ = [
    "RansacConfig",
    "RegistrationResult",
    "run_ransac",
    "sample_minimal",
    "SAMPLE_SIZE",
]

# Only the 3-point minimal solver is supported.
SAMPLE_SIZE = 3


@dataclass(frozen=True)
class RansacConfig:
    """Engine parameters.

    Sampling uses numpy's PCG64 generator seeded with `seed`, so the
    hypothesis stream is reproducible across runs and platforms.
    `degeneracy_retries` bounds how many times one iteration may redraw
    a collinear sample before giving up.
    """

    metric: MetricSpec
    seed: int
    iterations: int = 1000
    sample_size: int = SAMPLE_SIZE
    degeneracy_retries: int = 100

    def __post_init__(self):
        if self.iterations < 1:
            raise BadConfig(f"iterations must be >= 1, got {self.iterations}")
        if self.sample_size != SAMPLE_SIZE:
            raise BadConfig("only 3-point minimal samples are supported")
        if self.degeneracy_retries < 1:
            raise BadConfig("degeneracy_retries must be >= 1")


@dataclass(frozen=True, eq=False)
class RegistrationResult:
    """Outcome of one RANSAC run.

    `best_iteration` is the 0-based index of the first iteration that
    attained the maximum score. `elapsed_eval_time` covers hypothesis
    scoring only; `elapsed_total_time` covers the whole run.
    """

    best_transform: RigidTransform
    best_score: HypothesisScore
    best_iteration: int
    hypotheses_evaluated: int
    elapsed_eval_time: float
    elapsed_total_time: float


def _degeneracy_area(corrs: CorrespondenceSet) -> float:
    res = cloud_resolution(corrs.sources)
    return DEGENERACY_AREA_FACTOR * res * res


def sample_minimal(corrs: CorrespondenceSet, rng: np.random.Generator, *,
                   min_triangle_area: float | None = None,
                   degeneracy_retries: int = 100) -> np.ndarray:
    """Draw 3 distinct correspondence indices, redrawing degenerate triples.

    Indices are uniform without replacement; a draw whose source points
    span a triangle of area <= `min_triangle_area` (default: 1e-6 times
    the squared resolution of the correspondence source points) is
    rejected and redrawn, up to `degeneracy_retries` extra attempts. The
    generator advances in place, fixing the sample sequence for a seed.

    Raises :class:`TooFewCorrespondences` below 3 items and
    :class:`PersistentDegeneracy` when every attempt was degenerate.
    """
    n = corrs.n
    if n < SAMPLE_SIZE:
        raise TooFewCorrespondences(f"need >= {SAMPLE_SIZE} correspondences, got {n}")
    if min_triangle_area is None:
        min_triangle_area = _degeneracy_area(corrs)
    src = corrs.sources
    for _ in range(degeneracy_retries + 1):
        idx = rng.choice(n, size=SAMPLE_SIZE, replace=False)
        if triangle_area(src[idx[0]], src[idx[1]], src[idx[2]]) > min_triangle_area:
            return idx
    raise PersistentDegeneracy(
        f"no non-collinear sample in {degeneracy_retries + 1} attempts")


def run_ransac(config: RansacConfig, corrs: CorrespondenceSet,
               source=None, target_index: NeighborIndex | None = None
               ) -> RegistrationResult:
    """Run the full sample/solve/score loop and return the best hypothesis.

    `source` and `target_index` are required exactly when the configured
    metric compares whole clouds (pc-dist, overlap-count); correspondence
    metrics ignore them. Deterministic given (config, inputs).
    """
    t_start = time.perf_counter()
    if corrs.n < SAMPLE_SIZE:
        raise TooFewCorrespondences(
            f"need >= {SAMPLE_SIZE} correspondences, got {corrs.n}")
    spec = config.metric
    cloud_metric = spec.kind in CLOUD_KINDS
    source_pts = None
    if cloud_metric:
        if source is None or target_index is None:
            raise MissingClouds(f"{spec.kind} needs source cloud and target index")
        source_pts = getattr(source, "points", source)
        source_pts = np.asarray(source_pts, dtype=np.float64)

    rng = np.random.default_rng(config.seed)
    min_area = _degeneracy_area(corrs)
    triples = np.empty((config.iterations, SAMPLE_SIZE), dtype=np.intp)
    for i in range(config.iterations):
        triples[i] = sample_minimal(corrs, rng, min_triangle_area=min_area,
                                    degeneracy_retries=config.degeneracy_retries)

    rotations, translations = _estimate_rigid_batch(corrs.sources[triples],
                                                    corrs.targets[triples])

    t_eval = time.perf_counter()
    if cloud_metric:
        values = np.empty(config.iterations)
        for i in range(config.iterations):
            values[i] = _cloud_value(spec, rotations[i], translations[i],
                                     source_pts, target_index)
    else:
        values = _corr_values_batch(spec, rotations, translations,
                                    corrs.sources, corrs.targets)
    eval_elapsed = time.perf_counter() - t_eval
    # np.argmax takes the first maximum: earliest-iteration tie rule.
    best_i = int(np.argmax(values))
    best_value = float(values[best_i])

    best_transform = RigidTransform(rotations[best_i], translations[best_i])
    return RegistrationResult(
        best_transform=best_transform,
        best_score=HypothesisScore(best_value, spec.kind),
        best_iteration=best_i,
        hypotheses_evaluated=config.iterations,
        elapsed_eval_time=eval_elapsed,
        elapsed_total_time=time.perf_counter() - t_start,
    )

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.framework.logging import get_logger
from src.spectral.camera import CameraSpec, render_rgb_cube
from src.spectral.core import SpectralCube
from src.spectral.errors import EmptyTrainingSet
from src.spectral.estimators import (
    EstimationModel,
    EstimatorKind,
    FitInputs,
    FitParams,
    TrainingSet,
    estimate_cube,
    fit_model,
    merge_training_sets,
)
from src.spectral.metrics import rmse_map
from .sampling import DEFAULT_FRACTIONS, fraction_label, sample_training

logger = get_logger(__name__)

TOP_CANDIDATES = 5


@dataclass(frozen=True)
class MethodSpec:
    """Estimator kind plus the fit parameters a search scores with"""
    kind: EstimatorKind = EstimatorKind.PSEUDOINVERSE
    params: FitParams = field(default_factory=FitParams)

    def __post_init__(self):
        object.__setattr__(self, 'kind', EstimatorKind(self.kind))

    def fit(self, training: TrainingSet, camera: CameraSpec) -> EstimationModel:
        return fit_model(self.kind, FitInputs(training=training, camera=camera), self.params)

    def __str__(self) -> str:
        return f"{self.kind.value}/{self.params.combo}"


@dataclass(frozen=True)
class CandidateSet:
    """A training set competing in the search; ``members`` are the image indices it was drawn from"""
    id: str
    training: TrainingSet
    fraction: float
    members: Tuple[int, ...]
    score: Optional[float] = None

    def __post_init__(self):
        if self.score is not None and not self.score >= 0:
            raise ValueError(f"Candidate score must be >= 0, got {self.score}")

    @property
    def k(self) -> int:
        return self.training.k

    def with_score(self, score: float) -> 'CandidateSet':
        return replace(self, score=score)

    def sort_key(self) -> Tuple[float, int, str]:
        return (math.inf if self.score is None else self.score, self.k, self.id)


def candidate_id(fraction: float, members: Sequence[int]) -> str:
    return f"{fraction_label(fraction)}[{','.join(str(m) for m in members)}]"


def union_candidate(parts: Sequence[CandidateSet]) -> CandidateSet:
    """Union of candidates, repeated (image, pixel) samples kept once"""
    if len(parts) == 1:
        return replace(parts[0], score=None)
    fractions = {part.fraction for part in parts}
    members = tuple(sorted({m for part in parts for m in part.members}))
    if len(fractions) == 1:
        fraction = fractions.pop()
        union_id = candidate_id(fraction, members)
    else:
        fraction = float('nan')
        union_id = '+'.join(sorted(part.id for part in parts))
    return CandidateSet(
        id=union_id,
        training=merge_training_sets([part.training for part in parts]),
        fraction=fraction,
        members=members,
    )


def image_rmse(model: EstimationModel, image: SpectralCube, camera: CameraSpec) -> float:
    estimate = estimate_cube(model, render_rgb_cube(image, camera).image)
    return float(np.mean(rmse_map(image, estimate)))


def score_set(
    candidate: CandidateSet,
    images: Sequence[SpectralCube],
    camera: CameraSpec,
    method: MethodSpec = MethodSpec(),
) -> float:
    """Mean over images of the per-image mean RMSE, fitting once on the candidate"""
    if candidate.k < 1:
        raise EmptyTrainingSet(f"Candidate {candidate.id} is empty")
    if not images:
        raise ValueError("Scoring needs at least one image")
    model = method.fit(candidate.training, camera)
    scores = [image_rmse(model, image, camera) for image in images]
    # exact sum, so the score does not depend on image order
    return math.fsum(scores) / len(scores)


@dataclass
class SearchResult:
    step1: List[CandidateSet]
    step2: List[CandidateSet]
    step3: List[CandidateSet]
    winner: CandidateSet
    method: MethodSpec

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for step, candidates in (('step1', self.step1), ('step2', self.step2), ('step3', self.step3)):
            for candidate in candidates:
                rows.append({
                    'step': step,
                    'id': candidate.id,
                    'k': candidate.k,
                    'score': candidate.score,
                    'winner': step == 'step3' and candidate.id == self.winner.id,
                })
        return pd.DataFrame(rows, columns=['step', 'id', 'k', 'score', 'winner'])


def _score_all(
    candidates: Sequence[CandidateSet],
    scorer: Callable[[CandidateSet], float],
    threads: int,
) -> List[CandidateSet]:
    if threads <= 1 or len(candidates) <= 1:
        scores = [scorer(candidate) for candidate in candidates]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scores = list(pool.map(scorer, candidates))
    scored = [candidate.with_score(score) for candidate, score in zip(candidates, scores)]
    for candidate in scored:
        logger.debug(f"Candidate {candidate.id}: k={candidate.k}, score={candidate.score:.6g}")
    return scored


def step3_candidates(ranked: Sequence[CandidateSet], top: int = TOP_CANDIDATES) -> List[CandidateSet]:
    """Every non-empty union of the best ``top`` ranked candidates"""
    best = list(ranked[:top])
    unions = []
    for size in range(1, len(best) + 1):
        for parts in combinations(best, size):
            unions.append(union_candidate(parts))
    return unions


def run_search(
    images: Sequence[SpectralCube],
    camera: CameraSpec,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    seed: int = 0,
    method: MethodSpec = MethodSpec(),
    threads: int = 1,
) -> SearchResult:
    """Three-step representative training set search

    1. per image, the fraction whose sample best self-estimates that image;
    2. those winners scored against every image and ranked;
    3. all unions of the top five scored again, the minimum wins.
    Ties go to the smaller set, then to the lexicographically smaller id.
    """
    if not images:
        raise ValueError("Training search needs at least one image")
    if not fractions:
        raise ValueError("Training search needs at least one sampling fraction")

    try:
        step1 = []
        for index, image in enumerate(images):
            sets = [
                CandidateSet(
                    id=candidate_id(fraction, (index,)),
                    training=sample_training(image, camera, fraction, seed, source_index=index),
                    fraction=fraction,
                    members=(index,),
                )
                for fraction in fractions
            ]
            scored = _score_all(sets, lambda c, image=image: score_set(c, [image], camera, method), threads)
            step1.append(min(scored, key=CandidateSet.sort_key))
        logger.info(f"Step 1 kept {', '.join(c.id for c in step1)}")

        cache: Dict[str, float] = {}

        def score_global(candidate: CandidateSet) -> float:
            return score_set(candidate, images, camera, method)

        step2 = sorted(
            _score_all([replace(c, score=None) for c in step1], score_global, threads),
            key=CandidateSet.sort_key,
        )
        cache.update({c.id: c.score for c in step2})
        logger.info(f"Step 2 ranking: {', '.join(f'{c.id}={c.score:.5f}' for c in step2)}")

        unions = step3_candidates(step2)
        fresh = [c for c in unions if c.id not in cache]
        for candidate in _score_all(fresh, score_global, threads):
            cache[candidate.id] = candidate.score
        step3 = sorted((c.with_score(cache[c.id]) for c in unions), key=CandidateSet.sort_key)
    except Exception as e:
        logger.error(f"Training search failed: {e}", exc_info=True)
        raise

    winner = step3[0]
    logger.info(f"Representative set {winner.id} (k={winner.k}) scored {winner.score:.6g} over {len(step3)} unions")
    return SearchResult(step1=step1, step2=step2, step3=step3, winner=winner, method=method)


def search_representative(
    images: Sequence[SpectralCube],
    camera: CameraSpec,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    seed: int = 0,
    method: MethodSpec = MethodSpec(),
    threads: int = 1,
) -> CandidateSet:
    return run_search(images, camera, fractions, seed, method, threads).winner

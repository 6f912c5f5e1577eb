from .sampling import DEFAULT_FRACTIONS, fraction_label, sample_count, sample_pixels, sample_training
from .search import (
    CandidateSet,
    MethodSpec,
    SearchResult,
    TOP_CANDIDATES,
    candidate_id,
    run_search,
    score_set,
    search_representative,
    step3_candidates,
    union_candidate,
)

__all__ = [
    'DEFAULT_FRACTIONS',
    'fraction_label',
    'sample_count',
    'sample_pixels',
    'sample_training',
    'CandidateSet',
    'MethodSpec',
    'SearchResult',
    'TOP_CANDIDATES',
    'candidate_id',
    'run_search',
    'score_set',
    'search_representative',
    'step3_candidates',
    'union_candidate',
]

from excess_correlation.moments.accumulator import (
    EstimatorMode,
    MomentAccumulator,
    MomentOptions,
    accumulate,
)
from excess_correlation.moments.dirichlet import (
    dirichlet_raw_moments,
    lda_modified_moments,
    lda_raw_moments,
    single_topic_raw_moments,
)
from excess_correlation.moments.exact import (
    exact_moments,
    exact_pairs,
    exact_quad_contract,
    exact_triples_contract,
)
from excess_correlation.moments.modified import (
    modified_moments,
    modified_pairs,
    modified_triples_contract,
)
from excess_correlation.moments.moment_set import MomentSet, Provenance
from excess_correlation.moments.multiview import (
    MultiViewMoments,
    exact_multiview_moments,
    multiview_sample_moments,
)
from excess_correlation.moments.samples import sample_moments

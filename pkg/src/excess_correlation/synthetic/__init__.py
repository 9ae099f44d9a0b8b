from excess_correlation.synthetic.distributions import (
    bernoulli,
    centered_uniform,
    rademacher,
    sample_factors,
    signed_bernoulli,
)
from excess_correlation.synthetic.generators import (
    SampledViews,
    generate_independent_factor_samples,
    generate_lda_corpus,
    generate_multiview,
    random_topic_matrix,
    sample_dirichlet,
)
from excess_correlation.synthetic.hmm import FactorialHmmEmbedding, embed_factorial_hmm
from excess_correlation.synthetic.specification import (
    GeneratorModel,
    GeneratorSpec,
    GroundTruth,
    build_ground_truth,
    generate_samples,
)

from excess_correlation.algorithms.independent import (
    eca_kurtosis,
    eca_skew,
    estimate_skewness,
)
from excess_correlation.algorithms.lda import eca_lda, recover_alpha
from excess_correlation.algorithms.multiview import (
    eca_multiview,
    find_projectors_ab,
    multiview_symmetrize,
)

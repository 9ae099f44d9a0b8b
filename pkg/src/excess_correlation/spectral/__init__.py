from excess_correlation.spectral.decomposition import (
    SvdExtraction,
    power_iteration_svd,
    unique_singular_vectors,
)
from excess_correlation.spectral.range_finding import randomized_range
from excess_correlation.spectral.whitening import WhiteningMap, truncated_whiten, whiten

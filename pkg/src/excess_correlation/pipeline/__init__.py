from excess_correlation.pipeline.lda import clip_normalize, fit_lda, fit_lda_from_moments
from excess_correlation.pipeline.options import FitOptions, SvdMethod

from excess_correlation.model.corpus import Corpus
from excess_correlation.model.factors import DirichletParams, FactorSpec
from excess_correlation.model.results import RecoveryResult, RecoveryStatus
from excess_correlation.model.topics import (
    TopicMatrix,
    TopicMatrixMode,
    canonicalize,
    make_topic_matrix,
)

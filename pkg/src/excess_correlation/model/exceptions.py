class EcaError(ValueError):
    """Base class for every failure raised by excess_correlation."""


# Construction and shape errors
class DimensionMismatchError(EcaError):
    pass


class RankDeficientError(EcaError):
    pass


class BadColumnNormalizationError(EcaError):
    pass


class InvalidFactorSpecError(EcaError):
    pass


class InvalidDirichletParamsError(EcaError):
    pass


# Moment errors
class NegativeAlpha0Error(EcaError):
    pass


class EmptyCorpusError(EcaError):
    pass


class EmptyAccumulatorError(EcaError):
    pass


class OptionsMismatchError(EcaError):
    pass


class MissingMomentsError(EcaError):
    pass


# Spectral errors
class RankCollapseError(EcaError):
    pass


class SingularProjectedPairsError(EcaError):
    pass


class InsufficientRankError(EcaError):
    pass


class SingularProjectionError(EcaError):
    pass


# Reconstruction errors
class AllZeroAfterClipError(EcaError):
    pass


# Generator errors
class NegativeRateError(EcaError):
    pass


class InvalidTransitionError(EcaError):
    pass


# Bag-of-words file errors
class MalformedHeaderError(EcaError):
    pass


class IndexOutOfRangeError(EcaError):
    pass


class CountNonPositiveError(EcaError):
    pass


class VocabLengthMismatchError(EcaError):
    pass

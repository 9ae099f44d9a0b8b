class Tolerances:
    # Relative to the largest singular value of the matrix being checked
    RANK: float = 1e-10
    PROJECTED_PAIRS_EIGENVALUE: float = 1e-12
    SINGULAR_VALUE_GAP: float = 1e-6

    COLUMN_SUM: float = 1e-12
    DEGENERATE_COLUMN_SUM: float = 1e-8
    DEDUPLICATION: float = 1e-6
    SCALE_DENOMINATOR: float = 1e-12

    MULTIVIEW_CONDITION_NUMBER: float = 1e10

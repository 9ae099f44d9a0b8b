__all__ = [
    "__title__",
    "__summary__",
    "__uri__",
    "__author__",
    "__copyright__",
]

__title__ = "excess_correlation"
__summary__ = (
    "excess_correlation recovers topic matrices and latent factor loadings from "
    "low-order moments with a pair of singular value decompositions."
)
__uri__ = "https://github.com/rmudambi/excess_correlation"

__author__ = "rmudambi"

__copyright__ = f"Copyright 2023 {__author__}"

import numpy as np

from excess_correlation.moments.moment_set import MomentSet, Operator, materialize


def modified_pairs(raw: MomentSet, alpha0: float) -> np.ndarray:
    """E[x1 x2^T] - alpha0 / (alpha0 + 1) mu mu^T."""
    return materialize(raw.modified(alpha0).pairs)


def modified_triples_contract(raw: MomentSet, alpha0: float, eta: np.ndarray) -> Operator:
    """The Dirichlet-modified third moment contracted with eta."""
    return raw.modified(alpha0).triples(eta)


def modified_moments(raw: MomentSet, alpha0: float) -> MomentSet:
    """
    The moment set (Pairs_alpha0, Triples_alpha0) for a Dirichlet concentration
    alpha0. An alpha0 of 0 returns the non-central moments unchanged and an
    infinite alpha0 the central moments.
    """
    return raw.modified(alpha0)

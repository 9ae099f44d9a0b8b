from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from excess_correlation.model.exceptions import DimensionMismatchError
from excess_correlation.moments.moment_set import MomentSet, materialize
from excess_correlation.spectral.utilities import Seed, get_rng, spectral_norm
from excess_correlation.spectral.whitening import truncated_whiten

N_RANDOM_PROBES = 20


def moment_errors(
    ground_truth: MomentSet, empirical: MomentSet, probe_etas: Sequence[np.ndarray]
) -> Tuple[float, float]:
    """
    Spectral-norm errors of empirical moments against the truth.

    E_P is the pairs error and E_T the largest contracted-triples error over
    the probe directions, each scaled to unit norm. The probes only bound the
    supremum over all directions from below.
    """
    if ground_truth.d != empirical.d:
        raise DimensionMismatchError(
            f"Cannot compare moments of dimension {ground_truth.d} and {empirical.d}."
        )
    pairs_error = spectral_norm(ground_truth.dense_pairs - empirical.dense_pairs)

    triples_error = 0.0
    for eta in probe_etas:
        eta = np.asarray(eta, dtype=float)
        norm = linalg.norm(eta)
        if norm == 0.0:
            continue
        eta = eta / norm
        truth, estimate = ground_truth.triples(eta), empirical.triples(eta)
        difference = materialize(truth) - materialize(estimate)
        triples_error = max(triples_error, spectral_norm(difference))
    return pairs_error, triples_error


def probe_directions(
    moments: MomentSet, k: Optional[int] = None, seed: Seed = None
) -> List[np.ndarray]:
    """
    Twenty random unit directions, plus the k whitening directions of the
    pairs when k is given.
    """
    rng = get_rng(seed)
    probes = list(rng.standard_normal((N_RANDOM_PROBES, moments.d)))
    if k is not None:
        whitening = truncated_whiten(moments.pairs, k, rng)
        probes.extend(whitening.whitening.T)
    return [probe / linalg.norm(probe) for probe in probes]

import numpy as np
import pytest
from scipy import linalg

from excess_correlation.algorithms.diagonalization import add_new_vectors, diagonalize

SKEW = np.array([[0.0, 1.0, 1.0], [-1.0, 0.0, 1.0], [-1.0, -1.0, 0.0]])
ROTATION = linalg.expm(0.03 * SKEW)


def _contraction(matrices):
    remaining = iter(matrices)
    return lambda *directions: next(remaining)


####################
# Test diagonalize #
####################


def test_diagonalize_stops_at_k_vectors():
    """A second attempt with slightly rotated vectors does not overfill the basis."""
    matrices = [np.diag([2.0, 1.0, 1.0]), ROTATION @ np.diag([3.0, 2.0, 1.0]) @ ROTATION.T]

    result = diagonalize(
        _contraction(matrices), 3, [np.eye(3)[0]], 1, np.random.default_rng(0), retries=2
    )

    assert result.n_vectors == 3
    assert len(result.values) == 3
    assert abs(result.vectors[:, 0] @ np.eye(3)[0]) == pytest.approx(1.0)
    assert len(result.thetas) == 2


def test_diagonalize_stops_after_a_complete_attempt():
    result = diagonalize(
        _contraction([np.diag([3.0, 2.0, 1.0])]), 3, None, 1, np.random.default_rng(0)
    )

    assert result.n_vectors == 3
    assert len(result.thetas) == 1
    assert np.allclose(result.values, [3.0, 2.0, 1.0])


def test_diagonalize_keeps_partial_result_after_retries():
    matrices = [np.diag([2.0, 1.0, 1.0])] * 3

    result = diagonalize(
        _contraction(matrices), 3, None, 1, np.random.default_rng(0), retries=3
    )

    assert result.n_vectors == 1
    assert len(result.thetas) == 3


########################
# Test add_new_vectors #
########################


def test_add_new_vectors_skips_known_directions():
    vectors, values = [np.eye(3)[0]], [2.0]
    candidates = np.column_stack([-np.eye(3)[0], np.eye(3)[1], np.eye(3)[2]])

    add_new_vectors(vectors, values, candidates, np.array([2.0, 1.0, 0.5]), 3)

    assert len(vectors) == 3
    assert values == [2.0, 1.0, 0.5]


def test_add_new_vectors_keeps_at_most_k():
    vectors, values = [], []

    add_new_vectors(vectors, values, np.eye(3), np.array([3.0, 2.0, 1.0]), 2)

    assert len(vectors) == 2
    assert values == [3.0, 2.0]

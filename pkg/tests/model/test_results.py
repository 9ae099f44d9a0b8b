import numpy as np
import pytest

from excess_correlation.model import RecoveryResult


def test_result_orders_columns_by_singular_value():
    result = RecoveryResult(
        columns=np.array([[1.0, 0.0], [0.0, 1.0]]),
        singular_values=[0.5, 2.0],
        skewness_estimates=[1.0, 3.0],
        scale_estimates=[0.1, 0.2],
        k=3,
        alpha_hat=[0.4, 0.6],
    )

    assert np.array_equal(result.columns, [[0.0, 1.0], [1.0, 0.0]])
    assert np.array_equal(result.singular_values, [2.0, 0.5])
    assert np.array_equal(result.skewness_estimates, [3.0, 1.0])
    assert np.array_equal(result.alpha_hat, [0.6, 0.4])
    assert result.n_columns == 2
    assert not result.is_complete


def test_result_rejects_too_many_columns():
    with pytest.raises(ValueError):
        RecoveryResult(np.eye(2), [1.0, 1.0], [1.0, 1.0], [1.0, 1.0], k=1)


def test_result_rejects_non_finite_columns():
    with pytest.raises(ValueError):
        RecoveryResult(np.array([[np.nan], [1.0]]), [1.0], [1.0], [1.0], k=1)


def test_empty_result_is_allowed():
    result = RecoveryResult(np.zeros((4, 0)), [], [], [], k=2)

    assert result.n_columns == 0

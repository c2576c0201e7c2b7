import numpy as np
import pytest

from exceptions.ConfigurationException import DimensionMismatchError
from exceptions.MetricsException import DegenerateReferenceError
from services.metrics_services import MetricsServices


@pytest.fixture
def reference(rng):
    return rng.normal(size=(16, 8))


def test_exact_prediction_has_zero_error(reference):
    report = MetricsServices.compute_metrics(reference, reference)
    assert report.rmae == report.rrmse == report.relative_l1 == 0.0


def test_doubled_and_zero_predictions(reference):
    doubled = MetricsServices.compute_metrics(2 * reference, reference)
    assert doubled.relative_l1 == pytest.approx(1.0, rel=1e-15)
    assert doubled.rmae == pytest.approx(1.0, rel=1e-15)
    zero = MetricsServices.compute_metrics(np.zeros_like(reference), reference)
    assert zero.relative_l1 == pytest.approx(1.0, rel=1e-15)
    assert zero.rrmse == pytest.approx(1.0, rel=1e-15)


def test_metrics_are_scale_invariant(reference, rng):
    prediction = reference + 0.1 * rng.normal(size=reference.shape)
    base = MetricsServices.compute_metrics(prediction, reference)
    scaled = MetricsServices.compute_metrics(37.5 * prediction, 37.5 * reference)
    assert scaled.rmae == pytest.approx(base.rmae, rel=1e-12)
    assert scaled.rrmse == pytest.approx(base.rrmse, rel=1e-12)


def test_l1_numerator_matches_the_error_map(reference, rng):
    prediction = reference + rng.normal(size=reference.shape)
    report = MetricsServices.compute_metrics(prediction, reference)
    error_map = prediction - reference
    assert np.mean(np.abs(error_map)) == pytest.approx(report.l1_numerator / report.n_points, rel=1e-13)
    assert report.rmae == pytest.approx(np.sqrt(report.relative_l1), rel=1e-15)


def test_metric_errors(reference):
    with pytest.raises(DegenerateReferenceError):
        MetricsServices.compute_metrics(reference, np.zeros_like(reference))
    with pytest.raises(DimensionMismatchError):
        MetricsServices.compute_metrics(reference[:3], reference)


def test_aggregate_and_paired_comparison(reference):
    runs_a = [MetricsServices.compute_metrics(reference * (1 + e), reference) for e in (0.01, 0.02, 0.015)]
    runs_b = [MetricsServices.compute_metrics(reference * (1 + e), reference) for e in (0.3, 0.5, 0.4)]
    a = MetricsServices.aggregate(runs_a, [0, 1, 2])
    b = MetricsServices.aggregate(runs_b, [0, 1, 2])
    assert a.mean["relative_l1"] == pytest.approx(np.mean([r.relative_l1 for r in runs_a]))
    assert a.std["relative_l1"] == pytest.approx(np.std([r.relative_l1 for r in runs_a], ddof=1))
    single = MetricsServices.aggregate(runs_a[:1], [0])
    assert single.std["rmae"] == 0.0
    comparison = MetricsServices.compare(a, b)
    assert comparison.t_statistic < 0
    assert comparison.p_value < 0.05
    assert MetricsServices.compare(single, single).p_value is None

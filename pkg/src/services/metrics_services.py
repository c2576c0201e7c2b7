from collections.abc import Sequence
from pathlib import Path

import numpy as np
from scipy import stats

# exceptions
from exceptions.ConfigurationException import DimensionMismatchError
from exceptions.MetricsException import DegenerateReferenceError

# logger module
from logger.logger_module import ModuleLoger
from schemas.report_schema import AggregateReport, ComparisonReport, MetricsReport

logger = ModuleLoger(Path(__file__).stem)

AGGREGATED_FIELDS = ("rmae", "rrmse", "relative_l1", "wall_time_s")


class MetricsServices:

    @staticmethod
    def compute_metrics(
        prediction: np.ndarray,
        reference: np.ndarray,
        **extra,
    ) -> MetricsReport:
        """Relative errors of ``prediction`` against ``reference`` on matching grids.

        rMAE   = sqrt(sum |p - u| / sum |u|)
        rRMSE  = sqrt(sum (p - u)^2 / sum u^2)
        rel L1 = sum |p - u| / sum |u|
        """
        prediction = np.asarray(prediction, dtype=np.float64).ravel()
        reference = np.asarray(reference, dtype=np.float64).ravel()
        if prediction.shape != reference.shape:
            raise DimensionMismatchError(
                f"prediction has {prediction.size} values, reference {reference.size}"
            )
        l1_reference = float(np.sum(np.abs(reference)))
        l2_reference = float(np.sum(np.square(reference)))
        if l1_reference == 0.0 or l2_reference == 0.0:
            raise DegenerateReferenceError("reference is identically zero; relative errors undefined")
        error = prediction - reference
        l1_numerator = float(np.sum(np.abs(error)))
        l2_numerator = float(np.sum(np.square(error)))
        relative_l1 = l1_numerator / l1_reference
        return MetricsReport(
            rmae=float(np.sqrt(relative_l1)),
            rrmse=float(np.sqrt(l2_numerator / l2_reference)),
            relative_l1=relative_l1,
            l1_numerator=l1_numerator,
            n_points=prediction.size,
            **extra,
        )

    @staticmethod
    def aggregate(reports: Sequence[MetricsReport], seeds: Sequence[int]) -> AggregateReport:
        mean, std = {}, {}
        for name in AGGREGATED_FIELDS:
            values = np.array([getattr(report, name) for report in reports], dtype=np.float64)
            mean[name] = float(np.mean(values))
            std[name] = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
        return AggregateReport(runs=list(reports), seeds=list(seeds), mean=mean, std=std)

    @staticmethod
    def compare(a: AggregateReport, b: AggregateReport, metric: str = "relative_l1") -> ComparisonReport:
        """Paired one-sided t-test of H1: metric(A) < metric(B)."""
        values_a = [getattr(report, metric) for report in a.runs]
        values_b = [getattr(report, metric) for report in b.runs]
        if len(values_a) != len(values_b):
            raise DimensionMismatchError("paired comparison needs the same number of runs")
        t_statistic = p_value = None
        if len(values_a) > 1:
            result = stats.ttest_rel(values_a, values_b, alternative="less")
            if np.isfinite(result.statistic):
                t_statistic, p_value = float(result.statistic), float(result.pvalue)
        if t_statistic is None:
            logger.warning(f"paired t-test on {metric} is undefined for these runs")
        return ComparisonReport(metric=metric, a=a, b=b, t_statistic=t_statistic, p_value=p_value)

"""Closest-point RMS scoring, cumulative-error quantile reports, and the
per-landmark heatmap baseline used for comparison."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, NoPeak
from .geometry import Polyline, as_polyline, distances_to_polyline
from .targets import grid_of
from .walker import localize_peak

DEFAULT_PROPORTIONS = (0.1, 0.3, 0.5, 0.7, 0.9, 0.95)
DIRECTIONS = ("gt_to_pred", "pred_to_gt", "symmetric")
_DIRECTION_ALIASES = {"gt2pred": "gt_to_pred", "pred2gt": "pred_to_gt", "sym": "symmetric"}


@dataclass(frozen=True)
class ContourError:
    rms: float
    sample_id: str = ""
    method: str = "uvf"

    def __post_init__(self):
        if not (math.isfinite(self.rms) and self.rms >= 0):
            raise InvalidArgument(f"rms must be finite and non-negative, got {self.rms}")


@dataclass(frozen=True)
class QuantileReport:
    proportions: tuple
    errors: tuple

    def rows(self):
        return list(zip(self.proportions, self.errors))

    def scaled(self, factor):
        """Same report in other units, e.g. millimetres given the pixel spacing."""
        return QuantileReport(self.proportions, tuple(e * factor for e in self.errors))


@dataclass(frozen=True)
class MethodComparison:
    a: QuantileReport
    b: QuantileReport
    differences: tuple


def residuals(pred, gt, direction="gt_to_pred"):
    """Per-point closest distances underlying :func:`rms_closest_point`."""
    pred, gt = as_polyline(pred), as_polyline(gt)
    direction = _DIRECTION_ALIASES.get(direction, direction)
    if direction == "gt_to_pred":
        return distances_to_polyline(pred, gt.vertices)
    if direction == "pred_to_gt":
        return distances_to_polyline(gt, pred.vertices)
    if direction == "symmetric":
        return np.concatenate([distances_to_polyline(pred, gt.vertices),
                               distances_to_polyline(gt, pred.vertices)])
    raise InvalidArgument(f"unknown direction {direction!r}")


def rms_closest_point(pred, gt, direction="gt_to_pred"):
    """RMS of closest-point distances between a predicted contour and ground truth.

    ``gt_to_pred`` takes each ground-truth landmark's distance to the predicted
    polyline, ``pred_to_gt`` the reverse, ``symmetric`` pools both sets.
    """
    r = residuals(pred, gt, direction)
    return float(np.sqrt(np.mean(r * r)))


def _lower_quantile(sorted_errors, q):
    n = len(sorted_errors)
    # q * n can land a hair above an integer (0.3 * 10), which must not bump the rank.
    rank = max(1, math.ceil(q * n - 1e-9))
    return float(sorted_errors[min(rank, n) - 1])


def _rms_values(errors):
    return [e.rms if isinstance(e, ContourError) else float(e) for e in errors]


def quantile_report(errors, proportions=DEFAULT_PROPORTIONS):
    """Lower empirical quantiles: for each ``q``, the smallest error that at
    least ``ceil(q * N)`` samples do not exceed."""
    values = _rms_values(errors)
    if not values:
        raise InvalidArgument("no errors to report")
    proportions = tuple(float(q) for q in proportions)
    if any(not 0 < q <= 1 for q in proportions):
        raise InvalidArgument("proportions must lie in (0, 1]")
    if list(proportions) != sorted(proportions):
        raise InvalidArgument("proportions must be ordered")
    s = sorted(values)
    return QuantileReport(proportions, tuple(_lower_quantile(s, q) for q in proportions))


def cumulative_distribution(errors):
    """Sorted errors paired with the fraction of samples at or below each one."""
    s = np.sort(np.asarray(_rms_values(errors), dtype=float))
    return s, np.arange(1, len(s) + 1) / len(s)


def compare_methods(a_errors, b_errors, proportions=DEFAULT_PROPORTIONS):
    ra = quantile_report(a_errors, proportions)
    rb = quantile_report(b_errors, proportions)
    return MethodComparison(ra, rb, tuple(x - y for x, y in zip(ra.errors, rb.errors)))


def extract_baseline_landmarks(heatmaps):
    """One refined peak per heatmap, in channel order, joined into an open polyline.

    Consecutive identical peaks are merged; fewer than two distinct points is
    an error.
    """
    grids = [grid_of(h) for h in heatmaps]
    if len(grids) < 2:
        raise InvalidArgument("need at least two heatmaps")
    if any(g.shape != grids[0].shape for g in grids):
        raise InvalidArgument("heatmaps must share dimensions")
    peaks = []
    for ordinal, g in enumerate(grids):
        try:
            p = localize_peak(g)
        except NoPeak:
            raise NoPeak(f"heatmap {ordinal} is constant", ordinal=ordinal) from None
        if not peaks or p != peaks[-1]:
            peaks.append(p)
    if len(peaks) < 2:
        raise InvalidArgument("heatmap peaks collapse to a single point")
    return Polyline(np.array(peaks, dtype=float))

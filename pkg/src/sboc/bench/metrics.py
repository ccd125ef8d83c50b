"""Solution-quality and effort metrics, all confined to [0, 1]."""

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..exceptions import BelowOptimum

SUCCESS_THRESHOLD = 0.01


def _optimum(fn):
    """``(f_star, slack)`` for a registry function or a bare optimum value.

    Registry optima are printed to a few digits, so values below them by up to
    the registry tolerance are round-off; a bare number gets a 1e-9 slack.
    """
    if isinstance(fn, (int, float, np.floating, np.integer)):
        f = float(fn)
        return f, 1e-9 * (1.0 + abs(f))
    f = fn.metric_f_star
    return f, max(fn.tolerance, 1e-9 * (1.0 + abs(f)))


def delta_x(x_best, fn):
    """Distance to the nearest listed minimizer, scaled by the cube diagonal."""
    x = np.asarray(x_best, dtype=float)
    mins = np.atleast_2d(fn.minimizers_array if hasattr(fn, "minimizers_array") else fn)
    d = float(np.min(np.linalg.norm(mins - x, axis=1))) / math.sqrt(x.size)
    return min(d, 1.0)


def delta_f(f_best, fn, slack=None):
    """Relative optimality gap; absolute (saturating at 1) when the optimum is 0."""
    f_star, default_slack = _optimum(fn)
    slack = default_slack if slack is None else slack
    f_best = float(f_best)
    if f_best < f_star - slack:
        raise BelowOptimum(f"value {f_best!r} lies below the optimum {f_star!r}")
    if f_star != 0.0:
        v = (f_best - f_star) / abs(f_star)
    else:
        v = min(1.0, f_best)
    return min(max(v, 0.0), 1.0)


def gamma(history, fn, k_max, threshold=SUCCESS_THRESHOLD):
    """``(gamma, K*)``: first evaluation whose running best meets ``threshold``.

    K* is ``k_max`` when the threshold is never met.
    """
    h = np.asarray(history, dtype=float)
    if h.size == 0:
        raise ValueError("history is empty")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    best = np.minimum.accumulate(h)
    k_star = k_max
    for k, v in enumerate(best, start=1):
        if delta_f(v, fn) <= threshold:
            k_star = k
            break
    return min(k_star, k_max) / k_max, k_star


def median(values):
    """Order-statistic median; the mean of the two central values for even counts."""
    v = sorted(float(x) for x in values)
    if not v:
        raise ValueError("median of an empty collection")
    m = len(v) // 2
    return v[m] if len(v) % 2 else 0.5 * (v[m - 1] + v[m])


@dataclass
class RunMetrics:
    delta_x: float
    delta_f: float
    gamma: float
    k_star: int
    k_final: int

    def to_dict(self):
        return asdict(self)


def run_metrics(result, fn, k_max, threshold=SUCCESS_THRESHOLD):
    g, k_star = gamma(result.y, fn, k_max, threshold)
    return RunMetrics(delta_x(result.x_best, fn), delta_f(result.f_best, fn), g, k_star, result.n_evals)

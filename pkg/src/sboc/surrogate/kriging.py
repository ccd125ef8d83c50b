"""Kriging with a Gaussian correlation and a full quadratic trend.

The lengthscale parameters ``theta`` maximise the concentrated
log-likelihood; trend coefficients and process weights then follow from
generalized least squares.
"""

import logging

import numpy as np
from scipy.linalg import cho_solve, solve_triangular
from scipy.optimize import minimize

from ..exceptions import IllConditioned, TooFewPoints
from ._kernels import GAUSSIAN, KernelForm, design_matrix, monomial_exponents, predict_numpy
from .base import SurrogateModel, register_model_type

log = logging.getLogger(__name__)

NUGGET = 1e-10
MAX_NUGGET = 1e-6
LOG10_THETA_BOUNDS = (-3.0, 3.0)
N_STARTS = 5
MAXFUN = 200
_PENALTY = 1e10
# a theta is admissible only if the fitted model reproduces its training data
INTERP_RTOL = 1e-8


def trend_size(dim):
    return (dim + 1) * (dim + 2) // 2


def required_points(dim):
    return trend_size(dim) + 1


@register_model_type
class KrigingModel(SurrogateModel):
    """``S(x) = trend(x) + sum_k gamma_k exp(-sum_n theta_n (x_n - c_kn)^2)``."""

    kind = "kriging"

    def __init__(self, centers, gamma, theta, trend_coefs, variance=1.0, nugget=0.0, exps=None):
        self.centers = np.atleast_2d(np.asarray(centers, dtype=float))
        dim = self.centers.shape[1]
        self.gamma = np.asarray(gamma, dtype=float)
        self.theta = np.asarray(theta, dtype=float).reshape(dim)
        self.exps = monomial_exponents(dim, 2) if exps is None else np.asarray(exps, dtype=np.int64)
        self.trend_coefs = np.asarray(trend_coefs, dtype=float)
        self.variance = float(variance)
        self.nugget = float(nugget)
        if self.trend_coefs.shape != (self.exps.shape[0],):
            raise ValueError("trend coefficients do not match the trend basis")
        if self.gamma.shape != (self.centers.shape[0],):
            raise ValueError("one process weight per center is required")
        if np.any(self.theta <= 0):
            raise ValueError("theta must be positive")
        self._form = KernelForm(
            GAUSSIAN, self.centers, self.gamma, self.theta, self.exps, self.trend_coefs
        )

    def kernel_form(self):
        return self._form

    def predict_many(self, X):
        return predict_numpy(self._form, X)

    def trend(self, X):
        return design_matrix(np.atleast_2d(X), self.exps) @ self.trend_coefs

    def to_dict(self):
        return {
            "centers": self.centers.tolist(),
            "gamma": self.gamma.tolist(),
            "theta": self.theta.tolist(),
            "trend_exponents": self.exps.tolist(),
            "trend_coefs": self.trend_coefs.tolist(),
            "variance": self.variance,
            "nugget": self.nugget,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            d["centers"], d["gamma"], d["theta"], d["trend_coefs"],
            d["variance"], d["nugget"], d["trend_exponents"],
        )


class _Likelihood:
    def __init__(self, X, y, F, nugget):
        self.y = y
        self.F = F
        self.nugget = nugget
        diff = X[:, None, :] - X[None, :, :]
        self.sq = diff * diff
        self.K = X.shape[0]

    def correlation(self, theta):
        return np.exp(-np.tensordot(self.sq, theta, axes=([2], [0])))

    def factor(self, theta, nugget):
        R = self.correlation(theta)
        R[np.diag_indices_from(R)] += nugget
        try:
            return np.linalg.cholesky(R)
        except np.linalg.LinAlgError:
            return None

    def gls(self, L):
        Ft = solve_triangular(L, self.F, lower=True)
        yt = solve_triangular(L, self.y, lower=True)
        beta = np.linalg.lstsq(Ft, yt, rcond=None)[0]
        r = yt - Ft @ beta
        sigma2 = float(r @ r) / self.K
        return beta, sigma2

    def interpolates(self, theta, L, beta, nugget):
        gamma = cho_solve((L, True), self.y - self.F @ beta)
        pred = self.F @ beta + self.correlation(theta) @ gamma
        return bool(np.all(np.abs(pred - self.y) <= INTERP_RTOL * (1.0 + np.abs(self.y))))

    def __call__(self, log_theta):
        theta = 10.0 ** log_theta
        L = self.factor(theta, self.nugget)
        if L is None:
            return _PENALTY
        beta, sigma2 = self.gls(L)
        if not self.interpolates(theta, L, beta, self.nugget):
            return _PENALTY
        sigma2 = max(sigma2, 1e-300)
        return 0.5 * self.K * np.log(sigma2) + np.sum(np.log(np.diag(L)))


def train_kriging(X, y, rng, nugget=NUGGET, n_starts=N_STARTS, maxfun=MAXFUN):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    K, N = X.shape
    need = required_points(N)
    if K < need:
        raise TooFewPoints(f"Kriging with a quadratic trend needs {need} points in {N} dimensions, got {K}")
    exps = monomial_exponents(N, 2)
    F = design_matrix(X, exps)
    nll = _Likelihood(X, y, F, nugget)

    lo, hi = LOG10_THETA_BOUNDS
    starts = rng.uniform(lo, hi, size=(n_starts, N))
    best_val, best_t = np.inf, None
    for s in starts:
        res = minimize(nll, s, method="L-BFGS-B", bounds=[(lo, hi)] * N,
                       options={"maxfun": maxfun})
        for cand_t, cand_v in ((res.x, float(res.fun)), (s, nll(s))):
            if cand_v < best_val:
                best_val, best_t = cand_v, np.clip(cand_t, lo, hi)
    if best_val >= _PENALTY:
        # every start sat in the ill-conditioned region: walk up a diagonal ladder
        for c in np.linspace(lo, hi, 13):
            t = np.full(N, c)
            v = nll(t)
            if v < best_val:
                best_val, best_t = v, t
    theta = 10.0 ** best_t

    nug = nugget
    L = nll.factor(theta, nug)
    while L is None and nug < MAX_NUGGET:
        nug = min(nug * 10.0, MAX_NUGGET)
        log.warning("kriging correlation matrix not positive definite; nugget raised to %.1e", nug)
        L = nll.factor(theta, nug)
    if L is None:
        raise IllConditioned(f"Cholesky failed with nugget {MAX_NUGGET:g}")
    beta, sigma2 = nll.gls(L)
    gamma = cho_solve((L, True), y - F @ beta)
    return KrigingModel(X.copy(), gamma, theta, beta, sigma2, nug, exps)

"""Multiquadric RBF interpolant with a linear tail."""

import numpy as np

from ..exceptions import SingularSystem, TooFewPoints
from ._kernels import MULTIQUADRIC, KernelForm, basis_numpy, monomial_exponents, predict_numpy
from .base import SurrogateModel, register_model_type

N_PSI = 10
TRAIN_FRACTION = 0.8
RIDGE = 1e-10


@register_model_type
class RbfModel(SurrogateModel):
    """``S(x) = sum_k beta_k sqrt(|x - c_k|^2 + psi^2) + a_0 + sum_n a_n x_n``."""

    kind = "rbf"

    def __init__(self, centers, beta, tail, psi, psi_scores=None):
        self.centers = np.atleast_2d(np.asarray(centers, dtype=float))
        self.beta = np.asarray(beta, dtype=float)
        self.tail = np.asarray(tail, dtype=float)
        self.psi = float(psi)
        self.psi_scores = psi_scores
        dim = self.centers.shape[1]
        if self.beta.shape != (self.centers.shape[0],) or self.tail.shape != (dim + 1,):
            raise ValueError("coefficient shapes do not match the centers")
        if self.psi <= 0:
            raise ValueError("psi must be positive")
        self._form = KernelForm(
            MULTIQUADRIC,
            self.centers,
            self.beta,
            np.array([self.psi]),
            monomial_exponents(dim, 1),
            self.tail,
        )

    def kernel_form(self):
        return self._form

    def predict_many(self, X):
        return predict_numpy(self._form, X)

    def to_dict(self):
        return {
            "centers": self.centers.tolist(),
            "beta": self.beta.tolist(),
            "tail": self.tail.tolist(),
            "psi": self.psi,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["centers"], d["beta"], d["tail"], d["psi"])


def psi_candidates(n_points, count=N_PSI):
    """Equally spaced shape parameters from ``1/K`` to 1 inclusive."""
    return np.linspace(1.0 / n_points, 1.0, count)


def _solve_augmented(Phi, P, y):
    K, M = P.shape
    A = np.zeros((K + M, K + M))
    A[:K, :K] = Phi
    A[:K, K:] = P
    A[K:, :K] = P.T
    rhs = np.concatenate([y, np.zeros(M)])
    scale = max(np.max(np.abs(A)), 1.0)
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(sol)):
        return None
    resid = np.max(np.abs(A @ sol - rhs))
    if resid > 1e-8 * scale * max(1.0, np.max(np.abs(rhs)), np.max(np.abs(sol))):
        return None
    return sol


def fit_rbf(X, y, psi):
    """Solve the bordered interpolation system for a fixed ``psi``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    K, N = X.shape
    if K < N + 2:
        raise TooFewPoints(f"RBF needs at least {N + 2} points in {N} dimensions, got {K}")
    Phi = basis_numpy(MULTIQUADRIC, X, X, np.array([psi]))
    P = np.hstack([np.ones((K, 1)), X])
    sol = _solve_augmented(Phi, P, y)
    if sol is None:
        ridge = RIDGE * np.trace(Phi) / K
        sol = _solve_augmented(Phi + ridge * np.eye(K), P, y)
    if sol is None:
        raise SingularSystem(f"RBF system is singular (K={K}, psi={psi:.4g})")
    return RbfModel(X.copy(), sol[:K], sol[K:], psi)


def train_rbf(X, y, rng, n_psi=N_PSI, train_fraction=TRAIN_FRACTION):
    """Fit an RBF, choosing ``psi`` by hold-out RMSE on one random split.

    The split keeps ``max(floor(0.8 K), N + 2)`` points for fitting.  When
    nothing is left over every candidate scores 0 and the smallest ``psi``
    wins the tie.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    K, N = X.shape
    if K < N + 2:
        raise TooFewPoints(f"RBF needs at least {N + 2} points in {N} dimensions, got {K}")
    psis = psi_candidates(K, n_psi)
    n_train = min(K, max(int(np.floor(train_fraction * K)), N + 2))
    perm = rng.permutation(K)
    tr, te = perm[:n_train], perm[n_train:]
    scores = np.zeros(len(psis))
    if te.size:
        for i, psi in enumerate(psis):
            try:
                model = fit_rbf(X[tr], y[tr], psi)
            except SingularSystem:
                scores[i] = np.inf
                continue
            err = model.predict_many(X[te]) - y[te]
            scores[i] = np.sqrt(np.mean(err * err))
    # argmin returns the first minimum, i.e. the smallest psi on ties
    best = int(np.argmin(scores))
    model = fit_rbf(X, y, psis[best])
    model.psi_scores = list(zip(psis.tolist(), scores.tolist()))
    return model

"""Prediction kernels shared by the built-in surrogates.

Both built-in models have the shape ``sum_k w_k * phi(x, c_k) + poly(x)``:

* ``MULTIQUADRIC``: ``phi = sqrt(|x - c|^2 + psi^2)``, ``param = [psi]``
* ``GAUSSIAN``: ``phi = exp(-sum_n theta_n (x_n - c_n)^2)``, ``param = theta``

``poly`` is a sum of monomials ``coef_p * prod_n x_n^exps[p, n]`` with
exponents in {0, 1, 2}.  A model exposes this through a KernelForm so the
local search can run entirely inside compiled code.
"""

from collections import namedtuple
from itertools import combinations_with_replacement

import numpy as np

from .._accel import njit

MULTIQUADRIC = 0
GAUSSIAN = 1

KernelForm = namedtuple("KernelForm", "kind centers weights param exps coefs")


def monomial_exponents(dim, degree):
    """Exponent rows of all monomials up to ``degree`` (graded, then lexicographic)."""
    rows = [np.zeros(dim, dtype=np.int64)]
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(range(dim), d):
            e = np.zeros(dim, dtype=np.int64)
            for n in combo:
                e[n] += 1
            rows.append(e)
    return np.array(rows, dtype=np.int64)


def design_matrix(X, exps):
    X = np.atleast_2d(X)
    # x**0 == 1 keeps the constant column exact
    return np.prod(X[:, None, :] ** exps[None, :, :], axis=2)


def basis_numpy(kind, X, centers, param):
    """Basis matrix ``Phi[m, k] = phi(X[m], centers[k])``."""
    diff = X[:, None, :] - centers[None, :, :]
    if kind == MULTIQUADRIC:
        return np.sqrt(np.sum(diff * diff, axis=2) + param[0] * param[0])
    return np.exp(-np.sum(param * diff * diff, axis=2))


def predict_numpy(form, X):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Phi = basis_numpy(form.kind, X, form.centers, form.param)
    return Phi @ form.weights + design_matrix(X, form.exps) @ form.coefs


@njit
def predict_point(x, kind, centers, weights, param, exps, coefs):
    K, N = centers.shape
    s = 0.0
    if kind == 0:
        psi2 = param[0] * param[0]
        for k in range(K):
            d2 = 0.0
            for n in range(N):
                t = x[n] - centers[k, n]
                d2 += t * t
            s += weights[k] * np.sqrt(d2 + psi2)
    else:
        for k in range(K):
            d2 = 0.0
            for n in range(N):
                t = x[n] - centers[k, n]
                d2 += param[n] * t * t
            s += weights[k] * np.exp(-d2)
    for p in range(exps.shape[0]):
        term = coefs[p]
        for n in range(N):
            e = exps[p, n]
            if e == 1:
                term *= x[n]
            elif e == 2:
                term *= x[n] * x[n]
        s += term
    return s


@njit
def predict_many_numba(X, kind, centers, weights, param, exps, coefs):
    out = np.empty(X.shape[0])
    for m in range(X.shape[0]):
        out[m] = predict_point(X[m], kind, centers, weights, param, exps, coefs)
    return out

"""Multi-start bounded compass search on a surrogate.

Each start runs the same deterministic pattern search in the unit cube:

1. poll ``x + h e_d`` then ``x - h e_d`` for d = 0..N-1, clamping to [0, 1]
   and skipping polls the clamp turns into ``x`` itself;
2. move to the first poll that strictly improves (opportunistic), then
   double ``h`` (capped at ``MAX_STEP``); if no poll improves, halve ``h``;
3. stop when ``h < tol`` or ``budget`` predictions have been spent
   (the value at the start counts as one).

The numba path loops over starts in compiled code using the model's
KernelForm.  The numpy path advances every start in lockstep and asks the
model for batched predictions, so it works for any ``predict``-only model.
Both paths follow the same rules and agree up to floating-point round-off.
"""

import numpy as np

from ._accel import njit, resolve_backend
from .surrogate._kernels import predict_point

INITIAL_STEP = 0.1
MAX_STEP = 0.5
STEP_TOL = 1e-6


@njit
def _compass_numba(starts, budget, h0, tol, kind, centers, weights, param, exps, coefs):
    S, N = starts.shape
    X = starts.copy()
    F = np.empty(S)
    calls = np.zeros(S, dtype=np.int64)
    y = np.empty(N)
    for s in range(S):
        x = X[s]
        fx = predict_point(x, kind, centers, weights, param, exps, coefs)
        c = 1
        h = h0
        while c < budget and h >= tol:
            improved = False
            for j in range(2 * N):
                d = j // 2
                step = h if j % 2 == 0 else -h
                v = x[d] + step
                if v < 0.0:
                    v = 0.0
                elif v > 1.0:
                    v = 1.0
                if v == x[d]:
                    continue
                for n in range(N):
                    y[n] = x[n]
                y[d] = v
                fy = predict_point(y, kind, centers, weights, param, exps, coefs)
                c += 1
                if fy < fx:
                    x[d] = v
                    fx = fy
                    improved = True
                    break
                if c >= budget:
                    break
            if improved:
                h = min(2.0 * h, MAX_STEP)
            else:
                h = 0.5 * h
        F[s] = fx
        calls[s] = c
    return X, F, calls


def _compass_numpy(fun, starts, budget, h0, tol):
    X = np.array(starts, dtype=float, copy=True)
    S, N = X.shape
    F = np.asarray(fun(X), dtype=float).copy()
    calls = np.ones(S, dtype=np.int64)
    H = np.full(S, float(h0))
    running = (calls < budget) & (H >= tol)
    while running.any():
        improved = np.zeros(S, dtype=bool)
        polling = running.copy()
        for j in range(2 * N):
            idx = np.flatnonzero(polling)
            if idx.size == 0:
                break
            d = j // 2
            step = H[idx] if j % 2 == 0 else -H[idx]
            v = np.clip(X[idx, d] + step, 0.0, 1.0)
            moved = v != X[idx, d]
            idx, v = idx[moved], v[moved]
            if idx.size == 0:
                continue
            Y = X[idx].copy()
            Y[:, d] = v
            fy = np.asarray(fun(Y), dtype=float)
            calls[idx] += 1
            better = fy < F[idx]
            win = idx[better]
            X[win, d] = v[better]
            F[win] = fy[better]
            improved[win] = True
            polling[win] = False
            polling[idx[~better & (calls[idx] >= budget)]] = False
        H[running & improved] = np.minimum(2.0 * H[running & improved], MAX_STEP)
        H[running & ~improved] *= 0.5
        running = (calls < budget) & (H >= tol)
    return X, F, calls


def compass_search(model, starts, budget, h0=INITIAL_STEP, tol=STEP_TOL, backend=None):
    """Run the compass search from every start; returns ``(X, F, calls)``."""
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    if starts.shape[0] == 0:
        raise ValueError("at least one start point is required")
    if np.any(starts < 0.0) or np.any(starts > 1.0):
        raise ValueError("start points must lie in the unit cube")
    budget = int(budget)
    backend = resolve_backend(backend)
    form = model.kernel_form() if hasattr(model, "kernel_form") else None
    if backend == "numba" and form is not None:
        return _compass_numba(
            np.ascontiguousarray(starts), budget, float(h0), float(tol), int(form.kind),
            np.ascontiguousarray(form.centers), np.ascontiguousarray(form.weights),
            np.ascontiguousarray(form.param, dtype=float), np.ascontiguousarray(form.exps),
            np.ascontiguousarray(form.coefs),
        )
    fun = model.predict_many if hasattr(model, "predict_many") else model
    return _compass_numpy(fun, starts, budget, h0, tol)


def minimize_surrogate(model, starts, budget=None, backend=None):
    """Best terminal point of a multi-start compass search, clamped to [0, 1].

    ``budget`` is the prediction budget per start (default ``200 N``).  Ties
    between terminal values go to the lowest start index.
    """
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    if budget is None:
        budget = 200 * starts.shape[1]
    X, F, _ = compass_search(model, starts, budget, backend=backend)
    best = int(np.argmin(F))
    return np.clip(X[best], 0.0, 1.0)

import numpy as np
import pytest

from sboc.search import compass_search, minimize_surrogate
from sboc.surrogate import KrigingModel, RbfModel, SurrogateSpec, train_rbf
from sboc.surrogate._kernels import monomial_exponents
from sboc._accel import HAVE_NUMBA
from sboc.core import RngStream

from conftest import SHCB_F, SHCB_X


def quadratic_model(m):
    """Trend-only model equal to sum_n (x_n - m_n)^2."""
    m = np.asarray(m, dtype=float)
    N = m.size
    exps = monomial_exponents(N, 2)
    coefs = np.zeros(exps.shape[0])
    for i, e in enumerate(exps):
        if e.sum() == 0:
            coefs[i] = float(m @ m)
        elif e.sum() == 1:
            coefs[i] = -2.0 * m[int(np.argmax(e))]
        elif e.max() == 2:
            coefs[i] = 1.0
    return KrigingModel(np.zeros((1, N)), [0.0], np.ones(N), coefs, exps=exps)


class PredictOnly:
    """A surrogate exposing only predict_many (no kernel form)."""

    def __init__(self, model):
        self.model = model

    def predict_many(self, X):
        return self.model.predict_many(X)


@pytest.mark.parametrize("N", [1, 2, 4])
def test_convex_quadratic_minimum(N, backend):
    g = np.random.default_rng(N)
    m = g.uniform(0.2, 0.8, N)
    model = quadratic_model(m)
    x = minimize_surrogate(model, g.random((5, N)), backend=backend)
    np.testing.assert_allclose(x, m, atol=1e-4)
    np.testing.assert_allclose(model.predict(m), 0.0, atol=1e-12)


def test_predict_only_model_uses_batched_path():
    m = np.array([0.3, 0.6])
    x = minimize_surrogate(PredictOnly(quadratic_model(m)), np.array([[0.9, 0.1], [0.5, 0.5]]))
    np.testing.assert_allclose(x, m, atol=1e-4)


def test_monotone_surrogate_goes_to_origin(backend):
    model = RbfModel([[0.5, 0.5]], [0.0], [0.0, 1.0, 2.0], 0.1)
    x = minimize_surrogate(model, np.array([[0.7, 0.2], [0.3, 0.9]]), backend=backend)
    np.testing.assert_array_equal(x, [0.0, 0.0])


def test_shcb_fixture_result_no_worse_than_any_start(backend):
    model = train_rbf(SHCB_X, SHCB_F, RngStream(1, "psi"))
    x = minimize_surrogate(model, SHCB_X, backend=backend)
    assert np.all((x >= 0) & (x <= 1))
    assert model.predict(x) <= model.predict(SHCB_X).min() + 1e-12


def test_budget_respected(backend):
    model = quadratic_model([0.5, 0.5, 0.5])
    starts = np.random.default_rng(0).random((4, 3))
    X, F, calls = compass_search(model, starts, budget=17, backend=backend)
    assert np.all(calls <= 17) and np.all(calls >= 1)
    assert np.all(F <= model.predict(starts) + 1e-15)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_backends_agree():
    g = np.random.default_rng(3)
    X, y = g.random((15, 2)), np.sin(5 * g.random(15))
    for kind in ("rbf", "kriging"):
        model = SurrogateSpec(kind).train(X, RngStream(2, "k"), y)
        a = compass_search(model, X, 400, backend="numpy")
        b = compass_search(model, X, 400, backend="numba")
        np.testing.assert_allclose(a[1], b[1], rtol=1e-7, atol=1e-7)


def test_invalid_starts():
    model = quadratic_model([0.5])
    with pytest.raises(ValueError):
        compass_search(model, np.array([[1.5]]), 10)
    with pytest.raises(ValueError):
        compass_search(model, np.empty((0, 1)), 10)

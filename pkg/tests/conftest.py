import numpy as np
import pytest

from sboc._accel import HAVE_NUMBA
from sboc.core import RngStream

# Ten SHCB evaluations (unit-cube x, 4-decimal rounding), a reference walk-through.
SHCB_X = np.array([
    [0.5578, 0.9748], [0.3233, 0.1973], [0.8141, 0.4830], [0.0483, 0.6901],
    [0.7448, 0.0230], [0.3853, 0.8083], [0.8752, 0.5305], [0.2344, 0.2999],
    [0.6171, 0.3739], [0.2576, 0.5810],
])
SHCB_F = np.array([0.0730, 1.0156, 2.3451, 1.0924, 0.9367, -0.4732, 2.2416, 2.2059, 0.4236, 1.9222])
# iteration-1 dataset: initial design plus the surrogate minimizer
SHCB_X11 = np.vstack([SHCB_X, [[0.0, 1.0]]])
SHCB_F11 = np.append(SHCB_F, 1.7333)

BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return RngStream(1234, "test")


def three_blobs(seed, sigma=0.01, per=10):
    g = np.random.default_rng(seed)
    centres = np.array([[0.1, 0.1], [0.9, 0.1], [0.1, 0.9]])
    pts = np.vstack([c + sigma * g.standard_normal((per, 2)) for c in centres])
    truth = np.repeat(np.arange(3), per)
    return np.clip(pts, 0.0, 1.0), truth


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def record_criterion(n, ok, detail):
    ACCEPTANCE[n] = (bool(ok), detail)
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")

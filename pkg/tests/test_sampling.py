import numpy as np
import pytest
from scipy.stats import qmc

from sboc.exceptions import DimensionUnsupported
from sboc.sampling import MAX_DIM, SobolSequence, sobol_points


def test_dim1_skip1_values():
    np.testing.assert_array_equal(sobol_points(1, 4, skip=1).ravel(), [0.5, 0.75, 0.25, 0.375])


@pytest.mark.parametrize("dim", [1, 2, 5, 10, 33, 64])
@pytest.mark.filterwarnings("ignore::UserWarning")
def test_matches_reference_generator(dim):
    ref = qmc.Sobol(dim, scramble=False).random(256)
    np.testing.assert_array_equal(SobolSequence(dim).draw(256), ref)


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_skip_matches_reference_tail():
    ref = qmc.Sobol(3, scramble=False).random(1024 + 40)
    np.testing.assert_array_equal(sobol_points(3, 40, skip=1024), ref[1024:])
    seq = SobolSequence(3, skip=5)
    seq.draw(7)
    seq.fast_forward(100)
    assert seq.next_index == 112
    np.testing.assert_array_equal(seq.draw(3), ref[112:115])


def test_unit_interval_range():
    pts = sobol_points(8, 4096)
    assert pts.min() >= 0.0 and pts.max() < 1.0


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("block_start", [0, 16, 64])
def test_dyadic_stratification_on_aligned_blocks(m, block_start):
    n = 2 ** m
    pts = SobolSequence(2, skip=block_start).draw(n)
    for d in range(2):
        counts = np.bincount(np.floor(pts[:, d] * n).astype(int), minlength=n)
        assert np.all(counts == 1)


def test_no_duplicates():
    pts = sobol_points(3, 2 ** 16, skip=0)
    assert np.unique(pts, axis=0).shape[0] == pts.shape[0]


def test_deterministic():
    np.testing.assert_array_equal(sobol_points(6, 100, skip=3), sobol_points(6, 100, skip=3))


def test_dimension_limits():
    with pytest.raises(DimensionUnsupported):
        SobolSequence(MAX_DIM + 1)
    with pytest.raises(DimensionUnsupported):
        sobol_points(0, 1)
    assert MAX_DIM >= 64

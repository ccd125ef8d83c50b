"""Box domains, the sample archive and reproducible random streams."""

import zlib
from dataclasses import dataclass, field

import numpy as np

from .exceptions import EmptyDataset, OutOfBounds

BOUND_TOL = 1e-12


class BoxDomain:
    """Axis-aligned box ``lower <= x <= upper`` with a unit-cube mapping."""

    def __init__(self, lower, upper):
        lower = np.atleast_1d(np.asarray(lower, dtype=float))
        upper = np.atleast_1d(np.asarray(upper, dtype=float))
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size == 0:
            raise ValueError("lower and upper must be non-empty 1-d arrays of equal length")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("bounds must be finite")
        if np.any(upper <= lower):
            raise ValueError("every dimension needs lower < upper")
        self.lower = lower
        self.upper = upper
        self.lower.flags.writeable = False
        self.upper.flags.writeable = False

    @property
    def dim(self):
        return self.lower.size

    @property
    def width(self):
        return self.upper - self.lower

    @classmethod
    def from_pairs(cls, pairs):
        pairs = np.asarray(pairs, dtype=float).reshape(-1, 2)
        return cls(pairs[:, 0], pairs[:, 1])

    def normalize(self, x_raw):
        return normalize(x_raw, self)

    def denormalize(self, x):
        return denormalize(x, self)

    def __repr__(self):
        return f"BoxDomain(lower={self.lower.tolist()}, upper={self.upper.tolist()})"

    def __eq__(self, other):
        return (
            isinstance(other, BoxDomain)
            and np.array_equal(self.lower, other.lower)
            and np.array_equal(self.upper, other.upper)
        )


def _clamp_checked(u, what):
    if np.any(~np.isfinite(u)):
        raise OutOfBounds(f"{what} has non-finite coordinates")
    if np.any(u < -BOUND_TOL) or np.any(u > 1.0 + BOUND_TOL):
        bad = np.flatnonzero((u < -BOUND_TOL) | (u > 1.0 + BOUND_TOL))
        raise OutOfBounds(f"{what} outside the box in dimension(s) {bad.tolist()}")
    return np.clip(u, 0.0, 1.0)


def normalize(x_raw, domain):
    """Map original-unit coordinates to the unit cube.

    Violations up to 1e-12 of the range are clamped; larger ones raise
    OutOfBounds.  Works on a single point or an (M, N) array.
    """
    x_raw = np.asarray(x_raw, dtype=float)
    if x_raw.shape[-1] != domain.dim:
        raise ValueError(f"expected {domain.dim} coordinates, got {x_raw.shape[-1]}")
    u = (x_raw - domain.lower) / domain.width
    return _clamp_checked(u, "point")


def denormalize(x, domain):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != domain.dim:
        raise ValueError(f"expected {domain.dim} coordinates, got {x.shape[-1]}")
    x = _clamp_checked(x, "normalized point")
    raw = domain.lower + x * domain.width
    # keep the exact endpoints: lower + 1*width may round past upper
    return np.clip(raw, domain.lower, domain.upper)


@dataclass(frozen=True)
class SamplePoint:
    x: np.ndarray
    y: float


class Dataset:
    """Growing archive of evaluated points in normalized coordinates.

    Insertion order is preserved and the incumbent (minimum ``y``, lowest
    index on ties) is tracked incrementally.
    """

    def __init__(self, dim):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(dim)
        self._X = np.empty((16, self.dim))
        self._y = np.empty(16)
        self._n = 0
        self.best_index = -1

    @classmethod
    def from_arrays(cls, X, y):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        ds = cls(X.shape[1])
        for xi, yi in zip(X, np.asarray(y, dtype=float)):
            ds.append(xi, yi)
        return ds

    def __len__(self):
        return self._n

    @property
    def X(self):
        return self._X[: self._n]

    @property
    def y(self):
        return self._y[: self._n]

    @property
    def points(self):
        return [SamplePoint(self._X[i].copy(), float(self._y[i])) for i in range(self._n)]

    def append(self, x, y):
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {x.size}")
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise OutOfBounds("dataset points must lie in the unit cube")
        y = float(y)
        if not np.isfinite(y):
            raise ValueError("objective values stored in a dataset must be finite")
        if self._n == self._X.shape[0]:
            self._X = np.concatenate([self._X, np.empty_like(self._X)])
            self._y = np.concatenate([self._y, np.empty_like(self._y)])
        self._X[self._n] = x
        self._y[self._n] = y
        if self.best_index < 0 or y < self._y[self.best_index]:
            self.best_index = self._n
        self._n += 1
        return self._n - 1

    def copy(self):
        return Dataset.from_arrays(self.X.copy(), self.y.copy())


def incumbent(dataset):
    """Return ``(x_best, f_best)``; lowest insertion index wins ties."""
    if len(dataset) == 0:
        raise EmptyDataset("incumbent of an empty dataset")
    i = dataset.best_index
    return dataset.X[i].copy(), float(dataset.y[i])


def min_separation_ok(x, dataset, eps):
    """True iff ``x`` is farther than ``eps`` from every point in ``dataset``."""
    if len(dataset) == 0:
        return True
    d = np.linalg.norm(dataset.X - np.asarray(x, dtype=float), axis=1)
    return bool(np.all(d > eps))


def default_eps(dim):
    return 1e-4 * np.sqrt(dim)


@dataclass
class RngStream:
    """A labeled random stream derived deterministically from a master seed.

    The generator is PCG64 seeded from ``SeedSequence(seed, spawn_key=(crc32(label),))``,
    which is bit-reproducible across platforms.  Sub-streams are derived with
    :meth:`child`; instances are not meant to be shared between consumers.
    """

    seed: int
    label: str = "root"
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        seed = int(self.seed)
        if seed < 0 or seed >= 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        key = zlib.crc32(self.label.encode("utf-8"))
        ss = np.random.SeedSequence(entropy=seed, spawn_key=(key,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def child(self, label):
        return RngStream(self.seed, f"{self.label}/{label}")

    def __getattr__(self, name):
        # random(), integers(), choice(), permutation(), uniform(), ...
        if name == "generator":
            raise AttributeError(name)
        return getattr(self.generator, name)

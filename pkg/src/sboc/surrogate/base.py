"""Surrogate interface, the trainer registry and model serialization.

A surrogate model is anything with ``predict(X)``.  Models that can describe
themselves as a :class:`~sboc.surrogate._kernels.KernelForm` additionally get
the compiled local-search path.

Serialized models are JSON objects::

    {"format": "sboc-surrogate", "version": 1, "kind": "rbf", ...fields}

Floats are written with ``repr`` precision, so a save/load round trip is exact.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from ..core import Dataset

FORMAT = "sboc-surrogate"
VERSION = 1

_MODEL_TYPES = {}


def register_model_type(cls):
    _MODEL_TYPES[cls.kind] = cls
    return cls


class SurrogateModel:
    kind = "abstract"

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            return float(self.predict_many(X[None, :])[0])
        return self.predict_many(X)

    def predict_many(self, X):
        raise NotImplementedError

    def kernel_form(self):
        return None

    def to_dict(self):
        raise NotImplementedError

    def to_json(self):
        body = {"format": FORMAT, "version": VERSION, "kind": self.kind}
        body.update(self.to_dict())
        return json.dumps(body, indent=1)


def load_model(text):
    body = json.loads(text)
    if body.get("format") != FORMAT:
        raise ValueError("not a serialized sboc surrogate")
    if body.get("version") != VERSION:
        raise ValueError(f"unsupported surrogate format version {body.get('version')}")
    kind = body.pop("kind")
    for key in ("format", "version"):
        body.pop(key)
    return _MODEL_TYPES[kind].from_dict(body)


def _as_xy(data, y):
    if isinstance(data, Dataset):
        return data.X, data.y
    return np.atleast_2d(np.asarray(data, dtype=float)), np.asarray(y, dtype=float)


@dataclass(frozen=True)
class SurrogateType:
    trainer: object
    required_points: object


_REGISTRY = {}


def register_surrogate(name, trainer, required_points):
    """Register a surrogate family.

    ``trainer(X, y, rng, **options)`` returns a fitted model;
    ``required_points(dim)`` is the smallest training-set size it accepts.
    """
    _REGISTRY[name] = SurrogateType(trainer, required_points)


def available_surrogates():
    return sorted(_REGISTRY)


@dataclass
class SurrogateSpec:
    kind: str = "rbf"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _REGISTRY:
            raise ValueError(f"unknown surrogate {self.kind!r}; known: {available_surrogates()}")

    def train(self, data, rng, y=None):
        X, y = _as_xy(data, y)
        return _REGISTRY[self.kind].trainer(X, y, rng, **self.options)

    def required_points(self, dim):
        return int(_REGISTRY[self.kind].required_points(dim))

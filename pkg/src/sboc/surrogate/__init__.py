from . import kriging, rbf
from .base import (
    SurrogateModel,
    SurrogateSpec,
    available_surrogates,
    load_model,
    register_surrogate,
)
from .kriging import KrigingModel, train_kriging
from .rbf import RbfModel, fit_rbf, psi_candidates, train_rbf

register_surrogate("rbf", train_rbf, lambda dim: dim + 2)
register_surrogate("kriging", train_kriging, kriging.required_points)


def predict_rbf(model, x):
    return model.predict(x)


def predict_kriging(model, x):
    return model.predict(x)


__all__ = [
    "KrigingModel",
    "RbfModel",
    "SurrogateModel",
    "SurrogateSpec",
    "available_surrogates",
    "fit_rbf",
    "load_model",
    "predict_kriging",
    "predict_rbf",
    "psi_candidates",
    "register_surrogate",
    "train_kriging",
    "train_rbf",
]

"""Surrogate-based optimization via clustering for box-constrained black boxes."""

__version__ = "0.1.0"

from .core import BoxDomain, Dataset, RngStream, incumbent
from .engine import RunResult, SbocConfig, eta_for_iteration, exploitation_point, run
from .sampling import SobolSequence, sobol_points
from .search import minimize_surrogate
from .surrogate import SurrogateSpec, load_model

__all__ = [
    "BoxDomain", "Dataset", "RngStream", "incumbent", "RunResult", "SbocConfig",
    "eta_for_iteration", "exploitation_point", "run", "SobolSequence", "sobol_points",
    "minimize_surrogate", "SurrogateSpec", "load_model",
]

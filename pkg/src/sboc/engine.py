"""The optimization loop: surrogate minimum, exploration, exploitation."""

import csv
import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .clustering import ELBOW_THRESHOLD, elbow_select, exploration_point, kmeans
from .core import BoxDomain, Dataset, RngStream, default_eps, incumbent, min_separation_ok, normalize
from .exceptions import (
    DegenerateSpread,
    IllConditioned,
    ObjectiveFailure,
    SingularSystem,
    SurrogateFailure,
    TooFewPoints,
)
from .sampling import SobolSequence
from .search import minimize_surrogate
from .surrogate import SurrogateSpec

log = logging.getLogger(__name__)

ETA_SCHEDULE = (0.5, 1.5, 2.5, 5.0, 10.0)
STALL_LIMIT = 5

INITIAL = "initial"
AUGMENT = "augment"
SURROGATE_MIN = "surrogate-min"
EXPLORE = "explore"
EXPLOIT = "exploit"


@dataclass
class SbocConfig:
    """Run settings; ``None`` fields take their dimension-dependent defaults.

    Defaults: ``k_max = 100 N``, ``k0 = 5 N``, ``eps = 1e-4 sqrt(N)``,
    ``search_budget = 200 N`` surrogate predictions per local-search start.
    ``sobol_skip=None`` derives the initial-design offset from the seed.
    """

    k_max: int = None
    k0: int = None
    eps: float = None
    eta_schedule: tuple = ETA_SCHEDULE
    elbow_threshold: float = ELBOW_THRESHOLD
    neighborhood_fraction: float = 0.2
    surrogate: SurrogateSpec = field(default_factory=SurrogateSpec)
    search_budget: int = None
    seed: int = 0
    sobol_skip: int = None
    backend: str = None

    def resolved(self, dim):
        cfg = SbocConfig(**{f: getattr(self, f) for f in self.__dataclass_fields__})
        if cfg.k_max is None:
            cfg.k_max = 100 * dim
        if cfg.k0 is None:
            cfg.k0 = 5 * dim
        if cfg.eps is None:
            cfg.eps = default_eps(dim)
        if cfg.search_budget is None:
            cfg.search_budget = 200 * dim
        if isinstance(cfg.surrogate, str):
            cfg.surrogate = SurrogateSpec(cfg.surrogate)
        cfg.eta_schedule = tuple(float(e) for e in cfg.eta_schedule)
        cfg.validate(dim)
        return cfg

    def validate(self, dim):
        if self.k0 < 1 or self.k_max < 1:
            raise ValueError("k0 and k_max must be positive")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if not self.eta_schedule or min(self.eta_schedule) <= 0:
            raise ValueError("eta schedule must be non-empty and positive")
        if not 0 < self.neighborhood_fraction <= 1:
            raise ValueError("neighborhood fraction must be in (0, 1]")
        if self.search_budget < 1:
            raise ValueError("search budget must be positive")


@dataclass
class AddedPoint:
    strategy: str
    x: np.ndarray
    f: float
    k: int


@dataclass
class IterationRecord:
    iteration: int
    added: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    x_best: np.ndarray = None
    f_best: float = None
    n_clusters: int = None
    eta: float = None
    neighborhood_size: int = None


@dataclass
class RunResult:
    domain: BoxDomain
    X: np.ndarray
    y: np.ndarray
    strategies: list
    iteration_of: list
    iterations: list
    x_best: np.ndarray
    f_best: float
    stop_reason: str = "budget"

    @property
    def n_evals(self):
        return len(self.y)

    @property
    def x_best_raw(self):
        return self.domain.denormalize(self.x_best)

    @property
    def best_so_far(self):
        return np.minimum.accumulate(self.y)

    def trace_rows(self):
        """One row per evaluation: iter, K, strategy, x, f, incumbent x, incumbent f."""
        best = 0
        for k in range(self.n_evals):
            if self.y[k] < self.y[best]:
                best = k
            yield (self.iteration_of[k], k + 1, self.strategies[k], self.X[k], self.y[k],
                   self.X[best], self.y[best])

    def trace_csv(self):
        N = self.X.shape[1]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter", "K", "strategy"] + [f"x{n + 1}" for n in range(N)] + ["f"]
                   + [f"xbest{n + 1}" for n in range(N)] + ["fbest"])
        for it, k, strat, x, f, xb, fb in self.trace_rows():
            w.writerow([it, k, strat] + [repr(float(v)) for v in x] + [repr(float(f))]
                       + [repr(float(v)) for v in xb] + [repr(float(fb))])
        return buf.getvalue()

    def write_trace(self, path):
        with open(path, "w", newline="") as fh:
            fh.write(self.trace_csv())


def eta_for_iteration(i, schedule=ETA_SCHEDULE):
    if i < 1:
        raise ValueError("iterations are numbered from 1")
    return schedule[(i - 1) % len(schedule)]


def neighborhood(dataset, fraction):
    """Indices of the ``ceil(fraction K)`` points nearest the incumbent (ties by index)."""
    K = len(dataset)
    size = min(K, max(1, math.ceil(fraction * K - 1e-12)))
    xb, _ = incumbent(dataset)
    d = np.linalg.norm(dataset.X - xb, axis=1)
    return np.argsort(d, kind="stable")[:size]


def exploitation_weights(f_values, f_best, eta):
    """``w ∝ exp(-sqrt((f - f_best) / eta))`` normalized to sum to one."""
    excess = np.maximum(np.asarray(f_values, dtype=float) - f_best, 0.0)
    logits = -np.sqrt(excess / eta)
    w = np.exp(logits - logits.max())
    return w / w.sum()


def exploitation_point(dataset, eta, fraction=0.2, eps=None, return_details=False):
    """Weighted combination of the incumbent's neighbours, or None if too close.

    With ``return_details`` the result is ``(candidate_or_None, LN indices, weights)``.
    """
    if len(dataset) < 2:
        raise ValueError("exploitation needs at least two points")
    if eta <= 0:
        raise ValueError("eta must be positive")
    if eps is None:
        eps = default_eps(dataset.dim)
    ln = neighborhood(dataset, fraction)
    _, f_best = incumbent(dataset)
    w = exploitation_weights(dataset.y[ln], f_best, eta)
    cand = np.clip(w @ dataset.X[ln], 0.0, 1.0)
    if not min_separation_ok(cand, dataset, eps):
        cand = None
    if return_details:
        return cand, ln, w
    return cand


class _Run:
    def __init__(self, objective, domain, cfg):
        self.objective = objective
        self.domain = domain
        self.cfg = cfg
        self.dataset = Dataset(domain.dim)
        self.strategies = []
        self.iteration_of = []
        self.iterations = []
        self.rng = RngStream(cfg.seed, "sboc")

    def result(self, reason):
        xb, fb = incumbent(self.dataset) if len(self.dataset) else (None, None)
        return RunResult(
            self.domain, self.dataset.X.copy(), self.dataset.y.copy(), list(self.strategies),
            list(self.iteration_of), list(self.iterations), xb, fb, reason,
        )

    def evaluate(self, x, strategy, iteration):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        raw = self.domain.denormalize(x)
        try:
            f = float(self.objective(raw))
        except ObjectiveFailure as exc:
            raise type(exc)(str(exc), partial=self.result("objective-failure")) from exc
        except Exception as exc:
            raise ObjectiveFailure(f"objective raised {exc!r} at {raw.tolist()}",
                                   partial=self.result("objective-failure")) from exc
        if not math.isfinite(f):
            raise ObjectiveFailure(f"objective returned {f} at {raw.tolist()}",
                                   partial=self.result("objective-failure"))
        k = self.dataset.append(x, f)
        self.strategies.append(strategy)
        self.iteration_of.append(iteration)
        return AddedPoint(strategy, x.copy(), f, k + 1)

    def sobol(self, skip):
        return SobolSequence(self.domain.dim, skip=skip)

    def initial_design(self, init_points):
        cfg = self.cfg
        if init_points is not None:
            pts = normalize(np.atleast_2d(np.asarray(init_points, dtype=float)), self.domain)
            self._sobol = self.sobol(cfg.sobol_skip if cfg.sobol_skip is not None else 1)
        else:
            skip = cfg.sobol_skip
            if skip is None:
                block = 1 << max(cfg.k0 - 1, 1).bit_length()
                skip = block * int(self.rng.child("initial").integers(1, 257))
            self._sobol = self.sobol(skip)
            pts = self._sobol.draw(cfg.k0)
        for x in pts:
            self.evaluate(x, INITIAL, 0)

    def train(self, i):
        return self.cfg.surrogate.train(self.dataset, self.rng.child(f"surrogate/{i}"))

    def first_model(self):
        """Train at iteration 1, topping up with Sobol points if the design is too small."""
        try:
            return self.train(1)
        except (TooFewPoints, SingularSystem, IllConditioned) as exc:
            need = self.cfg.surrogate.required_points(self.domain.dim)
            extra = max(0, need - len(self.dataset))
            log.info("initial surrogate failed (%s); adding %d Sobol points", exc, extra)
            if extra == 0 and not isinstance(exc, TooFewPoints):
                raise SurrogateFailure(f"surrogate training failed at iteration 1: {exc}") from exc
            for x in self._sobol.draw(max(extra, 1)):
                if min_separation_ok(x, self.dataset, 0.0):
                    self.evaluate(x, AUGMENT, 0)
        try:
            return self.train(1)
        except (TooFewPoints, SingularSystem, IllConditioned) as exc:
            raise SurrogateFailure(f"surrogate training failed at iteration 1: {exc}") from exc

    def add_if_separated(self, rec, x, strategy, i):
        if x is None:
            rec.skipped.append((strategy, "too-close"))
            return
        if not min_separation_ok(x, self.dataset, self.cfg.eps):
            rec.skipped.append((strategy, "too-close"))
            return
        rec.added.append(self.evaluate(x, strategy, i))

    def cluster(self, i):
        rng = self.rng.child(f"kmeans/{i}")
        X = self.dataset.X
        try:
            return elbow_select(X, rng, self.cfg.elbow_threshold, backend=self.cfg.backend)
        except DegenerateSpread:
            return 2, kmeans(X, 2, rng, backend=self.cfg.backend)

    def iterate(self, i, model):
        cfg = self.cfg
        rec = IterationRecord(i)
        if model is None:
            try:
                model = self.train(i)
            except (SingularSystem, IllConditioned, TooFewPoints) as exc:
                log.warning("iteration %d: surrogate training failed (%s)", i, exc)
                rec.skipped.append((SURROGATE_MIN, "surrogate-failed"))
        if model is not None:
            x_hat = minimize_surrogate(model, self.dataset.X, cfg.search_budget, backend=cfg.backend)
            self.add_if_separated(rec, x_hat, SURROGATE_MIN, i)

        C, clustering = self.cluster(i)
        rec.n_clusters = C
        self.add_if_separated(rec, exploration_point(clustering, self.dataset.X), EXPLORE, i)

        eta = eta_for_iteration(i, cfg.eta_schedule)
        rec.eta = eta
        cand, ln, _ = exploitation_point(
            self.dataset, eta, cfg.neighborhood_fraction, cfg.eps, return_details=True
        )
        rec.neighborhood_size = len(ln)
        self.add_if_separated(rec, cand, EXPLOIT, i)

        rec.x_best, rec.f_best = incumbent(self.dataset)
        self.iterations.append(rec)
        return rec


def run(objective, domain, config=None, init_points=None, callback=None):
    """Minimize ``objective`` (called with original-unit coordinates) over ``domain``.

    ``init_points`` (original units) replaces the Sobol initial design.  The
    budget is checked at the end of each iteration, so up to two evaluations
    beyond ``k_max`` can occur.  Five consecutive iterations without any new
    point stop the run early (``stop_reason == "stalled"``).
    """
    if not isinstance(domain, BoxDomain):
        domain = BoxDomain.from_pairs(domain)
    cfg = (config or SbocConfig()).resolved(domain.dim)
    state = _Run(objective, domain, cfg)
    state.initial_design(init_points)
    if len(state.dataset) >= cfg.k_max:
        return state.result("budget")
    model = state.first_model()
    i = 0
    stalled = 0
    while True:
        i += 1
        rec = state.iterate(i, model)
        model = None
        if callback is not None:
            callback(rec)
        stalled = 0 if rec.added else stalled + 1
        if len(state.dataset) >= cfg.k_max:
            return state.result("budget")
        if stalled >= STALL_LIMIT:
            log.warning("no new point for %d iterations; stopping", stalled)
            return state.result("stalled")

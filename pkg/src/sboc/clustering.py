"""k-means with elbow selection of the cluster count, and the exploration rule.

Dispersion is measured as in the optimizer's definition: ICSD of a cluster
is the sum of plain Euclidean distances of its members to the centroid, and
TICSD is the sum over clusters.
"""

from dataclasses import dataclass

import numpy as np

from ._accel import njit, resolve_backend
from .exceptions import DegenerateSpread, TooFewPoints

RESTARTS = 10
MAX_LLOYD = 100
ELBOW_THRESHOLD = 0.10
MAX_CLUSTERS = 12


@dataclass
class Clustering:
    labels: np.ndarray
    centroids: np.ndarray
    icsd: np.ndarray
    iterations: int = 0
    converged: bool = True

    @property
    def n_clusters(self):
        return self.centroids.shape[0]

    @property
    def ticsd(self):
        return float(np.sum(self.icsd))

    def members(self, c):
        return np.flatnonzero(self.labels == c)


def icsd(points, labels, centroids):
    d = np.linalg.norm(points - centroids[labels], axis=1)
    return np.bincount(labels, weights=d, minlength=centroids.shape[0])


def _centroids(points, labels, C):
    counts = np.bincount(labels, minlength=C).astype(float)
    sums = np.zeros((C, points.shape[1]))
    np.add.at(sums, labels, points)
    return sums / counts[:, None]


def _lloyd_numpy(points, init, max_iter):
    C = init.shape[0]
    cent = init.copy()
    labels = np.full(points.shape[0], -1, dtype=np.int64)
    it = 0
    converged = False
    while it < max_iter:
        it += 1
        d2 = np.sum((points[:, None, :] - cent[None, :, :]) ** 2, axis=2)
        new = np.argmin(d2, axis=1)
        own = d2[np.arange(new.size), new]
        counts = np.bincount(new, minlength=C)
        for c in np.flatnonzero(counts == 0):
            # reseed an empty cluster at the point farthest from its centroid,
            # never emptying a singleton in the process
            far = int(np.argmax(np.where(counts[new] > 1, own, -1.0)))
            counts[new[far]] -= 1
            new[far] = c
            counts[c] = 1
            own[far] = 0.0
            cent[c] = points[far]
        if np.array_equal(new, labels):
            converged = True
            break
        labels = new
        cent = _centroids(points, labels, C)
    return labels, cent, it, converged


@njit
def _lloyd_numba(points, init, max_iter):
    M, N = points.shape
    C = init.shape[0]
    cent = init.copy()
    labels = np.full(M, -1, dtype=np.int64)
    new = np.empty(M, dtype=np.int64)
    own = np.empty(M)
    counts = np.zeros(C, dtype=np.int64)
    it = 0
    converged = False
    while it < max_iter:
        it += 1
        counts[:] = 0
        for m in range(M):
            best = np.inf
            arg = 0
            for c in range(C):
                d2 = 0.0
                for n in range(N):
                    t = points[m, n] - cent[c, n]
                    d2 += t * t
                if d2 < best:
                    best = d2
                    arg = c
            new[m] = arg
            own[m] = best
            counts[arg] += 1
        for c in range(C):
            if counts[c] == 0:
                far = -1
                fd = -1.0
                for m in range(M):
                    if counts[new[m]] > 1 and own[m] > fd:
                        fd = own[m]
                        far = m
                counts[new[far]] -= 1
                new[far] = c
                counts[c] = 1
                own[far] = 0.0
                for n in range(N):
                    cent[c, n] = points[far, n]
        same = True
        for m in range(M):
            if new[m] != labels[m]:
                same = False
                break
        if same:
            converged = True
            break
        labels[:] = new
        cent[:, :] = 0.0
        for m in range(M):
            for n in range(N):
                cent[labels[m], n] += points[m, n]
        for c in range(C):
            for n in range(N):
                cent[c, n] /= counts[c]
    return labels, cent, it, converged


def kmeans_pp_init(points, C, rng):
    """k-means++ seeding: first centre uniform, then proportional to D^2."""
    M = points.shape[0]
    chosen = [int(rng.integers(M))]
    d2 = np.sum((points - points[chosen[0]]) ** 2, axis=1)
    for _ in range(1, C):
        total = d2.sum()
        if total <= 0.0:
            free = np.setdiff1d(np.arange(M), chosen)
            nxt = int(free[rng.integers(free.size)])
        else:
            nxt = int(np.searchsorted(np.cumsum(d2), rng.random() * total, side="right"))
            nxt = min(nxt, M - 1)
        chosen.append(nxt)
        d2 = np.minimum(d2, np.sum((points - points[nxt]) ** 2, axis=1))
    return points[chosen].copy()


def kmeans(points, C, rng, restarts=RESTARTS, max_iter=MAX_LLOYD, backend=None):
    """Best of ``restarts`` Lloyd runs by TICSD (first restart wins ties)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    M = points.shape[0]
    if C < 1:
        raise ValueError("cluster count must be >= 1")
    if C > M:
        raise TooFewPoints(f"cannot form {C} clusters from {M} points")
    lloyd = _lloyd_numba if resolve_backend(backend) == "numba" else _lloyd_numpy
    best = None
    for _ in range(restarts):
        init = kmeans_pp_init(points, C, rng)
        labels, cent, it, conv = lloyd(np.ascontiguousarray(points), init, max_iter)
        cand = Clustering(np.asarray(labels), np.asarray(cent), icsd(points, labels, cent), it, conv)
        if best is None or cand.ticsd < best.ticsd:
            best = cand
    return best


def ticsd_one(points):
    points = np.atleast_2d(points)
    return float(np.sum(np.linalg.norm(points - points.mean(axis=0), axis=1)))


def elbow_from_curve(curve, threshold=ELBOW_THRESHOLD):
    """Pick the cluster count from a TICSD curve.

    ``curve[c - 1]`` is TICSD for ``c`` clusters, c = 1..C_max+1.  The curve is
    clamped to be non-increasing, then the smallest C >= 2 whose drop to C+1
    is below ``threshold`` times the first drop is returned; if none
    qualifies the largest searched C is returned.
    """
    curve = np.minimum.accumulate(np.asarray(curve, dtype=float))
    if curve.size < 3:
        raise ValueError("need TICSD for at least C = 1, 2, 3")
    first = curve[0] - curve[1]
    if first <= 1e-12 * curve[0]:
        raise DegenerateSpread("TICSD does not drop from one to two clusters")
    c_max = curve.size - 1
    for C in range(2, c_max + 1):
        if (curve[C - 1] - curve[C]) / first < threshold:
            return C
    return c_max


def elbow_select(points, rng, threshold=ELBOW_THRESHOLD, max_clusters=MAX_CLUSTERS, backend=None):
    """Elbow choice of C and the k-means clustering at that C.

    Raises DegenerateSpread when the first TICSD drop vanishes; callers fall
    back to two clusters.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    M = points.shape[0]
    if M < 4:
        raise TooFewPoints("elbow selection needs at least 4 points")
    c_max = min(M - 1, max_clusters)
    curve = [ticsd_one(points)]
    fits = {}
    for C in range(2, c_max + 2):
        fits[C] = kmeans(points, C, rng, backend=backend)
        curve.append(fits[C].ticsd)
    C = elbow_from_curve(curve, threshold)
    return C, fits[C]


def inter_cluster_distance(clustering, points, u, v):
    """Closest member pair between clusters ``u`` and ``v``.

    Returns ``(d, p, q)`` with global point indices; ties go to the
    lexicographically smallest ``(p, q)``.
    """
    if u == v:
        raise ValueError("u and v must differ")
    points = np.atleast_2d(points)
    pu, pv = clustering.members(u), clustering.members(v)
    if pu.size == 0 or pv.size == 0:
        raise ValueError("clusters must be non-empty")
    D = np.linalg.norm(points[pu][:, None, :] - points[pv][None, :, :], axis=2)
    # members() is sorted, so argmin's row-major first hit is the smallest pair
    i, j = np.unravel_index(int(np.argmin(D)), D.shape)
    return float(D[i, j]), int(pu[i]), int(pv[j])


def exploration_point(clustering, points):
    """Midpoint of the closest pair between the farthest nearest-neighbour clusters."""
    points = np.atleast_2d(points)
    C = clustering.n_clusters
    if C < 2:
        raise ValueError("exploration needs at least two clusters")
    icd = {}
    for u in range(C):
        for v in range(u + 1, C):
            icd[u, v] = inter_cluster_distance(clustering, points, u, v)
    pairs = set()
    for c in range(C):
        dists = [(icd[min(c, v), max(c, v)][0], v) for v in range(C) if v != c]
        nearest = min(dists)[1]
        pairs.add((min(c, nearest), max(c, nearest)))
    # largest ICD first, then the smallest cluster indices
    u, v = min(pairs, key=lambda p: (-icd[p][0], p))
    _, p, q = icd[u, v]
    return 0.5 * (points[p] + points[q])

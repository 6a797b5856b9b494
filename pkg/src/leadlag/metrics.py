"""Pairwise dependence estimators and their numerical substrate.

Three metrics quantify how strongly one lagged series relates to another:

* absolute Pearson correlation,
* mutual information via the Kraskov-Stoegbauer-Grassberger (KSG) k-nearest-
  neighbor estimator (Kraskov et al., 2004, Phys. Rev. E 69, 066138),
* transfer entropy, computed as the difference of two KSG mutual-information
  terms, T(X->Y) = I(Y_t ; X_past, Y_past) - I(Y_t ; Y_past).

All estimators are pure functions: identical inputs and config (including the
seed) give bit-identical outputs regardless of evaluation order or worker
count. Tie-breaking jitter comes from a counter-based generator keyed by
(seed, variable, lag, sample index), never by evaluation order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import DataError, UsageError
from .ingest import AlignedPair

_EULER_GAMMA = 0.5772156649015328606

# Bernoulli-number coefficients of the asymptotic series
# psi(x) ~ ln x - 1/(2x) - sum_j c_j / x^(2j).
_ASYMPTOTIC_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
)

# Points at or above this count use the KD-tree counting path; it matches the
# brute-force reference bit-for-bit (Chebyshev distances are exact max/abs).
_TREE_CUTOVER = 512


class MetricKind(enum.Enum):
    """Edge metric selecting how pairwise dependence is scored."""

    CORRELATION = "correlation"
    MUTUAL_INFORMATION = "mi"
    TRANSFER_ENTROPY = "te"


@dataclass(frozen=True)
class EstimatorConfig:
    """Shared knobs for the kNN estimators.

    k_neighbors: neighbor count of the KSG estimator (3 keeps bias low).
    embedding_length: past steps conditioned on by transfer entropy.
    jitter_scale: tie-breaking noise, as a fraction of each series' spread.
    seed: keys the deterministic jitter stream.
    clip_negative: return max(0, estimate) for MI/TE.
    """

    k_neighbors: int = 3
    embedding_length: int = 1
    jitter_scale: float = 1e-10
    seed: int = 0
    clip_negative: bool = True

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise UsageError("k_neighbors must be >= 1")
        if self.embedding_length < 1:
            raise UsageError("embedding_length must be >= 1")
        if self.jitter_scale < 0:
            raise UsageError("jitter_scale must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must fit in 64 bits")


def digamma(x):
    """Digamma psi(x) for x > 0, scalar or array.

    Upward recurrence to x >= 10, then the asymptotic series; absolute error
    below 1e-12 for x >= 1.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise UsageError("digamma requires x > 0")
    value = np.zeros_like(arr)
    work = arr.copy()
    mask = work < 10.0
    while np.any(mask):
        value[mask] -= 1.0 / work[mask]
        work[mask] += 1.0
        mask = work < 10.0
    inv2 = 1.0 / (work * work)
    series = np.zeros_like(work)
    for coeff in reversed(_ASYMPTOTIC_COEFFS):
        series = (series + coeff) * inv2
    value += np.log(work) - 0.5 / work - series
    return float(value) if np.isscalar(x) or np.ndim(x) == 0 else value


def jitter_stream(seed: int, var: int, lag: int, n: int, offset: int = 0) -> np.ndarray:
    """Uniform [0,1) tie-breaking draws for samples offset..offset+n-1 of the
    (var, lag) series.

    Counter-based (Philox) and keyed by identity, so a series carries the
    same jitter into every pair it joins and results cannot depend on
    evaluation order.
    """
    key = np.array([seed, (var << 32) ^ lag], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    return rng.random(offset + n)[offset:]


def _jittered(values: np.ndarray, ident: tuple[int, int], offset: int,
              cfg: EstimatorConfig) -> np.ndarray:
    if cfg.jitter_scale == 0.0:
        return values
    spread = float(np.std(values))
    if spread == 0.0:
        spread = 1.0  # constant series still needs its ties broken
    noise = jitter_stream(cfg.seed, ident[0], ident[1], values.shape[0], offset)
    return values + cfg.jitter_scale * spread * noise


def _chebyshev_matrix(points: np.ndarray) -> np.ndarray:
    """Dense pairwise Chebyshev (max-coordinate) distances, shape (n, n)."""
    pts = np.atleast_2d(points.T).T if points.ndim == 1 else points
    dist = np.abs(pts[:, None, 0] - pts[None, :, 0])
    for dim in range(1, pts.shape[1]):
        np.maximum(dist, np.abs(pts[:, None, dim] - pts[None, :, dim]), out=dist)
    return dist


def neighbor_counts(points: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """For each point, how many OTHER points lie strictly inside its radius.

    Brute force over all pairs under the Chebyshev metric; this is the
    reference path that any accelerated index must reproduce exactly.
    """
    points = np.asarray(points, dtype=float)
    radii = np.asarray(radii, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if radii.shape != (points.shape[0],):
        raise UsageError("need one radius per point")
    if np.any(radii <= 0.0):
        raise UsageError("radii must be positive")
    dist = _chebyshev_matrix(points)
    counts = (dist < radii[:, None]).sum(axis=1) - 1  # drop the point itself
    return counts.astype(np.int64)


def neighbor_counts_tree(points: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """KD-tree accelerated strict-inequality counting; equals brute force."""
    points = np.asarray(points, dtype=float)
    radii = np.asarray(radii, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if np.any(radii <= 0.0):
        raise UsageError("radii must be positive")
    tree = cKDTree(points)
    # query_ball_point counts distance <= r; shrink each radius to the
    # previous float so the closed ball equals the open one at radii[i].
    strict = np.nextafter(radii, 0.0)
    counts = tree.query_ball_point(points, strict, p=np.inf, return_length=True)
    return np.asarray(counts, dtype=np.int64) - 1


def _count_within(points: np.ndarray, radii: np.ndarray) -> np.ndarray:
    if points.shape[0] >= _TREE_CUTOVER:
        return neighbor_counts_tree(points, radii)
    return neighbor_counts(points, radii)


def _kth_neighbor_distance(points: np.ndarray, k: int) -> np.ndarray:
    """Distance from each point to its k-th nearest neighbor (Chebyshev)."""
    n = points.shape[0]
    if n >= _TREE_CUTOVER:
        tree = cKDTree(points)
        dist, _ = tree.query(points, k=k + 1, p=np.inf)
        return dist[:, k]
    dist = _chebyshev_matrix(points)
    np.fill_diagonal(dist, np.inf)
    return np.partition(dist, k - 1, axis=1)[:, k - 1]


def _ksg_mi_nats(a: np.ndarray, b: np.ndarray, k: int) -> float:
    """KSG estimator I^(1) for column-stacked samples a (n,da), b (n,db)."""
    n = a.shape[0]
    joint = np.hstack((a, b))
    eps = _kth_neighbor_distance(joint, k)
    n_a = _count_within(a, eps)
    n_b = _count_within(b, eps)
    correction = np.mean(digamma(n_a + 1.0) + digamma(n_b + 1.0))
    return digamma(k) + digamma(n) - float(correction)


def pearson_abs(pair: AlignedPair) -> float:
    """Absolute Pearson correlation of the aligned pair, in [0, 1]."""
    if pair.n < 3:
        raise DataError(f"correlation needs >= 3 samples, got {pair.n}")
    dx = pair.xs - pair.xs.mean()
    dy = pair.ys - pair.ys.mean()
    var_x = float(dx @ dx)
    var_y = float(dy @ dy)
    if var_x == 0.0:
        raise DataError(f"degenerate series: variable {pair.id_x} has zero variance")
    if var_y == 0.0:
        raise DataError(f"degenerate series: variable {pair.id_y} has zero variance")
    r = float(dx @ dy) / math.sqrt(var_x * var_y)
    return min(abs(r), 1.0)


def ksg_mutual_information(pair: AlignedPair, cfg: EstimatorConfig = EstimatorConfig()) -> float:
    """KSG mutual information of the aligned pair, in nats.

    Jitters both series (keyed to their own identities), takes each point's
    k-th neighbor distance in the joint space under the Chebyshev metric,
    counts strict marginal neighbors, and applies
    psi(k) + psi(n) - <psi(n_x+1) + psi(n_y+1)>. Clipped at 0 when configured.
    """
    n = pair.n
    if n < cfg.k_neighbors + 1:
        raise DataError(
            f"mutual information needs n >= k+1 = {cfg.k_neighbors + 1}, got {n}"
        )
    x = _jittered(pair.xs, pair.id_x, pair.offset_x, cfg)[:, None]
    y = _jittered(pair.ys, pair.id_y, pair.offset_y, cfg)[:, None]
    estimate = _ksg_mi_nats(x, y, cfg.k_neighbors)
    return max(0.0, estimate) if cfg.clip_negative else estimate


def _embed_past(series: np.ndarray, length: int, n_rows: int) -> np.ndarray:
    """Rows t = length..end of [series[t-1], ..., series[t-length]]."""
    cols = [series[length - 1 - p : length - 1 - p + n_rows] for p in range(length)]
    return np.column_stack(cols)


def transfer_entropy(
    source: np.ndarray,
    target: np.ndarray,
    cfg: EstimatorConfig = EstimatorConfig(),
    source_id: tuple[int, int] = (0, 0),
    target_id: tuple[int, int] = (1, 0),
    source_offset: int = 0,
    target_offset: int = 0,
) -> float:
    """Transfer entropy T(source -> target) in nats.

    With embedding length l, computes
    I(Y_t ; [X_{t-1..t-l}, Y_{t-1..t-l}]) - I(Y_t ; Y_{t-1..t-l}), both terms
    by the multivariate KSG estimator on the jittered, time-aligned samples.
    Clipped at 0 when configured.
    """
    source = np.asarray(source, dtype=float)
    target = np.asarray(target, dtype=float)
    if source.shape != target.shape or source.ndim != 1:
        raise DataError("source and target must be equal-length vectors")
    n = source.shape[0]
    l = cfg.embedding_length
    if n < cfg.k_neighbors + l + 2:
        raise DataError(
            f"transfer entropy needs n >= k+l+2 = {cfg.k_neighbors + l + 2}, got {n}"
        )
    x = _jittered(source, source_id, source_offset, cfg)
    y = _jittered(target, target_id, target_offset, cfg)

    n_rows = n - l
    y_now = y[l:][:, None]
    y_past = _embed_past(y, l, n_rows)
    x_past = _embed_past(x, l, n_rows)
    joint_past = np.hstack((x_past, y_past))

    k = cfg.k_neighbors
    estimate = _ksg_mi_nats(y_now, joint_past, k) - _ksg_mi_nats(y_now, y_past, k)
    return max(0.0, estimate) if cfg.clip_negative else estimate

"""Lead-lag graph construction and variable-level aggregation.

Nodes are (variable, lag) pairs. A directed edge runs from every higher-lag
node to every lower-lag node of a *different* variable, carrying the raw
dependence value of the time-aligned overlap plus the lag distance
D = k - m. Edge weight at decay a is raw * a**D, evaluated on demand so one
expensive estimation pass serves a whole sweep over a.

Aggregation merges all lags of a variable into one node and sums the decayed
weights per ordered variable pair (toward-lead orientation); reverse()
transposes to the toward-lag orientation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DataError, UsageError
from .ingest import LaggedPanel, align_pair
from .metrics import (
    EstimatorConfig,
    MetricKind,
    ksg_mutual_information,
    pearson_abs,
    transfer_entropy,
)


@dataclass(frozen=True)
class NodeId:
    var: int
    lag: int

    def label(self, names: tuple[str, ...]) -> str:
        return f"{names[self.var]}@lag{self.lag}"


@dataclass(frozen=True)
class LeadLagEdge:
    """Directed edge from the higher-lag node to the lower-lag node."""

    src: NodeId
    dst: NodeId
    raw: float
    lag_distance: int

    def weight(self, a: float) -> float:
        return edge_weight(self.raw, self.lag_distance, a)


@dataclass(frozen=True)
class LeadLagGraph:
    variable_names: tuple[str, ...]
    max_lag: int
    metric: MetricKind
    config: EstimatorConfig
    edges: tuple[LeadLagEdge, ...]

    @property
    def n_variables(self) -> int:
        return len(self.variable_names)

    @property
    def n_nodes(self) -> int:
        return self.n_variables * (self.max_lag + 1)

    def nodes(self) -> list[NodeId]:
        return [
            NodeId(i, k)
            for i in range(self.n_variables)
            for k in range(self.max_lag + 1)
        ]


@dataclass(frozen=True)
class AggregatedGraph:
    """Variable-level graph with summed directed weights, zero diagonal."""

    variable_names: tuple[str, ...]
    weights: np.ndarray  # (V, V), weights[i, j] = total weight of edges i -> j
    orientation: str  # "toward-lead" (as built) or "toward-lag" (reversed)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        v = len(self.variable_names)
        if w.shape != (v, v):
            raise DataError("weight matrix shape does not match variable count")
        if np.any(w < 0):
            raise DataError("aggregated weights must be non-negative")
        if np.any(np.diag(w) != 0):
            raise DataError("aggregated diagonal must be zero")
        if self.orientation not in ("toward-lead", "toward-lag"):
            raise UsageError(f"unknown orientation '{self.orientation}'")

    @property
    def n_variables(self) -> int:
        return len(self.variable_names)


def admissible_pairs(n_variables: int, max_lag: int):
    """Ordered (i, k) -> (j, m) pairs with k > m and i != j, in canonical
    (i, k, j, m) order; same-variable pairs are never connected."""
    for i in range(n_variables):
        for k in range(1, max_lag + 1):
            for j in range(n_variables):
                if j == i:
                    continue
                for m in range(k):
                    yield (i, k, j, m)


def expected_edge_count(n_variables: int, max_lag: int) -> int:
    """Edge count of a fully connected (no zero raws) correlation graph."""
    return n_variables * (n_variables - 1) * (max_lag + 1) * max_lag // 2


def _edge_raw(panel: LaggedPanel, metric: MetricKind, cfg: EstimatorConfig,
              i: int, k: int, j: int, m: int) -> float:
    pair = align_pair(panel, (i, k), (j, m))
    try:
        if metric is MetricKind.CORRELATION:
            return pearson_abs(pair)
        if metric is MetricKind.MUTUAL_INFORMATION:
            return ksg_mutual_information(pair, cfg)
        return transfer_entropy(
            pair.xs,
            pair.ys,
            cfg,
            source_id=pair.id_x,
            target_id=pair.id_y,
            source_offset=pair.offset_x,
            target_offset=pair.offset_y,
        )
    except DataError as exc:
        raise DataError(f"pair ({i},{k})->({j},{m}): {exc}") from exc


def build_lead_lag_graph(
    panel: LaggedPanel,
    metric: MetricKind,
    cfg: EstimatorConfig = EstimatorConfig(),
    workers: int = 1,
) -> LeadLagGraph:
    """Estimate every admissible edge of the lagged-variable graph.

    Edges whose raw value is exactly 0 are pruned (they can never carry
    weight). Estimation parallelizes over pairs; edges are assembled in
    canonical order, so the result is identical for any worker count.
    """
    if panel.n_variables < 2:
        raise UsageError("need at least 2 variables to build a lead-lag graph")
    if panel.max_lag < 1:
        raise UsageError("need max_lag >= 1 to form lead-lag edges")
    deepest_overlap = panel.base.n_samples - panel.max_lag
    needed = _min_overlap(metric, cfg)
    if deepest_overlap < needed:
        raise DataError(
            f"deepest lag pair overlaps in {deepest_overlap} samples but "
            f"{metric.value} needs >= {needed}"
        )

    pairs = list(admissible_pairs(panel.n_variables, panel.max_lag))

    def evaluate(pair_idx: tuple[int, int, int, int]) -> float:
        i, k, j, m = pair_idx
        return _edge_raw(panel, metric, cfg, i, k, j, m)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            raws = list(pool.map(evaluate, pairs, chunksize=64))
    else:
        raws = [evaluate(p) for p in pairs]

    edges = tuple(
        LeadLagEdge(NodeId(i, k), NodeId(j, m), raw, k - m)
        for (i, k, j, m), raw in zip(pairs, raws)
        if raw != 0.0
    )
    return LeadLagGraph(panel.base.variable_names, panel.max_lag, metric, cfg, edges)


def _min_overlap(metric: MetricKind, cfg: EstimatorConfig) -> int:
    if metric is MetricKind.CORRELATION:
        return 3
    if metric is MetricKind.MUTUAL_INFORMATION:
        return cfg.k_neighbors + 1
    return cfg.k_neighbors + cfg.embedding_length + 2


def edge_weight(raw: float, lag_distance: int, a: float) -> float:
    """Decayed edge weight raw * a**D; a is the fraction of dependence
    retained per unit of lag distance."""
    if not 0.0 <= a <= 1.0:
        raise UsageError(f"decay parameter a must be in [0, 1], got {a}")
    if lag_distance < 1:
        raise UsageError("lag distance must be >= 1")
    if raw < 0:
        raise DataError("raw metric values must be >= 0")
    return raw * a**lag_distance


def aggregate(graph: LeadLagGraph, a: float) -> AggregatedGraph:
    """Merge lags per variable: weights[i, j] sums raw * a**D over every
    edge from a lag of i to a lag of j.

    The fold runs in canonical (i, k, j, m) edge order so floating-point
    results never depend on scheduling.
    """
    if not 0.0 <= a <= 1.0:
        raise UsageError(f"decay parameter a must be in [0, 1], got {a}")
    v = graph.n_variables
    weights = np.zeros((v, v))
    for edge in graph.edges:
        weights[edge.src.var, edge.dst.var] += edge.raw * a**edge.lag_distance
    return AggregatedGraph(graph.variable_names, weights, "toward-lead")


def reverse(g: AggregatedGraph) -> AggregatedGraph:
    """Transpose the weight matrix and flip the orientation flag."""
    flipped = "toward-lag" if g.orientation == "toward-lead" else "toward-lead"
    return AggregatedGraph(g.variable_names, g.weights.T.copy(), flipped)

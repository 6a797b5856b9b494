"""Weighted PageRank and decay-parameter sweeps over aggregated graphs.

PageRank follows the weighted convention: a node distributes its score over
its outgoing edges in proportion to their weights, nodes with no outgoing
weight spread their score uniformly over the whole graph, and a damping
factor d mixes in a uniform teleport term. Scores of all variables sum to 1.

Rankings are reported for both orientations of the aggregated graph:
"influential" on the graph as built (toward-lead) and "influenced" on its
reverse (toward-lag). Labels are rankings of weighted connectivity, not
causal claims.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, UsageError
from .metrics import MetricKind
from .netbuild import AggregatedGraph, LeadLagGraph, aggregate, reverse


@dataclass(frozen=True)
class PageRankConfig:
    damping: float = 0.85
    tolerance: float = 1e-9  # L1 change per iteration
    max_iterations: int = 200

    def __post_init__(self):
        if not 0.0 <= self.damping < 1.0:
            raise UsageError("damping must be in [0, 1)")
        if self.tolerance <= 0:
            raise UsageError("tolerance must be positive")
        if self.max_iterations < 1:
            raise UsageError("max_iterations must be >= 1")


def pagerank(g: AggregatedGraph, cfg: PageRankConfig = PageRankConfig()) -> np.ndarray:
    """Power-iterate PR_i = (1-d)/N + d * sum_j PR_j * w_ji / W_j.

    W_j is node j's total outgoing weight; dangling nodes (W_j = 0) donate
    their score uniformly to all nodes. Starts uniform, converges when the
    L1 change drops below the tolerance; the result sums to 1.
    """
    n = g.n_variables
    if n < 1:
        raise UsageError("pagerank needs a non-empty graph")
    weights = g.weights
    out_weight = weights.sum(axis=1)
    dangling = out_weight == 0.0
    if np.all(dangling):
        # No edges anywhere (e.g. a = 0): the fixed point is exactly uniform.
        return np.full(n, 1.0 / n)

    transition = np.zeros_like(weights)
    live = ~dangling
    transition[live] = weights[live] / out_weight[live, None]

    d = cfg.damping
    teleport = (1.0 - d) / n
    pr = np.full(n, 1.0 / n)
    for _ in range(cfg.max_iterations):
        dangling_mass = pr[dangling].sum()
        nxt = teleport + d * (pr @ transition + dangling_mass / n)
        residual = float(np.abs(nxt - pr).sum())
        pr = nxt
        if residual < cfg.tolerance:
            return pr
    raise NumericalError(
        f"pagerank did not converge in {cfg.max_iterations} iterations "
        f"(final L1 residual {residual:.3e})"
    )


@dataclass(frozen=True)
class OrientationRanking:
    """PageRank results for one edge orientation across the a grid."""

    orientation: str
    pr: np.ndarray  # shape (len(a_values), V)
    average_pr: np.ndarray  # mean over a grid, per variable
    pr_range: np.ndarray  # max - min over a grid, per variable (diagnostic)
    order: tuple[int, ...]  # variable indices sorted by average PR, descending
    top: int  # order[0]


@dataclass(frozen=True)
class RankingReport:
    metric: MetricKind
    variable_names: tuple[str, ...]
    a_values: tuple[float, ...]
    influential: OrientationRanking
    influenced: OrientationRanking
    n_nodes: int
    n_edges: int

    @property
    def most_influential(self) -> str:
        return self.variable_names[self.influential.top]

    @property
    def most_influenced(self) -> str:
        return self.variable_names[self.influenced.top]


def _rank_orientation(name: str, rows: list[np.ndarray]) -> OrientationRanking:
    pr = np.vstack(rows)
    average = pr.mean(axis=0)
    spread = pr.max(axis=0) - pr.min(axis=0)
    # Stable descending sort; ties fall back to variable order.
    order = tuple(int(i) for i in np.argsort(-average, kind="stable"))
    return OrientationRanking(name, pr, average, spread, order, order[0])


def rank_sweep(
    graph: LeadLagGraph,
    a_values,
    prcfg: PageRankConfig = PageRankConfig(),
) -> RankingReport:
    """Aggregate and rank the graph at every decay value.

    For each a: aggregate (toward-lead), PageRank -> influential scores;
    reverse (toward-lag), PageRank -> influenced scores. Variables are
    ordered by average PR over the grid within each orientation.
    """
    a_values = tuple(float(a) for a in a_values)
    if not a_values:
        raise UsageError("a_values must be non-empty")
    for a in a_values:
        if not 0.0 <= a <= 1.0:
            raise UsageError(f"decay parameter a must be in [0, 1], got {a}")

    lead_rows, lag_rows = [], []
    for a in a_values:
        merged = aggregate(graph, a)
        lead_rows.append(pagerank(merged, prcfg))
        lag_rows.append(pagerank(reverse(merged), prcfg))

    return RankingReport(
        metric=graph.metric,
        variable_names=graph.variable_names,
        a_values=a_values,
        influential=_rank_orientation("influential", lead_rows),
        influenced=_rank_orientation("influenced", lag_rows),
        n_nodes=graph.n_nodes,
        n_edges=len(graph.edges),
    )


def report_to_dict(report: RankingReport) -> dict:
    """JSON-ready view of a ranking report (fractions, full precision)."""
    def orientation_dict(o: OrientationRanking) -> dict:
        return {
            "orientation": o.orientation,
            "pagerank": [[float(x) for x in row] for row in o.pr],
            "average_pr": [float(x) for x in o.average_pr],
            "pr_range": [float(x) for x in o.pr_range],
            "order": [report.variable_names[i] for i in o.order],
            "top": report.variable_names[o.top],
        }

    return {
        "metric": report.metric.value,
        "variables": list(report.variable_names),
        "a_values": list(report.a_values),
        "graph": {"nodes": report.n_nodes, "edges": report.n_edges},
        "influential": orientation_dict(report.influential),
        "influenced": orientation_dict(report.influenced),
    }


def report_to_csv_rows(report: RankingReport) -> list[tuple[str, str, str, str]]:
    """One (variable, a, orientation, pagerank) row per cell of the sweep."""
    rows = [("variable", "a", "orientation", "pagerank")]
    for v, name in enumerate(report.variable_names):
        for ai, a in enumerate(report.a_values):
            for ranking in (report.influential, report.influenced):
                rows.append((name, repr(a), ranking.orientation, repr(float(ranking.pr[ai, v]))))
    return rows

"""Lead-lag network analysis for multivariate time series.

Pipeline: load a CSV of aligned series, transform to rates of change, build
the panel of lagged variables, score every admissible lagged pair with
absolute correlation, kNN mutual information, or kNN transfer entropy,
aggregate the lagged graph to the variable level with a per-lag decay
parameter, and rank variables by weighted PageRank in both orientations.
"""

from .errors import DataError, LeadLagError, NumericalError, UsageError
from .ingest import (
    AlignedPair,
    CsvOptions,
    LaggedPanel,
    ReturnsTable,
    TimeSeriesTable,
    align_pair,
    build_lags,
    load_csv,
    rate_of_change,
)
from .metrics import (
    EstimatorConfig,
    MetricKind,
    digamma,
    ksg_mutual_information,
    neighbor_counts,
    neighbor_counts_tree,
    pearson_abs,
    transfer_entropy,
)
from .netbuild import (
    AggregatedGraph,
    LeadLagEdge,
    LeadLagGraph,
    NodeId,
    aggregate,
    build_lead_lag_graph,
    edge_weight,
    expected_edge_count,
    reverse,
)
from .rank import (
    OrientationRanking,
    PageRankConfig,
    RankingReport,
    pagerank,
    rank_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AggregatedGraph",
    "AlignedPair",
    "CsvOptions",
    "DataError",
    "EstimatorConfig",
    "LaggedPanel",
    "LeadLagEdge",
    "LeadLagError",
    "LeadLagGraph",
    "MetricKind",
    "NodeId",
    "NumericalError",
    "OrientationRanking",
    "PageRankConfig",
    "RankingReport",
    "ReturnsTable",
    "TimeSeriesTable",
    "UsageError",
    "__version__",
    "aggregate",
    "align_pair",
    "build_lags",
    "build_lead_lag_graph",
    "digamma",
    "edge_weight",
    "expected_edge_count",
    "ksg_mutual_information",
    "load_csv",
    "neighbor_counts",
    "neighbor_counts_tree",
    "pagerank",
    "pearson_abs",
    "rank_sweep",
    "rate_of_change",
    "reverse",
    "transfer_entropy",
]

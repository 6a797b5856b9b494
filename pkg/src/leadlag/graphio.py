"""Graph serialization: DOT, GraphML, and a JSON mirror of both layers.

Lagged-graph nodes are labelled "name@lagK"; aggregated nodes use the plain
variable names. Edges carry `raw` (undecayed metric), `D` (lag distance, only
on the lagged layer) and `weight` (value at the requested decay a). The JSON
schema mirrors the same attributes and round-trips losslessly back into the
in-memory graph types.

All writers emit fully deterministic text: fixed key order, fixed edge order,
floats via repr (shortest round-trip form).
"""

from __future__ import annotations

import json
from xml.sax.saxutils import escape

import numpy as np

from .errors import DataError
from .metrics import EstimatorConfig, MetricKind
from .netbuild import AggregatedGraph, LeadLagEdge, LeadLagGraph, NodeId


def _fmt(x: float) -> str:
    return repr(float(x))


# --- DOT ---------------------------------------------------------------

def lagged_to_dot(graph: LeadLagGraph, a: float) -> str:
    names = graph.variable_names
    lines = ["digraph leadlag {"]
    for node in graph.nodes():
        lines.append(f'  "{node.label(names)}";')
    for e in graph.edges:
        lines.append(
            f'  "{e.src.label(names)}" -> "{e.dst.label(names)}" '
            f'[raw={_fmt(e.raw)}, D={e.lag_distance}, weight={_fmt(e.weight(a))}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def aggregated_to_dot(g: AggregatedGraph) -> str:
    lines = ["digraph leadlag_aggregated {"]
    for name in g.variable_names:
        lines.append(f'  "{name}";')
    v = g.n_variables
    for i in range(v):
        for j in range(v):
            if i == j:
                continue
            lines.append(
                f'  "{g.variable_names[i]}" -> "{g.variable_names[j]}" '
                f'[weight={_fmt(g.weights[i, j])}];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- GraphML -----------------------------------------------------------

_GRAPHML_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">\n'
)


def _graphml_key(key_id: str, target: str, name: str, kind: str) -> str:
    return (
        f'  <key id="{key_id}" for="{target}" '
        f'attr.name="{name}" attr.type="{kind}"/>\n'
    )


def lagged_to_graphml(graph: LeadLagGraph, a: float) -> str:
    names = graph.variable_names
    out = [_GRAPHML_HEADER]
    out.append(_graphml_key("d_label", "node", "label", "string"))
    out.append(_graphml_key("d_raw", "edge", "raw", "double"))
    out.append(_graphml_key("d_D", "edge", "D", "int"))
    out.append(_graphml_key("d_weight", "edge", "weight", "double"))
    out.append('  <graph id="leadlag" edgedefault="directed">\n')
    for node in graph.nodes():
        label = escape(node.label(names))
        out.append(
            f'    <node id="n{node.var}_{node.lag}">'
            f'<data key="d_label">{label}</data></node>\n'
        )
    for e in graph.edges:
        out.append(
            f'    <edge source="n{e.src.var}_{e.src.lag}" '
            f'target="n{e.dst.var}_{e.dst.lag}">'
            f'<data key="d_raw">{_fmt(e.raw)}</data>'
            f'<data key="d_D">{e.lag_distance}</data>'
            f'<data key="d_weight">{_fmt(e.weight(a))}</data></edge>\n'
        )
    out.append("  </graph>\n</graphml>\n")
    return "".join(out)


def aggregated_to_graphml(g: AggregatedGraph) -> str:
    out = [_GRAPHML_HEADER]
    out.append(_graphml_key("d_label", "node", "label", "string"))
    out.append(_graphml_key("d_weight", "edge", "weight", "double"))
    out.append('  <graph id="leadlag_aggregated" edgedefault="directed">\n')
    for i, name in enumerate(g.variable_names):
        out.append(
            f'    <node id="v{i}"><data key="d_label">{escape(name)}</data></node>\n'
        )
    v = g.n_variables
    for i in range(v):
        for j in range(v):
            if i == j:
                continue
            out.append(
                f'    <edge source="v{i}" target="v{j}">'
                f'<data key="d_weight">{_fmt(g.weights[i, j])}</data></edge>\n'
            )
    out.append("  </graph>\n</graphml>\n")
    return "".join(out)


# --- JSON --------------------------------------------------------------

def lagged_to_json_dict(graph: LeadLagGraph, a: float) -> dict:
    return {
        "layer": "lagged",
        "metric": graph.metric.value,
        "variables": list(graph.variable_names),
        "max_lag": graph.max_lag,
        "a": float(a),
        "estimator": {
            "k_neighbors": graph.config.k_neighbors,
            "embedding_length": graph.config.embedding_length,
            "jitter_scale": graph.config.jitter_scale,
            "seed": graph.config.seed,
            "clip_negative": graph.config.clip_negative,
        },
        "edges": [
            {
                "from": [e.src.var, e.src.lag],
                "to": [e.dst.var, e.dst.lag],
                "raw": float(e.raw),
                "D": e.lag_distance,
                "weight": float(e.weight(a)),
            }
            for e in graph.edges
        ],
    }


def aggregated_to_json_dict(g: AggregatedGraph) -> dict:
    return {
        "layer": "aggregated",
        "orientation": g.orientation,
        "variables": list(g.variable_names),
        "weights": [[float(x) for x in row] for row in g.weights],
    }


def lagged_from_json_dict(payload: dict) -> LeadLagGraph:
    if payload.get("layer") != "lagged":
        raise DataError("not a lagged-graph JSON payload")
    est = payload["estimator"]
    cfg = EstimatorConfig(
        k_neighbors=est["k_neighbors"],
        embedding_length=est["embedding_length"],
        jitter_scale=est["jitter_scale"],
        seed=est["seed"],
        clip_negative=est["clip_negative"],
    )
    edges = tuple(
        LeadLagEdge(
            NodeId(*e["from"]), NodeId(*e["to"]), float(e["raw"]), int(e["D"])
        )
        for e in payload["edges"]
    )
    return LeadLagGraph(
        tuple(payload["variables"]),
        int(payload["max_lag"]),
        MetricKind(payload["metric"]),
        cfg,
        edges,
    )


def aggregated_from_json_dict(payload: dict) -> AggregatedGraph:
    if payload.get("layer") != "aggregated":
        raise DataError("not an aggregated-graph JSON payload")
    return AggregatedGraph(
        tuple(payload["variables"]),
        np.array(payload["weights"], dtype=float),
        payload["orientation"],
    )


def to_json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"

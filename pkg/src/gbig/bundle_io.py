"""Portable on-disk formats: bundle directories, model checkpoints and
evaluation reports. Reads validate strictly; writes are canonical so that
write -> read -> write is byte-stable.

Bundle directory layout:
    graph.json         {"num_nodes": N, "edges": [[u, v], ...]}   (u < v)
    features.csv       N rows of d full-precision decimal floats
    labels.csv         N integer rows
    masks.json         {"train": [...], "val": [...], "test": [...]}
    ground_truth.json  {"targets": {"<node>": [node, ...]}}        (optional)
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    AsymmetricEdgeError,
    CorruptFileError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    MissingFileError,
    OverlappingMasksError,
    ShapeMismatchError,
)
from .graphs import Graph

MASK_NAMES = ("train", "val", "test")


@dataclass
class GraphBundle:
    """In-memory form of a bundle directory."""

    graph: Graph
    features: np.ndarray
    labels: np.ndarray
    masks: dict
    ground_truth: dict = None
    name: str = ""

    @property
    def num_classes(self):
        return int(self.labels.max()) + 1


def _dump_json(obj, path):
    path.write_text(json.dumps(obj, sort_keys=True) + "\n")


def _load_json(path, name):
    if not path.is_file():
        raise MissingFileError(name, "file not found")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CorruptFileError(f"{name}: {exc}") from exc


def _read_graph(path):
    obj = _load_json(path / "graph.json", "graph.json")
    try:
        n = int(obj["num_nodes"])
        raw_edges = obj["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFileError(f"graph.json: {exc}") from exc
    seen = set()
    edges = []
    for e in raw_edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise IndexOutOfRangeError("graph.json", f"edge [{u}, {v}] out of range")
        if u == v:
            continue  # self-loops dropped at load time
        key = (min(u, v), max(u, v))
        if key in seen:
            raise AsymmetricEdgeError(
                "graph.json", f"duplicate edge [{u}, {v}] in one-sided storage"
            )
        seen.add(key)
        edges.append(key)
    return Graph(n, edges)


def _read_csv_matrix(path, name, n_rows, dtype):
    if not path.is_file():
        raise MissingFileError(name, "file not found")
    rows = []
    widths = set()
    for i, line in enumerate(path.read_text().splitlines()):
        if not line.strip():
            continue
        try:
            row = [dtype(tok) for tok in line.split(",")]
        except ValueError as exc:
            raise ShapeMismatchError(name, f"line {i + 1}: {exc}") from exc
        widths.add(len(row))
        rows.append(row)
    if len(widths) > 1:
        raise ShapeMismatchError(name, "rows have inconsistent column counts")
    if len(rows) != n_rows:
        raise ShapeMismatchError(name, f"expected {n_rows} rows, found {len(rows)}")
    return np.array(rows, dtype=np.float64 if dtype is float else np.int64)


def read_bundle(path):
    """Read and fully validate a bundle directory."""
    path = Path(path)
    if not path.is_dir():
        raise MissingFileError(str(path), "bundle directory not found")
    g = _read_graph(path)
    n = g.num_nodes
    features = _read_csv_matrix(path / "features.csv", "features.csv", n, float)
    labels_mat = _read_csv_matrix(path / "labels.csv", "labels.csv", n, int)
    if labels_mat.shape[1] != 1:
        raise ShapeMismatchError("labels.csv", "expected one label per row")
    labels = labels_mat[:, 0]
    if labels.min() < 0:
        raise IndexOutOfRangeError("labels.csv", "negative label")

    masks_obj = _load_json(path / "masks.json", "masks.json")
    masks = {}
    seen = {}
    for name in MASK_NAMES:
        if name not in masks_obj:
            raise ShapeMismatchError("masks.json", f"missing key {name!r}")
        idx = [int(i) for i in masks_obj[name]]
        for i in idx:
            if not 0 <= i < n:
                raise IndexOutOfRangeError("masks.json", f"{name} index {i} out of range")
            if i in seen:
                raise OverlappingMasksError(
                    "masks.json", f"index {i} appears in both {seen[i]!r} and {name!r}"
                )
            seen[i] = name
        masks[name] = idx

    ground_truth = None
    gt_path = path / "ground_truth.json"
    if gt_path.is_file():
        gt_obj = _load_json(gt_path, "ground_truth.json")
        targets = gt_obj.get("targets", {})
        ground_truth = {}
        for key, nodes in targets.items():
            t = int(key)
            nodes = {int(v) for v in nodes}
            for v in nodes | {t}:
                if not 0 <= v < n:
                    raise IndexOutOfRangeError(
                        "ground_truth.json", f"node {v} out of range"
                    )
            ground_truth[t] = nodes

    return GraphBundle(graph=g, features=features, labels=labels, masks=masks,
                       ground_truth=ground_truth, name=path.name)


def write_bundle(bundle, path):
    """Write a bundle directory in canonical byte form."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    g = bundle.graph
    _dump_json(
        {"num_nodes": g.num_nodes, "edges": [list(e) for e in g.edges()]},
        path / "graph.json",
    )
    feat_lines = [
        ",".join(repr(float(v)) for v in row) for row in bundle.features
    ]
    (path / "features.csv").write_text("\n".join(feat_lines) + "\n")
    (path / "labels.csv").write_text(
        "\n".join(str(int(v)) for v in bundle.labels) + "\n"
    )
    _dump_json(
        {name: sorted(int(i) for i in bundle.masks[name]) for name in MASK_NAMES},
        path / "masks.json",
    )
    if bundle.ground_truth is not None:
        _dump_json(
            {
                "targets": {
                    str(t): sorted(int(v) for v in nodes)
                    for t, nodes in bundle.ground_truth.items()
                }
            },
            path / "ground_truth.json",
        )


def save_checkpoint(weights, path):
    """Serialize layer weights with full round-trip precision."""
    obj = {
        "layer_dims": [list(w.shape) for w in weights],
        "weights": [[float(v) for v in np.asarray(w).ravel()] for w in weights],
    }
    Path(path).write_text(json.dumps(obj, sort_keys=True) + "\n")


def load_checkpoint(path):
    """Load and validate a checkpoint; returns the weight matrices."""
    path = Path(path)
    if not path.is_file():
        raise CorruptFileError(f"{path}: file not found")
    try:
        obj = json.loads(path.read_text())
        dims = [tuple(int(x) for x in d) for d in obj["layer_dims"]]
        flats = obj["weights"]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CorruptFileError(f"{path}: {exc}") from exc
    if len(dims) != len(flats):
        raise CorruptFileError(f"{path}: dims/weights length mismatch")
    for i in range(len(dims) - 1):
        if dims[i][1] != dims[i + 1][0]:
            raise DimensionMismatchError(
                f"layer {i} cols {dims[i][1]} do not match layer {i + 1} rows {dims[i + 1][0]}"
            )
    weights = []
    for (r, c), flat in zip(dims, flats):
        if len(flat) != r * c:
            raise CorruptFileError(f"{path}: layer expects {r * c} values, found {len(flat)}")
        weights.append(np.array(flat, dtype=np.float64).reshape(r, c))
    return weights


def write_report(rows, path, config=None):
    """Write results.json: the evaluation rows plus the run configuration."""
    results = [
        {
            "method": row.method,
            "dataset": row.dataset,
            "fidelity": row.fidelity,
            "sparsity": row.sparsity,
            "jaccard": row.jaccard,
            "num_targets": row.num_targets,
        }
        for row in rows
    ]
    obj = {"config": config or {}, "results": results}
    Path(path).write_text(json.dumps(obj, sort_keys=True) + "\n")

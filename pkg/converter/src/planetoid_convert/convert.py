"""One-shot converter from the upstream pickled citation-dataset
distribution into the portable bundle directory format.

The upstream layout ships, per dataset name, the files
ind.<name>.{x,y,tx,ty,allx,ally,graph,test.index}: python-2 pickles of
scipy sparse feature blocks, one-hot label blocks, a node -> neighbor-list
dict, and a text file giving the positions of the held-out test rows in
the final node ordering. CiteSeer's test index has gaps for isolated
papers; those nodes are kept with all-zero features so indexing matches
the upstream distribution.

The emitted bundle directory (graph.json, features.csv, labels.csv,
masks.json) is the wire format shared with the explanation toolkit;
nothing else is shared.
"""

import json
import pickle
from pathlib import Path

import numpy as np
import scipy.sparse as sp

DATASETS = ("cora", "citeseer", "pubmed")
VAL_SIZE = 500

RAW_PARTS = ("x", "y", "tx", "ty", "allx", "ally", "graph")


class ConversionError(Exception):
    """Raised for missing/corrupt raw files or bad dataset names."""


def _load_pickle(path):
    if not path.is_file():
        raise ConversionError(f"missing raw file {path}")
    try:
        with path.open("rb") as fh:
            return pickle.load(fh, encoding="latin1")
    except Exception as exc:  # upstream pickles, anything can go wrong
        raise ConversionError(f"cannot unpickle {path}: {exc}") from exc


def load_raw(input_dir, name):
    """Read the eight upstream files into plain arrays and the graph dict."""
    if name not in DATASETS:
        raise ConversionError(f"unknown dataset {name!r}, expected one of {DATASETS}")
    input_dir = Path(input_dir)
    parts = {p: _load_pickle(input_dir / f"ind.{name}.{p}") for p in RAW_PARTS}
    index_path = input_dir / f"ind.{name}.test.index"
    if not index_path.is_file():
        raise ConversionError(f"missing raw file {index_path}")
    test_idx = [int(line) for line in index_path.read_text().split()]
    if not test_idx:
        raise ConversionError(f"{index_path} is empty")
    return parts, test_idx


def _dense(block, what):
    if sp.issparse(block):
        return np.asarray(block.todense(), dtype=np.float64)
    arr = np.asarray(block, dtype=np.float64)
    if arr.ndim != 2:
        raise ConversionError(f"{what} block is not a matrix")
    return arr


def assemble(parts, test_idx):
    """Features, labels and split masks in the final node ordering."""
    allx = _dense(parts["allx"], "allx")
    tx = _dense(parts["tx"], "tx")
    ally = np.asarray(parts["ally"])
    ty = np.asarray(parts["ty"])
    n_known = allx.shape[0]

    # The test range may have holes (isolated CiteSeer papers); pad the
    # test blocks with zero rows so positions line up.
    order = np.asarray(test_idx, dtype=np.int64)
    full_range = np.arange(order.min(), order.max() + 1)
    tx_full = np.zeros((len(full_range), tx.shape[1]))
    ty_full = np.zeros((len(full_range), ty.shape[1]))
    tx_full[order - order.min()] = tx
    ty_full[order - order.min()] = ty

    if order.min() != n_known:
        raise ConversionError(
            f"test index starts at {order.min()}, expected {n_known}"
        )
    features = np.vstack([allx, tx_full])
    onehot = np.vstack([ally, ty_full])
    labels = onehot.argmax(axis=1).astype(np.int64)

    n_train = np.asarray(parts["y"]).shape[0]
    masks = {
        "train": list(range(n_train)),
        "val": list(range(n_train, min(n_train + VAL_SIZE, n_known))),
        "test": sorted(int(i) for i in order),
    }
    return features, labels, masks


def build_edges(graph, num_nodes):
    """Symmetrized, deduplicated one-sided edge list from the raw dict."""
    edges = set()
    for u, nbrs in graph.items():
        u = int(u)
        if not 0 <= u < num_nodes:
            raise ConversionError(f"graph key {u} out of range")
        for v in nbrs:
            v = int(v)
            if not 0 <= v < num_nodes:
                raise ConversionError(f"graph neighbor {v} out of range")
            if u != v:
                edges.add((min(u, v), max(u, v)))
    return sorted(edges)


def convert(input_dir, name, out_dir):
    """Emit a validated bundle directory; byte-identical when re-run."""
    parts, test_idx = load_raw(input_dir, name)
    features, labels, masks = assemble(parts, test_idx)
    edges = build_edges(parts["graph"], len(labels))

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "graph.json").write_text(
        json.dumps({"num_nodes": len(labels), "edges": [list(e) for e in edges]},
                   sort_keys=True) + "\n"
    )
    (out / "features.csv").write_text(
        "\n".join(",".join(repr(float(v)) for v in row) for row in features) + "\n"
    )
    (out / "labels.csv").write_text("\n".join(str(int(v)) for v in labels) + "\n")
    (out / "masks.json").write_text(json.dumps(masks, sort_keys=True) + "\n")
    return out

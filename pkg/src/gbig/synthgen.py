"""Synthetic motif dataset generator.

Each subgraph is an Erdős–Rényi base with one motif (house or circle)
attached by a single bridge edge; subgraphs are chained into one connected
component through their motifs, so motifs sit on the inter-subgraph
backbone. Motif membership defines the node labels; every base node
within three hops of its subgraph's motif carries the reachable motif
nodes as explanation ground truth.
Features are class-conditional Gaussians on the informative
dimensions; the homophily switch optionally flips them to produce
feature/label disagreement across edges.
"""

from dataclasses import dataclass

import numpy as np

from . import graphs
from .bundle_io import GraphBundle
from .graphs import Graph

MOTIF_SIZES = {"house": 5, "circle": 6}


@dataclass(frozen=True)
class GenParams:
    motif: str = "house"
    homophily: int = 1
    num_subgraphs: int = 10
    subgraph_size: int = 12
    edge_prob: float = 0.15
    feature_dim: int = 16
    informative_dim: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.motif not in MOTIF_SIZES:
            raise ValueError(f"unknown motif {self.motif!r}")
        if self.homophily not in (-1, 1):
            raise ValueError("homophily must be -1 or +1")
        if self.subgraph_size < MOTIF_SIZES[self.motif]:
            raise ValueError("subgraph_size must be at least the motif size")
        if not 0 < self.edge_prob < 1:
            raise ValueError("edge_prob must lie in (0, 1)")
        if self.informative_dim > self.feature_dim:
            raise ValueError("informative_dim cannot exceed feature_dim")
        if self.num_subgraphs < 1:
            raise ValueError("need at least one subgraph")


def make_motif(kind):
    """Motif as (node count, local edge list, important-node mask).

    house: 4-cycle 0-1-2-3 with roof apex 4 on edge 0-1 (6 edges);
    circle: 6-cycle.
    """
    if kind == "house":
        edges = [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (1, 4)]
        return 5, edges, [True] * 5
    if kind == "circle":
        edges = [(i, (i + 1) % 6) for i in range(6)]
        return 6, edges, [True] * 6
    raise ValueError(f"unknown motif {kind!r}")


# Local attachment points: the chain anchor (where the inter-subgraph
# backbone meets the motif) and the bridge node (where the motif meets its
# own base) sit apart, so traffic between backbone and base crosses the
# motif interior.
_ANCHOR = {"house": 4, "circle": 0}
_BRIDGE = {"house": 2, "circle": 3}


def _connect_components(n_nodes, edges, offset, rng):
    """Add bridge edges until the node range is one component."""
    parent = list(range(n_nodes))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        parent[find(u - offset)] = find(v - offset)
    comps = {}
    for i in range(n_nodes):
        comps.setdefault(find(i), []).append(i)
    groups = sorted(comps.values(), key=lambda c: c[0])
    for a, b in zip(groups, groups[1:]):
        u = int(rng.choice(a)) + offset
        v = int(rng.choice(b)) + offset
        edges.append((u, v))
        parent[find(u - offset)] = find(v - offset)


def generate(params):
    """Build a bundle with labels, features, splits and explanation truth."""
    rng = np.random.default_rng(params.seed)
    motif_size, motif_edges, _ = make_motif(params.motif)
    base_size = params.subgraph_size - motif_size

    edges = []
    labels = []
    motif_sets = []  # per subgraph: its motif's node set
    members = []  # per subgraph: all of its nodes
    sub_anchor = []  # one motif node per subgraph; chaining runs motif-to-motif
    n = 0
    for _ in range(params.num_subgraphs):
        base_start = n
        base_nodes = list(range(base_start, base_start + base_size))
        if base_size > 0:
            base_edges = []
            for i in base_nodes:
                for j in base_nodes:
                    if i < j and rng.random() < params.edge_prob:
                        base_edges.append((i, j))
            _connect_components(base_size, base_edges, base_start, rng)
            edges.extend(base_edges)
        motif_start = base_start + base_size
        motif_nodes = list(range(motif_start, motif_start + motif_size))
        edges.extend((motif_start + u, motif_start + v) for u, v in motif_edges)
        if base_size > 0:
            edges.append(
                (int(rng.choice(base_nodes)), motif_start + _BRIDGE[params.motif])
            )
        sub_anchor.append(motif_start + _ANCHOR[params.motif])
        labels.extend([0] * base_size + [1] * motif_size)
        motif_sets.append(set(motif_nodes))
        members.append(base_nodes)
        n = motif_start + motif_size
    for a, b in zip(sub_anchor, sub_anchor[1:]):
        edges.append((a, b))

    g = Graph(n, edges)
    labels = np.array(labels, dtype=np.int64)

    # Explanation targets are the non-motif nodes whose receptive field
    # reaches their subgraph's motif; the reachable motif portion is their
    # ground truth (nothing beyond three hops can affect the prediction).
    ground_truth = {}
    for motif_nodes, base_nodes in zip(motif_sets, members):
        if not base_nodes:
            continue
        dists = {m: graphs.bfs_distances(g, m) for m in motif_nodes}
        for v in base_nodes:
            reachable = {m for m, d in dists.items() if 0 < d[v] <= 3}
            if reachable:
                ground_truth[v] = reachable

    X = rng.standard_normal((n, params.feature_dim))
    means = np.where(labels == 1, 1.0, -1.0)
    X[:, : params.informative_dim] += means[:, None]
    if params.homophily == -1:
        for v in range(n):
            nbrs = g.neighbors(v)
            same = sum(1 for w in nbrs if labels[w] == labels[v])
            if 2 * same > len(nbrs):
                X[v, : params.informative_dim] *= -1.0

    masks = {"train": [], "val": [], "test": []}
    for cls in (0, 1):
        idx = np.flatnonzero(labels == cls)
        idx = rng.permutation(idx)
        n_tr = int(round(0.6 * len(idx)))
        n_val = int(round(0.2 * len(idx)))
        masks["train"].extend(int(i) for i in idx[:n_tr])
        masks["val"].extend(int(i) for i in idx[n_tr : n_tr + n_val])
        masks["test"].extend(int(i) for i in idx[n_tr + n_val :])
    for key in masks:
        masks[key].sort()

    name = f"{params.motif}_h{'+1' if params.homophily == 1 else '-1'}_s{params.seed}"
    return GraphBundle(graph=g, features=X, labels=labels, masks=masks,
                       ground_truth=ground_truth, name=name)


def feature_label_agreement(g, X, labels, informative_dim):
    """Mean agreement between a node's informative-feature signs and its
    neighbors' label signs, over directed edges. Above 0.5 indicates
    homophilic features, below 0.5 heterophilic."""
    agree = 0
    total = 0
    for u in range(g.num_nodes):
        for v in g.neighbors(u):
            label_sign = 1.0 if labels[v] == 1 else -1.0
            agree += int(np.sum(np.sign(X[u, :informative_dim]) == label_sign))
            total += informative_dim
    return agree / total

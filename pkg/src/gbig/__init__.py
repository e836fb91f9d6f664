"""Graph-based integrated gradients toolkit."""

from .attribution import (
    Attribution,
    BasePointSpec,
    ExplanationMask,
    base_point_features,
    explanation_mask,
    gb_ig,
    gb_ig_multi_base,
    integrated_gradients,
    path_information,
    path_probability,
    path_set_entropy,
    select_base_point,
)
from .bundle_io import (
    GraphBundle,
    load_checkpoint,
    read_bundle,
    save_checkpoint,
    write_bundle,
    write_report,
)
from .gcn import GcnClassifier, forward, input_gradient, normalize_adjacency
from .graphs import (
    UNREACHABLE,
    Graph,
    bfs_distances,
    k_hop_nodes,
    max_distance_set,
    shortest_paths,
)
from .metrics import EvaluationRow, MethodConfig, evaluate, fidelity, jaccard, sparsity
from .synthgen import GenParams, generate, make_motif

__all__ = [
    "Attribution",
    "BasePointSpec",
    "EvaluationRow",
    "ExplanationMask",
    "GcnClassifier",
    "GenParams",
    "Graph",
    "GraphBundle",
    "MethodConfig",
    "UNREACHABLE",
    "base_point_features",
    "bfs_distances",
    "evaluate",
    "explanation_mask",
    "fidelity",
    "forward",
    "gb_ig",
    "gb_ig_multi_base",
    "generate",
    "input_gradient",
    "integrated_gradients",
    "jaccard",
    "k_hop_nodes",
    "load_checkpoint",
    "make_motif",
    "max_distance_set",
    "normalize_adjacency",
    "path_information",
    "path_probability",
    "path_set_entropy",
    "read_bundle",
    "save_checkpoint",
    "select_base_point",
    "shortest_paths",
    "sparsity",
    "write_bundle",
    "write_report",
]

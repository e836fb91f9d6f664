"""Attribution methods: classical integrated gradients with three base-point
strategies, the graph-based variant accumulated over shortest-path sets,
degree-based path information for base-point selection, and thresholded
explanation masks.

Any model with ``predict_proba(X) -> (n, C)`` and
``input_gradient(X, t, c) -> (n, d)`` can be explained; `GcnClassifier`
and the `LinearSurrogate` test double both qualify.
"""

from dataclasses import dataclass, field
from math import log2

import numpy as np

from . import graphs
from .graphs import DEFAULT_PATH_BUDGET, k_hop_nodes, max_distance_set, shortest_paths

RECEPTIVE_HOPS = 3  # three propagation layers


@dataclass(frozen=True)
class BasePointSpec:
    """Configuration of a classical-IG baseline.

    strategy: 'zero', 'uniform' or 'gaussian'. ``feature_ranges`` is a
    (d, 2) array of per-feature (min, max), required for 'uniform';
    ``sigma`` scales the perturbation for 'gaussian'.
    """

    strategy: str
    sigma: float = 1.0
    seed: int = 0
    feature_ranges: object = None

    def __post_init__(self):
        if self.strategy not in ("zero", "uniform", "gaussian"):
            raise ValueError(f"unknown base-point strategy {self.strategy!r}")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")


@dataclass
class Attribution:
    """Per-(node, feature) attribution matrix for one explanation target."""

    target: int
    values: np.ndarray
    method: str
    params: dict = field(default_factory=dict)
    base: dict = field(default_factory=dict)


@dataclass
class ExplanationMask:
    """Thresholded set of important nodes for one target.

    ``scores`` maps each node of the target's receptive field to its
    min-max-normalized importance in [0, 1].
    """

    target: int
    nodes: set
    scores: dict
    threshold: float


def base_point_features(spec, X, scope):
    """Baseline feature rows, one per node of ``sorted(scope)``."""
    if not scope:
        raise ValueError("scope must be non-empty")
    X = np.asarray(X, dtype=np.float64)
    scope = sorted(scope)
    d = X.shape[1]
    if spec.strategy == "zero":
        return np.zeros((len(scope), d))
    if spec.strategy == "uniform":
        if spec.feature_ranges is None:
            raise ValueError("uniform strategy requires feature_ranges")
        ranges = np.asarray(spec.feature_ranges, dtype=np.float64)
        if ranges.shape != (d, 2):
            raise ValueError(f"feature_ranges must have shape ({d}, 2)")
        if np.any(ranges[:, 0] > ranges[:, 1]):
            raise ValueError("feature ranges must satisfy min <= max")
        rng = np.random.default_rng(spec.seed)
        u = rng.random((len(scope), d))
        return ranges[:, 0] + u * (ranges[:, 1] - ranges[:, 0])
    # gaussian: X + sigma * v, v standard normal per entry
    rng = np.random.default_rng(spec.seed)
    v = rng.standard_normal((len(scope), d))
    return X[scope] + spec.sigma * v


def _predicted_class(model, X, t):
    return int(np.argmax(model.predict_proba(X)[t]))


def integrated_gradients(model, g, X, t, baseline, steps=64, class_index=None):
    """Classical IG over the target's receptive field.

    ``baseline`` has one row per node of the sorted 3-hop neighborhood of
    ``t``; rows outside that scope are held fixed at X. Uses the midpoint
    Riemann rule with ``steps`` evaluation points, on the gradient of the
    target's predicted-class probability (overridable via class_index).
    """
    X = np.asarray(X, dtype=np.float64)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    scope = sorted(k_hop_nodes(g, t, RECEPTIVE_HOPS))
    baseline = np.asarray(baseline, dtype=np.float64)
    if baseline.shape != (len(scope), X.shape[1]):
        raise ValueError(
            f"baseline shape {baseline.shape} does not match scope "
            f"({len(scope)}, {X.shape[1]})"
        )
    c = _predicted_class(model, X, t) if class_index is None else class_index
    delta = X[scope] - baseline
    total = np.zeros_like(X)
    Xk = X.copy()
    for k in range(steps):
        alpha = (k + 0.5) / steps
        Xk[scope] = baseline + alpha * delta
        total += model.input_gradient(Xk, t, c)
    values = np.zeros_like(X)
    values[scope] = delta * (total[scope] / steps)
    return Attribution(
        target=t,
        values=values,
        method="ig",
        params={"steps": steps, "class_index": c},
        base={"scope": scope, "baseline": baseline},
    )


def path_information(g, path):
    """Degree surprisal of a path: sum of log2(deg) over its nodes."""
    return float(sum(log2(g.degree(v)) for v in path))


def path_probability(g, path):
    """Product of inverse degrees over the path's nodes."""
    p = 1.0
    for v in path:
        p /= g.degree(v)
    return p


def path_set_entropy(g, paths):
    """Probability-weighted information over a path set; empty set -> 0."""
    return float(
        sum(path_probability(g, p) * path_information(g, p) for p in paths)
    )


def select_base_point(g, x, budget=DEFAULT_PATH_BUDGET, truncate=False):
    """Entropy-maximal member of the maximal-distance set of ``x``.

    Ties break toward the lowest node index; deterministic.
    """
    best = None
    best_entropy = -np.inf
    for b in sorted(max_distance_set(g, x)):
        entropy = path_set_entropy(g, shortest_paths(g, b, x, budget, truncate))
        if entropy > best_entropy:
            best, best_entropy = b, entropy
    return best


def gb_ig(model, g, X, t, b, mode="target-substitution", weighting="per-path",
          budget=DEFAULT_PATH_BUDGET, truncate=False, class_index=None):
    """Graph-based IG: attribution accumulated over all shortest paths b -> t.

    Each step i of a path contributes
    ``(X[path[i+1]] - X[path[i]]) * grad`` to node path[i+1], where the
    gradient row is either the target slot's gradient with the target's
    features substituted by the step node's (mode 'target-substitution'),
    or the step node's own gradient row on the unmodified input
    (mode 'path-node'). Per-path totals are scaled by 1/edge-count under
    'per-path' weighting, left unscaled under 'unweighted', then summed.
    """
    if mode not in ("target-substitution", "path-node"):
        raise ValueError(f"unknown mode {mode!r}")
    if weighting not in ("per-path", "unweighted"):
        raise ValueError(f"unknown weighting {weighting!r}")
    X = np.asarray(X, dtype=np.float64)
    paths = shortest_paths(g, b, t, budget, truncate)
    c = _predicted_class(model, X, t) if class_index is None else class_index

    if mode == "path-node":
        G = model.input_gradient(X, t, c)

        def grad_row(node):
            return G[node]
    else:
        cache = {}

        def grad_row(node):
            if node not in cache:
                if node == t:
                    Xi = X
                else:
                    Xi = X.copy()
                    Xi[t] = X[node]
                cache[node] = model.input_gradient(Xi, t, c)[t]
            return cache[node]

    values = np.zeros_like(X)
    per_path_sums = []
    for path in paths:
        contrib = np.zeros_like(X)
        for i in range(len(path) - 1):
            u, v = path[i], path[i + 1]
            contrib[v] += (X[v] - X[u]) * grad_row(u)
        per_path_sums.append(float(contrib.sum()))
        if weighting == "per-path":
            contrib /= len(path) - 1
        values += contrib
    return Attribution(
        target=t,
        values=values,
        method="gb-ig",
        params={
            "mode": mode,
            "weighting": weighting,
            "budget": budget,
            "class_index": c,
        },
        base={"base_node": b, "paths": paths, "per_path_sums": per_path_sums},
    )


def gb_ig_multi_base(model, g, X, t, mode="target-substitution",
                     weighting="per-path", budget=DEFAULT_PATH_BUDGET,
                     truncate=False, class_index=None):
    """Element-wise sum of gb_ig over every maximal-distance base node."""
    bases = sorted(max_distance_set(g, t))
    X = np.asarray(X, dtype=np.float64)
    values = np.zeros_like(X)
    c = _predicted_class(model, X, t) if class_index is None else class_index
    for b in bases:
        part = gb_ig(model, g, X, t, b, mode=mode, weighting=weighting,
                     budget=budget, truncate=truncate, class_index=c)
        values += part.values
    return Attribution(
        target=t,
        values=values,
        method="gb-ig-multi",
        params={"mode": mode, "weighting": weighting, "budget": budget,
                "class_index": c},
        base={"base_nodes": bases},
    )


def explanation_mask(attr, g, threshold=0.8):
    """Threshold node importance into a mask over the receptive field.

    Node importance is the L1 norm of its attribution row, min-max
    normalized across the target's 3-hop neighborhood. A degenerate
    range (max == min) normalizes every score to 1, keeping all nodes.
    """
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    scope = sorted(k_hop_nodes(g, attr.target, RECEPTIVE_HOPS))
    raw = np.abs(attr.values[scope]).sum(axis=1)
    lo, hi = raw.min(), raw.max()
    if hi == lo:
        norm = np.ones_like(raw)
    else:
        norm = (raw - lo) / (hi - lo)
    scores = {v: float(s) for v, s in zip(scope, norm)}
    nodes = {v for v, s in scores.items() if s >= threshold}
    return ExplanationMask(target=attr.target, nodes=nodes, scores=scores,
                           threshold=threshold)


class LinearSurrogate:
    """Exactly linear single-output model used by completeness checks.

    F(X) = sum of coef * X; `predict_proba` reports F in a one-column
    matrix and the gradient is the constant coefficient matrix.
    """

    def __init__(self, coef):
        self.coef = np.asarray(coef, dtype=np.float64)

    def predict_proba(self, X):
        f = float(np.sum(self.coef * np.asarray(X, dtype=np.float64)))
        return np.full((self.coef.shape[0], 1), f)

    def input_gradient(self, X, t, c):
        return self.coef.copy()

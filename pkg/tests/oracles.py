"""Independent reference implementations used to check the real code.

Everything here is deliberately brute-force and shares no logic with the
package: simple-path enumeration instead of the BFS DAG, finite
differences instead of reverse mode, direct scans instead of the tuned
selection routines.
"""

import numpy as np

from gbig.graphs import Graph


def random_graph(rng, n, p):
    """Erdős–Rényi G(n, p) from a numpy Generator."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


def brute_force_shortest_paths(g, b, x):
    """All minimum-length simple paths b -> x by exhaustive DFS."""
    paths = []
    stack = [(b, (b,))]
    while stack:
        v, prefix = stack.pop()
        if v == x:
            paths.append(prefix)
            continue
        for w in g.neighbors(v):
            if w not in prefix:
                stack.append((w, prefix + (w,)))
    if not paths:
        return []
    shortest = min(len(p) for p in paths)
    return sorted(p for p in paths if len(p) == shortest)


def brute_force_max_distance_set(g, x):
    """Farthest reachable nodes by per-node DFS distance scan."""
    dists = {}
    for v in range(g.num_nodes):
        if v == x:
            continue
        paths = brute_force_shortest_paths(g, x, v)
        if paths:
            dists[v] = len(paths[0]) - 1
    if not dists:
        return set()
    dmax = max(dists.values())
    return {v for v, d in dists.items() if d == dmax}


def finite_difference_gradient(weights, X, S, t, c, step=1e-4):
    """Central finite differences of P[t, c] over every feature entry."""
    from gbig.gcn import forward

    X = np.asarray(X, dtype=np.float64)
    grad = np.zeros_like(X)
    for v in range(X.shape[0]):
        for j in range(X.shape[1]):
            plus = X.copy()
            plus[v, j] += step
            minus = X.copy()
            minus[v, j] -= step
            grad[v, j] = (
                forward(weights, plus, S)[t, c] - forward(weights, minus, S)[t, c]
            ) / (2 * step)
    return grad


def entropy_of_path_set(g, paths):
    """Direct evaluation of the probability-weighted path information."""
    total = 0.0
    for path in paths:
        p = 1.0
        info = 0.0
        for v in path:
            p /= g.degree(v)
            info += np.log2(g.degree(v))
        total += p * info
    return total

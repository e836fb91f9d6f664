"""Undirected graph structure with BFS distances and shortest-path enumeration."""

from collections import deque

from .errors import IsolatedNodeError, NoPathError, PathBudgetExceededError

UNREACHABLE = -1

DEFAULT_PATH_BUDGET = 1024


class Graph:
    """Simple undirected, unweighted graph over nodes ``0..num_nodes-1``.

    Immutable after construction. Self-loops are dropped and duplicate
    edges collapsed; adjacency lists are kept sorted so every traversal
    is deterministic.
    """

    __slots__ = ("num_nodes", "_adj")

    def __init__(self, num_nodes, edges):
        if num_nodes < 0:
            raise ValueError("num_nodes must be non-negative")
        adj = [set() for _ in range(num_nodes)]
        for u, v in edges:
            if not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise IndexError(f"edge ({u}, {v}) out of range for {num_nodes} nodes")
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        self.num_nodes = num_nodes
        self._adj = tuple(tuple(sorted(s)) for s in adj)

    def neighbors(self, v):
        return self._adj[v]

    def degree(self, v):
        return len(self._adj[v])

    @property
    def num_edges(self):
        return sum(len(a) for a in self._adj) // 2

    def edges(self):
        """Yield each undirected edge once, as (u, v) with u < v, sorted."""
        for u in range(self.num_nodes):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def has_edge(self, u, v):
        return v in self._adj[u]

    def __repr__(self):
        return f"Graph(num_nodes={self.num_nodes}, num_edges={self.num_edges})"


def bfs_distances(g, src):
    """Hop count from ``src`` to every node; UNREACHABLE for other components."""
    if not 0 <= src < g.num_nodes:
        raise IndexError(f"source {src} out of range")
    dist = [UNREACHABLE] * g.num_nodes
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if dist[v] == UNREACHABLE:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def shortest_paths(g, b, x, budget=DEFAULT_PATH_BUDGET, truncate=False):
    """Enumerate every shortest path from ``b`` to ``x``.

    Paths are tuples of node indices, returned in lexicographic order.
    Raises PathBudgetExceededError when more than ``budget`` paths exist,
    unless ``truncate`` is set, in which case the lexicographically first
    ``budget`` paths are returned.
    """
    if b == x:
        raise ValueError("endpoints must differ")
    dist_b = bfs_distances(g, b)
    if dist_b[x] == UNREACHABLE:
        raise NoPathError(f"nodes {b} and {x} are in different components")
    dist_x = bfs_distances(g, x)
    d = dist_b[x]

    # Nodes on some shortest path satisfy dist_b(v) + dist_x(v) == d.
    on_dag = [
        dist_b[v] != UNREACHABLE
        and dist_x[v] != UNREACHABLE
        and dist_b[v] + dist_x[v] == d
        for v in range(g.num_nodes)
    ]
    # Count paths to x along the DAG, processing by decreasing dist_b.
    count = [0] * g.num_nodes
    count[x] = 1
    dag_nodes = sorted(
        (v for v in range(g.num_nodes) if on_dag[v]),
        key=lambda v: -dist_b[v],
    )
    for v in dag_nodes:
        if v == x:
            continue
        count[v] = sum(
            count[w]
            for w in g.neighbors(v)
            if on_dag[w] and dist_b[w] == dist_b[v] + 1
        )
    total = count[b]
    if total > budget and not truncate:
        raise PathBudgetExceededError(total, budget)

    limit = min(total, budget)
    paths = []
    # Iterative DFS; neighbor lists are sorted, so output is lexicographic.
    stack = [(b, [b])]
    while stack and len(paths) < limit:
        v, prefix = stack.pop()
        if v == x:
            paths.append(tuple(prefix))
            continue
        succ = [
            w
            for w in g.neighbors(v)
            if on_dag[w] and dist_b[w] == dist_b[v] + 1
        ]
        for w in reversed(succ):
            stack.append((w, prefix + [w]))
    return paths


def max_distance_set(g, x):
    """All nodes at maximal BFS distance from ``x`` within its component."""
    dist = bfs_distances(g, x)
    reachable = [d for v, d in enumerate(dist) if v != x and d != UNREACHABLE]
    if not reachable:
        raise IsolatedNodeError(f"node {x} has no reachable neighbors")
    dmax = max(reachable)
    return {v for v, d in enumerate(dist) if v != x and d == dmax}


def k_hop_nodes(g, x, k):
    """Nodes within ``k`` hops of ``x``, including ``x`` itself."""
    if k < 0:
        raise ValueError("k must be non-negative")
    dist = bfs_distances(g, x)
    return {v for v, d in enumerate(dist) if d != UNREACHABLE and d <= k}

"""Dense three-layer GCN: symmetric-normalized propagation, exact input
gradients, and full-batch gradient-descent training.

The functional core (`normalize_adjacency`, `forward`, `input_gradient`)
works on plain numpy weight lists; `GcnClassifier` wraps it in an
sklearn-style estimator bound to one graph (transductive).
"""

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator

from . import graphs


def normalize_adjacency(g):
    """Symmetric normalization D̃^{-1/2} (A + I) D̃^{-1/2} as a CSR matrix."""
    n = g.num_nodes
    rows, cols, vals = [], [], []
    deg = np.array([g.degree(v) + 1 for v in range(n)], dtype=np.float64)
    inv_sqrt = 1.0 / np.sqrt(deg)
    for u in range(n):
        rows.append(u)
        cols.append(u)
        vals.append(inv_sqrt[u] * inv_sqrt[u])
        for v in g.neighbors(u):
            rows.append(u)
            cols.append(v)
            vals.append(inv_sqrt[u] * inv_sqrt[v])
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def _softmax_rows(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _check_dims(weights, X):
    if X.shape[1] != weights[0].shape[0]:
        raise ValueError(
            f"feature dim {X.shape[1]} does not match W0 rows {weights[0].shape[0]}"
        )
    for i in range(len(weights) - 1):
        if weights[i].shape[1] != weights[i + 1].shape[0]:
            raise ValueError(
                f"W{i} cols {weights[i].shape[1]} do not match "
                f"W{i + 1} rows {weights[i + 1].shape[0]}"
            )


def _forward_cached(weights, X, S):
    """Forward pass keeping pre-activations for backward passes."""
    W0, W1, W2 = weights
    Z1 = S @ (X @ W0)
    H1 = np.maximum(Z1, 0.0)
    Z2 = S @ (H1 @ W1)
    H2 = np.maximum(Z2, 0.0)
    Z3 = S @ (H2 @ W2)
    P = _softmax_rows(Z3)
    return P, (Z1, H1, Z2, H2, Z3)


def forward(weights, X, S):
    """Class-probability matrix (num_nodes x C); rows sum to 1."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] != S.shape[0]:
        raise ValueError(f"{X.shape[0]} feature rows vs {S.shape[0]} graph nodes")
    _check_dims(weights, X)
    P, _ = _forward_cached(weights, X, S)
    return P


def input_gradient(weights, X, S, t, c):
    """Exact gradient of P[t, c] with respect to every input feature.

    Reverse mode through softmax, three propagation layers and the
    rectifier (subgradient 0 at the kink). S is symmetric, so its
    transpose never needs materializing.
    """
    X = np.asarray(X, dtype=np.float64)
    _check_dims(weights, X)
    W0, W1, W2 = weights
    P, (Z1, _, Z2, _, _) = _forward_cached(weights, X, S)
    n, C = P.shape
    if not (0 <= t < n and 0 <= c < C):
        raise IndexError(f"target {t} / class {c} out of range")
    # d P[t,c] / d Z3: softmax Jacobian on row t only.
    dZ3 = np.zeros_like(P)
    dZ3[t] = -P[t, c] * P[t]
    dZ3[t, c] += P[t, c]
    dH2 = (S @ dZ3) @ W2.T
    dZ2 = dH2 * (Z2 > 0)
    dH1 = (S @ dZ2) @ W1.T
    dZ1 = dH1 * (Z1 > 0)
    return (S @ dZ1) @ W0.T


def predict_class(weights, X, S, t):
    """(class index, probability) for node ``t``, lowest index on ties."""
    P = forward(weights, X, S)
    c = int(np.argmax(P[t]))
    return c, float(P[t, c])


def init_weights(feature_dim, hidden_dim, num_classes, seed):
    """Uniform Glorot-scale init, seeded; layer order W0, W1, W2."""
    rng = np.random.default_rng(seed)
    dims = [(feature_dim, hidden_dim), (hidden_dim, hidden_dim), (hidden_dim, num_classes)]
    weights = []
    for fan_in, fan_out in dims:
        scale = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-scale, scale, size=(fan_in, fan_out)))
    return weights


def train(weights, X, S, y, train_idx, learning_rate, epochs, weight_decay):
    """Full-batch gradient descent on cross-entropy over ``train_idx``.

    Returns (weights, loss_history); loss includes the L2 penalty.
    Deterministic: no randomness beyond the initial weights.
    """
    if len(train_idx) == 0:
        raise ValueError("train mask is empty")
    X = np.asarray(X, dtype=np.float64)
    W0, W1, W2 = (w.copy() for w in weights)
    n = X.shape[0]
    C = W2.shape[1]
    mask = np.zeros(n, dtype=bool)
    mask[list(train_idx)] = True
    n_train = int(mask.sum())
    Y = np.zeros((n, C))
    Y[np.arange(n), y] = 1.0

    history = []
    A0 = S @ X  # propagated input, constant across epochs
    for _ in range(epochs):
        Z1 = A0 @ W0
        H1 = np.maximum(Z1, 0.0)
        A1 = S @ H1
        Z2 = A1 @ W1
        H2 = np.maximum(Z2, 0.0)
        A2 = S @ H2
        Z3 = A2 @ W2
        P = _softmax_rows(Z3)

        logp = np.log(np.clip(P[mask, :], 1e-300, None))
        ce = -np.mean(logp[np.arange(n_train), y[mask]])
        penalty = 0.5 * weight_decay * sum(
            float(np.sum(W * W)) for W in (W0, W1, W2)
        )
        history.append(ce + penalty)

        dZ3 = (P - Y) * mask[:, None] / n_train
        dW2 = A2.T @ dZ3 + weight_decay * W2
        dZ2 = ((S @ dZ3) @ W2.T) * (Z2 > 0)
        dW1 = A1.T @ dZ2 + weight_decay * W1
        dZ1 = ((S @ dZ2) @ W1.T) * (Z1 > 0)
        dW0 = A0.T @ dZ1 + weight_decay * W0

        W0 -= learning_rate * dW0
        W1 -= learning_rate * dW1
        W2 -= learning_rate * dW2
    return [W0, W1, W2], history


class GcnClassifier(BaseEstimator):
    """Transductive node classifier over one fixed graph.

    After `fit` the estimator exposes `predict_proba` / `predict` /
    `input_gradient` against the stored normalized adjacency, which is
    the shape the attribution methods consume.
    """

    def __init__(self, hidden_dim=64, learning_rate=0.01, epochs=200,
                 weight_decay=5e-4, seed=0):
        self.hidden_dim = hidden_dim
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.weight_decay = weight_decay
        self.seed = seed

    def fit(self, graph, X, y, train_idx):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n_classes = int(y.max()) + 1
        S = normalize_adjacency(graph)
        weights = init_weights(X.shape[1], self.hidden_dim, n_classes, self.seed)
        self.weights_, self.loss_history_ = train(
            weights, X, S, y, train_idx,
            self.learning_rate, self.epochs, self.weight_decay,
        )
        self.graph_ = graph
        self.S_ = S
        self.n_classes_ = n_classes
        return self

    @classmethod
    def from_weights(cls, graph, weights, **params):
        """Bind pre-trained weights (e.g. a loaded checkpoint) to a graph."""
        est = cls(hidden_dim=weights[0].shape[1], **params)
        est.graph_ = graph
        est.S_ = normalize_adjacency(graph)
        est.weights_ = [np.asarray(w, dtype=np.float64) for w in weights]
        est.n_classes_ = est.weights_[-1].shape[1]
        est.loss_history_ = []
        return est

    def predict_proba(self, X):
        return forward(self.weights_, X, self.S_)

    def predict(self, X):
        return np.argmax(self.predict_proba(X), axis=1)

    def predict_class(self, X, t):
        return predict_class(self.weights_, X, self.S_, t)

    def input_gradient(self, X, t, c):
        return input_gradient(self.weights_, X, self.S_, t, c)

    def score(self, X, y, idx=None):
        pred = self.predict(X)
        y = np.asarray(y)
        if idx is not None:
            idx = np.asarray(list(idx))
            return float(np.mean(pred[idx] == y[idx]))
        return float(np.mean(pred == y))

"""Classifiers: decision tree, random forest, k-NN, Gaussian NB, logistic
regression, and the majority-class dummy.

All classifiers take a purely numeric, missing-free feature matrix. Class
order is first appearance in the training target, and every tie anywhere
breaks toward the lowest class index, so training and prediction are fully
deterministic (the forest additionally threads an explicit RNG).
"""

from __future__ import annotations

import math

import numpy as np

from .tables import Table
from .transforms import EngineError, numeric_matrix

VARIANCE_FLOOR = 1e-9


def _encode_labels(target: list[object]) -> tuple[list[object], np.ndarray]:
    """Classes in first-appearance order plus index-encoded labels."""
    classes: list[object] = []
    index: dict[object, int] = {}
    codes = np.empty(len(target), dtype=int)
    for i, label in enumerate(target):
        if label is None:
            raise EngineError("missing-values", "missing values in the target column")
        if label not in index:
            index[label] = len(classes)
            classes.append(label)
        codes[i] = index[label]
    return classes, codes


def _balanced_weights(codes: np.ndarray, n_classes: int) -> np.ndarray:
    counts = np.bincount(codes, minlength=n_classes).astype(float)
    per_class = len(codes) / (n_classes * counts)
    return per_class[codes]


def _impurity(weighted_counts: np.ndarray, criterion: str) -> float:
    total = weighted_counts.sum()
    if total <= 0:
        return 0.0
    p = weighted_counts / total
    if criterion == "entropy":
        nz = p[p > 0]
        return float(-(nz * np.log2(nz)).sum())
    return float(1.0 - (p ** 2).sum())


class DecisionTree:
    """Greedy axis-aligned splits minimizing weighted Gini (or entropy)."""

    def __init__(self, criterion: str = "gini", max_depth: int | None = None,
                 class_weight: str | None = None, random_state: int | None = None):
        self.criterion = criterion
        self.max_depth = max_depth
        self.class_weight = class_weight
        self.classes: list[object] = []
        self.root: dict | None = None
        # set by the forest: per-split candidate features come from this hook
        self._feature_picker = None

    def fit(self, X: np.ndarray, target: list[object],
            sample_weight: np.ndarray | None = None) -> "DecisionTree":
        self.classes, codes = _encode_labels(target)
        if sample_weight is None:
            sample_weight = np.ones(len(codes))
        if self.class_weight == "balanced":
            sample_weight = sample_weight * _balanced_weights(codes, len(self.classes))
        self.root = self._grow(X, codes, sample_weight, depth=0)
        return self

    def _class_sums(self, codes: np.ndarray, weights: np.ndarray) -> np.ndarray:
        return np.bincount(codes, weights=weights, minlength=len(self.classes))

    def _grow(self, X: np.ndarray, codes: np.ndarray, weights: np.ndarray, depth: int) -> dict:
        sums = self._class_sums(codes, weights)
        leaf = {"leaf": True, "value": int(np.argmax(sums))}
        if len(set(codes.tolist())) <= 1:
            return leaf
        if self.max_depth is not None and depth >= self.max_depth:
            return leaf
        split = self._best_split(X, codes, weights)
        if split is None:
            return leaf
        feature, threshold = split
        mask = X[:, feature] <= threshold
        return {
            "leaf": False,
            "feature": feature,
            "threshold": threshold,
            "left": self._grow(X[mask], codes[mask], weights[mask], depth + 1),
            "right": self._grow(X[~mask], codes[~mask], weights[~mask], depth + 1),
        }

    def _candidate_features(self, d: int) -> list[int]:
        if self._feature_picker is not None:
            return self._feature_picker(d)
        return list(range(d))

    def _best_split(self, X: np.ndarray, codes: np.ndarray, weights: np.ndarray):
        total = weights.sum()
        best = None
        best_score = math.inf
        for feature in self._candidate_features(X.shape[1]):
            column = X[:, feature]
            values = np.unique(column)
            if len(values) < 2:
                continue
            thresholds = (values[:-1] + values[1:]) / 2.0
            for threshold in thresholds:
                mask = column <= threshold
                wl, wr = weights[mask], weights[~mask]
                if wl.sum() == 0 or wr.sum() == 0:
                    continue
                score = (
                    wl.sum() * _impurity(self._class_sums(codes[mask], wl), self.criterion)
                    + wr.sum() * _impurity(self._class_sums(codes[~mask], wr), self.criterion)
                ) / total
                if score < best_score - 1e-15:  # strict improvement keeps first tie
                    best_score = score
                    best = (feature, float(threshold))
        return best

    def _predict_codes(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X), dtype=int)
        for i, row in enumerate(X):
            node = self.root
            while not node["leaf"]:
                node = node["left"] if row[node["feature"]] <= node["threshold"] else node["right"]
            out[i] = node["value"]
        return out

    def predict(self, X: np.ndarray) -> list[object]:
        return [self.classes[c] for c in self._predict_codes(X)]


class RandomForest:
    """Bootstrap-sampled trees with sqrt(d) feature subsampling, majority vote."""

    def __init__(self, n_estimators: int = 100, criterion: str = "gini",
                 max_depth: int | None = None, class_weight: str | None = None,
                 random_state: int | None = None):
        self.n_estimators = n_estimators
        self.criterion = criterion
        self.max_depth = max_depth
        self.class_weight = class_weight
        self.random_state = random_state
        self.classes: list[object] = []
        self.trees: list[DecisionTree] = []

    def fit(self, X: np.ndarray, target: list[object], seed: int = 0) -> "RandomForest":
        rng = np.random.default_rng(self.random_state if self.random_state is not None else seed)
        self.classes, codes = _encode_labels(target)
        weights = np.ones(len(codes))
        if self.class_weight == "balanced":
            weights = _balanced_weights(codes, len(self.classes))
        n, d = X.shape
        m = max(1, int(math.sqrt(d)))
        self.trees = []
        for _ in range(self.n_estimators):
            idx = rng.integers(0, n, n)
            tree = DecisionTree(self.criterion, self.max_depth)
            tree.classes = self.classes
            tree._feature_picker = lambda dd, r=rng, mm=m: sorted(r.choice(dd, size=min(mm, dd), replace=False).tolist())
            tree.root = tree._grow(X[idx], codes[idx], weights[idx], depth=0)
            self.trees.append(tree)
        return self

    def predict(self, X: np.ndarray) -> list[object]:
        votes = np.zeros((len(X), len(self.classes)), dtype=int)
        for tree in self.trees:
            codes = tree._predict_codes(X)
            votes[np.arange(len(X)), codes] += 1
        return [self.classes[c] for c in votes.argmax(axis=1)]


class KNearestNeighbors:
    """Euclidean k-NN with stable neighbor order and lowest-index vote ties."""

    def __init__(self, n_neighbors: int = 5):
        self.n_neighbors = n_neighbors
        self.X: np.ndarray | None = None
        self.codes: np.ndarray | None = None
        self.classes: list[object] = []

    def fit(self, X: np.ndarray, target: list[object]) -> "KNearestNeighbors":
        if self.n_neighbors > len(X):
            raise EngineError(
                "bad-arguments",
                f"n_neighbors={self.n_neighbors} exceeds the {len(X)} training rows",
            )
        self.classes, self.codes = _encode_labels(target)
        self.X = X
        return self

    def predict(self, X: np.ndarray) -> list[object]:
        out = []
        for row in X:
            dists = np.sqrt(((self.X - row) ** 2).sum(axis=1))
            order = np.argsort(dists, kind="stable")[: self.n_neighbors]
            counts = np.bincount(self.codes[order], minlength=len(self.classes))
            out.append(self.classes[int(np.argmax(counts))])
        return out


class GaussianNaiveBayes:
    """Per-class priors with independent per-feature Gaussians."""

    def __init__(self):
        self.classes: list[object] = []
        self.log_priors: np.ndarray | None = None
        self.means: np.ndarray | None = None
        self.variances: np.ndarray | None = None

    def fit(self, X: np.ndarray, target: list[object]) -> "GaussianNaiveBayes":
        self.classes, codes = _encode_labels(target)
        k, d = len(self.classes), X.shape[1]
        self.log_priors = np.log(np.bincount(codes, minlength=k) / len(codes))
        self.means = np.zeros((k, d))
        self.variances = np.zeros((k, d))
        for c in range(k):
            rows = X[codes == c]
            self.means[c] = rows.mean(axis=0)
            self.variances[c] = np.maximum(rows.var(axis=0), VARIANCE_FLOOR)
        return self

    def log_likelihoods(self, X: np.ndarray) -> np.ndarray:
        parts = []
        for c in range(len(self.classes)):
            var = self.variances[c]
            ll = -0.5 * (np.log(2 * np.pi * var) + (X - self.means[c]) ** 2 / var).sum(axis=1)
            parts.append(self.log_priors[c] + ll)
        return np.stack(parts, axis=1)

    def predict(self, X: np.ndarray) -> list[object]:
        scores = self.log_likelihoods(X)
        return [self.classes[int(c)] for c in scores.argmax(axis=1)]


class SoftmaxRegression:
    """Multinomial logistic regression by full-batch gradient descent.

    Fixed recipe for determinism: learning rate 0.1, 500 iterations, zero
    initialization, L2 strength 1/C on the weights (bias unpenalized).
    """

    LEARNING_RATE = 0.1
    ITERATIONS = 500

    def __init__(self, C: float = 1.0, random_state: int | None = None):
        if C <= 0:
            raise EngineError("bad-arguments", "C must be positive")
        self.C = C
        self.classes: list[object] = []
        self.weights: np.ndarray | None = None  # (d, k)
        self.bias: np.ndarray | None = None  # (k,)

    @staticmethod
    def _softmax(z: np.ndarray) -> np.ndarray:
        z = z - z.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)

    def fit(self, X: np.ndarray, target: list[object]) -> "SoftmaxRegression":
        self.classes, codes = _encode_labels(target)
        n, d = X.shape
        k = len(self.classes)
        Y = np.zeros((n, k))
        Y[np.arange(n), codes] = 1.0
        W = np.zeros((d, k))
        b = np.zeros(k)
        for _ in range(self.ITERATIONS):
            P = self._softmax(X @ W + b)
            G = P - Y
            W -= self.LEARNING_RATE * ((X.T @ G) / n + W / (self.C * n))
            b -= self.LEARNING_RATE * G.mean(axis=0)
        self.weights, self.bias = W, b
        return self

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights + self.bias

    def predict(self, X: np.ndarray) -> list[object]:
        return [self.classes[int(c)] for c in self.decision_scores(X).argmax(axis=1)]


class MajorityClass:
    """DummyClassifier: always predict the most frequent training class."""

    def __init__(self, strategy: str = "most_frequent"):
        self.strategy = strategy
        self.majority: object = None

    def fit(self, X: np.ndarray, target: list[object]) -> "MajorityClass":
        classes, codes = _encode_labels(target)
        counts = np.bincount(codes, minlength=len(classes))
        self.majority = classes[int(np.argmax(counts))]
        return self

    def predict(self, X: np.ndarray) -> list[object]:
        return [self.majority] * len(X)


PREDICTORS = {
    "DecisionTreeClassifier": DecisionTree,
    "RandomForestClassifier": RandomForest,
    "KNeighborsClassifier": KNearestNeighbors,
    "GaussianNB": GaussianNaiveBayes,
    "LogisticRegression": SoftmaxRegression,
    "DummyClassifier": MajorityClass,
}


def fit_predictor(operator: str, params: dict, features: Table, target: list[object], seed: int = 0):
    """Fit the named classifier on a numeric feature table."""
    X = numeric_matrix(features, operator)
    if len(X) == 0:
        raise EngineError("empty-train", "no training rows")
    cls = PREDICTORS.get(operator)
    if cls is None:
        raise EngineError("not-executable", f"{operator} is not an executable predictor")
    model = cls(**params)
    if isinstance(model, RandomForest):
        model.fit(X, target, seed=seed)
    else:
        model.fit(X, target)
    return model


def score(model, features: Table, target: list[object]) -> float:
    """Fraction of exact label matches on an evaluation table."""
    if len(target) == 0:
        raise EngineError("empty-eval", "empty evaluation set")
    X = numeric_matrix(features, type(model).__name__)
    predictions = model.predict(X)
    hits = sum(1 for p, t in zip(predictions, target) if p == t)
    return hits / len(target)

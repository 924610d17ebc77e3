"""Small self-contained learners backing the model-based metrics.

Feature matrices are dense float64: numericals min-max scaled, categoricals
as integer level codes (tree splits order the codes; the logistic model
standardizes everything anyway). Labels may be any hashable values; models
remember the class order (sorted unique labels) and return original labels.

All randomness flows through explicit seeds, so a fit with the same data
and seed is bit-for-bit reproducible regardless of scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .errors import ValidationError

DEFAULT_MAX_DEPTH = 8
DEFAULT_MIN_LEAF = 2


# ---------------------------------------------------------------------------
# logistic regression (multinomial, batch gradient descent)


def softmax_log_loss(W, b, X, y_codes, l2: float) -> float:
    """Mean cross-entropy of softmax(X W^T + b) plus (l2/2)*||W||^2.

    Kept as a pure function (as is its gradient) so the optimizer can be
    checked against finite differences.
    """
    z = X @ W.T + b
    z -= z.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(z).sum(axis=1))
    nll = float(np.mean(log_norm - z[np.arange(len(y_codes)), y_codes]))
    return nll + 0.5 * l2 * float(np.sum(W * W))


def softmax_log_loss_grad(W, b, X, y_codes, l2: float):
    """Analytic gradient of softmax_log_loss with respect to (W, b)."""
    n = X.shape[0]
    z = X @ W.T + b
    z -= z.max(axis=1, keepdims=True)
    e = np.exp(z)
    p = e / e.sum(axis=1, keepdims=True)
    p[np.arange(n), y_codes] -= 1.0
    return (p.T @ X) / n + l2 * W, p.mean(axis=0)


class LogisticRegressionModel:
    """Multinomial logistic regression trained by full-batch gradient descent.

    Features are standardized internally (constant ones pass through);
    weights start at zero, learning rate and iteration cap are fixed by the
    caller. Training stops early once the gradient is numerically flat.
    """

    def __init__(self, lr: float = 0.1, max_iter: int = 5000, l2: float = 1e-4,
                 tol: float = 1e-7):
        self.lr = lr
        self.max_iter = max_iter
        self.l2 = l2
        self.tol = tol

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        self.classes_, y_codes = np.unique(np.asarray(y), return_inverse=True)
        self._mu = X.mean(axis=0)
        sigma = X.std(axis=0)
        self._sigma = np.where(sigma == 0.0, 1.0, sigma)
        if len(self.classes_) < 2:
            self.W_ = None
            return self
        Z = (X - self._mu) / self._sigma
        k, d = len(self.classes_), Z.shape[1]
        W = np.zeros((k, d))
        b = np.zeros(k)
        for _ in range(self.max_iter):
            gW, gb = softmax_log_loss_grad(W, b, Z, y_codes, self.l2)
            W -= self.lr * gW
            b -= self.lr * gb
            if max(np.abs(gW).max(initial=0.0), np.abs(gb).max()) < self.tol:
                break
        self.W_ = W
        self.b_ = b
        return self

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        if self.W_ is None:
            return np.ones((X.shape[0], 1))
        z = ((X - self._mu) / self._sigma) @ self.W_.T + self.b_
        z -= z.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]


# ---------------------------------------------------------------------------
# decision trees (classification: Gini, regression: variance reduction)


class _Tree:
    """Flat array representation shared by both tree flavors."""

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list = []

    def add(self, feature=-1, threshold=0.0, value=None) -> int:
        self.feature.append(feature)
        self.threshold.append(threshold)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(value)
        return len(self.feature) - 1

    def apply(self, X) -> list:
        """Leaf value per row, via vectorized routing."""
        n = X.shape[0]
        out = [None] * n
        stack = [(0, np.arange(n))]
        while stack:
            nid, rows = stack.pop()
            if rows.size == 0:
                continue
            if self.feature[nid] < 0:
                val = self.value[nid]
                for r in rows:
                    out[r] = val
                continue
            mask = X[rows, self.feature[nid]] <= self.threshold[nid]
            stack.append((self.left[nid], rows[mask]))
            stack.append((self.right[nid], rows[~mask]))
        return out


def _split_candidates(xs: np.ndarray, min_leaf: int) -> np.ndarray:
    """Right-side start positions of admissible splits in a sorted column."""
    positions = np.nonzero(xs[1:] > xs[:-1])[0] + 1
    if positions.size == 0:
        return positions
    return positions[(positions >= min_leaf) & (positions <= xs.size - min_leaf)]


def _safe_threshold(lo: float, hi: float) -> float:
    thr = 0.5 * (lo + hi)
    # midpoint may round onto hi for adjacent floats; lo always routes correctly
    return thr if lo <= thr < hi else lo


class _TreeBuilder:
    def __init__(self, max_depth, min_leaf, max_features, rng):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.rng = rng

    def _feature_ids(self, n_features):
        if self.max_features is None or self.max_features >= n_features:
            return np.arange(n_features)
        return self.rng.choice(n_features, self.max_features, replace=False)

    def build(self, X, y, w) -> _Tree:
        tree = _Tree()
        self._grow(tree, X, y, w, np.arange(X.shape[0]), 0)
        return tree

    def _grow(self, tree, X, y, w, idx, depth) -> int:
        nid = tree.add(value=self._leaf_value(y, w, idx))
        if depth >= self.max_depth or idx.size < 2 * self.min_leaf or self._pure(y, idx):
            return nid
        best = self._best_split(X, y, w, idx)
        if best is None:
            return nid
        feature, threshold, left_rows, right_rows = best
        tree.feature[nid] = feature
        tree.threshold[nid] = threshold
        tree.left[nid] = self._grow(tree, X, y, w, left_rows, depth + 1)
        tree.right[nid] = self._grow(tree, X, y, w, right_rows, depth + 1)
        return nid

    def _best_split(self, X, y, w, idx):
        best_score = np.inf
        best = None
        for f in self._feature_ids(X.shape[1]):
            x = X[idx, f]
            order = np.argsort(x, kind="stable")
            xs = x[order]
            cands = _split_candidates(xs, self.min_leaf)
            if cands.size == 0:
                continue
            scores = self._impurity_scores(y, w, idx[order], cands)
            pos = int(np.argmin(scores))
            if scores[pos] < best_score - 1e-12:
                best_score = scores[pos]
                i = cands[pos]
                rows = idx[order]
                best = (
                    int(f),
                    _safe_threshold(float(xs[i - 1]), float(xs[i])),
                    rows[:i],
                    rows[i:],
                )
        return best

    # subclass hooks -------------------------------------------------------

    def _pure(self, y, idx) -> bool:
        raise NotImplementedError

    def _leaf_value(self, y, w, idx):
        raise NotImplementedError

    def _impurity_scores(self, y, w, ordered_idx, cands) -> np.ndarray:
        raise NotImplementedError


class _ClassifierBuilder(_TreeBuilder):
    def __init__(self, n_classes, **kw):
        super().__init__(**kw)
        self.n_classes = n_classes

    def _pure(self, y, idx):
        first = y[idx[0]]
        return bool(np.all(y[idx] == first))

    def _leaf_value(self, y, w, idx):
        counts = np.bincount(y[idx], weights=w[idx], minlength=self.n_classes)
        total = counts.sum()
        if total <= 0:  # all-zero weights: fall back to plain counts
            counts = np.bincount(y[idx], minlength=self.n_classes).astype(float)
            total = counts.sum()
        return counts / total

    def _impurity_scores(self, y, w, ordered_idx, cands):
        ys = y[ordered_idx]
        ws = w[ordered_idx]
        onehot = np.zeros((ys.size, self.n_classes))
        onehot[np.arange(ys.size), ys] = ws
        cum = np.cumsum(onehot, axis=0)
        total = cum[-1]
        left = cum[cands - 1]
        right = total - left
        wl = left.sum(axis=1)
        wr = right.sum(axis=1)
        wl_safe = np.where(wl > 0, wl, 1.0)
        wr_safe = np.where(wr > 0, wr, 1.0)
        gini_l = 1.0 - np.sum((left / wl_safe[:, None]) ** 2, axis=1)
        gini_r = 1.0 - np.sum((right / wr_safe[:, None]) ** 2, axis=1)
        wt = wl + wr
        return (wl * gini_l + wr * gini_r) / np.where(wt > 0, wt, 1.0)


class _RegressorBuilder(_TreeBuilder):
    def _pure(self, y, idx):
        return bool(np.all(y[idx] == y[idx[0]]))

    def _leaf_value(self, y, w, idx):
        ws = w[idx]
        total = ws.sum()
        if total <= 0:
            return float(y[idx].mean())
        return float(np.dot(y[idx], ws) / total)

    def _impurity_scores(self, y, w, ordered_idx, cands):
        ys = y[ordered_idx]
        ws = w[ordered_idx]
        cw = np.cumsum(ws)
        cwy = np.cumsum(ws * ys)
        cwy2 = np.cumsum(ws * ys * ys)
        wl = cw[cands - 1]
        wr = cw[-1] - wl
        sl = cwy[cands - 1]
        sr = cwy[-1] - sl
        ql = cwy2[cands - 1]
        qr = cwy2[-1] - ql
        wl_safe = np.where(wl > 0, wl, 1.0)
        wr_safe = np.where(wr > 0, wr, 1.0)
        var_l = ql / wl_safe - (sl / wl_safe) ** 2
        var_r = qr / wr_safe - (sr / wr_safe) ** 2
        wt = wl + wr
        return (wl * np.maximum(var_l, 0.0) + wr * np.maximum(var_r, 0.0)) / np.where(
            wt > 0, wt, 1.0
        )


class DecisionTreeModel:
    """CART classifier: Gini impurity, exact threshold splits on sorted values."""

    def __init__(self, max_depth: int = DEFAULT_MAX_DEPTH, min_leaf: int = DEFAULT_MIN_LEAF,
                 max_features: int | None = None, seed: int = 0):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.seed = seed

    def fit(self, X, y, sample_weight=None):
        X = np.asarray(X, dtype=np.float64)
        self.classes_, y_codes = np.unique(np.asarray(y), return_inverse=True)
        w = (
            np.ones(X.shape[0])
            if sample_weight is None
            else np.asarray(sample_weight, dtype=np.float64)
        )
        builder = _ClassifierBuilder(
            n_classes=len(self.classes_),
            max_depth=self.max_depth,
            min_leaf=self.min_leaf,
            max_features=self.max_features,
            rng=np.random.default_rng(self.seed),
        )
        self.tree_ = builder.build(X, y_codes, w)
        return self

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        return np.vstack(self.tree_.apply(X))

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]


class DecisionTreeRegressorModel:
    """CART regressor: variance-reduction splits, leaf means."""

    def __init__(self, max_depth: int = DEFAULT_MAX_DEPTH, min_leaf: int = DEFAULT_MIN_LEAF,
                 max_features: int | None = None, seed: int = 0):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.seed = seed

    def fit(self, X, y, sample_weight=None):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        w = (
            np.ones(X.shape[0])
            if sample_weight is None
            else np.asarray(sample_weight, dtype=np.float64)
        )
        builder = _RegressorBuilder(
            max_depth=self.max_depth,
            min_leaf=self.min_leaf,
            max_features=self.max_features,
            rng=np.random.default_rng(self.seed),
        )
        self.tree_ = builder.build(X, y, w)
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        return np.array(self.tree_.apply(X), dtype=np.float64)


# ---------------------------------------------------------------------------
# ensembles


class AdaBoostModel:
    """SAMME boosting of depth-1 stumps with the multiclass alpha term."""

    def __init__(self, n_estimators: int = 50, seed: int = 0):
        self.n_estimators = n_estimators
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        self.classes_, y_codes = np.unique(np.asarray(y), return_inverse=True)
        k = len(self.classes_)
        n = X.shape[0]
        w = np.full(n, 1.0 / n)
        self.stumps_ = []
        self.alphas_ = []
        if k < 2:
            return self
        for _ in range(self.n_estimators):
            stump = DecisionTreeModel(max_depth=1, min_leaf=1, seed=self.seed)
            stump.fit(X, y_codes, sample_weight=w)
            pred = stump.predict(X)
            miss = pred != y_codes
            err = float(np.dot(w, miss))
            if err >= 1.0 - 1.0 / k:  # no better than chance: stop boosting
                break
            alpha = np.log((1.0 - err) / max(err, 1e-12)) + np.log(k - 1.0)
            self.stumps_.append(stump)
            self.alphas_.append(alpha)
            if err <= 0.0:  # perfect stump dominates the vote
                break
            w *= np.exp(alpha * miss)
            w /= w.sum()
        return self

    def _votes(self, X):
        X = np.asarray(X, dtype=np.float64)
        k = len(self.classes_)
        votes = np.zeros((X.shape[0], k))
        if not self.stumps_:
            votes[:, 0] = 1.0
            return votes
        for alpha, stump in zip(self.alphas_, self.stumps_):
            pred = stump.predict(X).astype(np.int64)
            votes[np.arange(X.shape[0]), pred] += alpha
        return votes

    def predict_proba(self, X):
        votes = self._votes(X)
        total = votes.sum(axis=1, keepdims=True)
        return votes / np.where(total > 0, total, 1.0)

    def predict(self, X):
        return self.classes_[np.argmax(self._votes(X), axis=1)]


class _ForestMixin:
    def _tree_seeds(self, n):
        return np.random.SeedSequence(self.seed).spawn(n)

    @staticmethod
    def _max_features(n_features):
        return max(1, int(np.sqrt(n_features)))


class RandomForestModel(_ForestMixin):
    """Bagged CART classifiers with sqrt-feature subsampling per split."""

    def __init__(self, n_trees: int = 100, max_depth: int = DEFAULT_MAX_DEPTH,
                 min_leaf: int = DEFAULT_MIN_LEAF, seed: int = 0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        self.classes_, y_codes = np.unique(np.asarray(y), return_inverse=True)
        n = X.shape[0]
        m_try = self._max_features(X.shape[1])
        self.trees_ = []
        for ss in self._tree_seeds(self.n_trees):
            rng = np.random.default_rng(ss)
            boot = rng.integers(0, n, n)
            builder = _ClassifierBuilder(
                n_classes=len(self.classes_),
                max_depth=self.max_depth,
                min_leaf=self.min_leaf,
                max_features=m_try,
                rng=rng,
            )
            self.trees_.append(
                builder.build(X[boot], y_codes[boot], np.ones(n))
            )
        return self

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        acc = np.zeros((X.shape[0], len(self.classes_)))
        for tree in self.trees_:
            acc += np.vstack(tree.apply(X))
        return acc / len(self.trees_)

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]


class RandomForestRegressorModel(_ForestMixin):
    """Bagged CART regressors; prediction is the mean over trees."""

    def __init__(self, n_trees: int = 100, max_depth: int = DEFAULT_MAX_DEPTH,
                 min_leaf: int = DEFAULT_MIN_LEAF, seed: int = 0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        n = X.shape[0]
        m_try = self._max_features(X.shape[1])
        self.trees_ = []
        for ss in self._tree_seeds(self.n_trees):
            rng = np.random.default_rng(ss)
            boot = rng.integers(0, n, n)
            builder = _RegressorBuilder(
                max_depth=self.max_depth,
                min_leaf=self.min_leaf,
                max_features=m_try,
                rng=rng,
            )
            self.trees_.append(builder.build(X[boot], y[boot], np.ones(n)))
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        acc = np.zeros(X.shape[0])
        for tree in self.trees_:
            acc += np.array(tree.apply(X), dtype=np.float64)
        return acc / len(self.trees_)


# ---------------------------------------------------------------------------
# model specs, cross-validation, scoring

CLASSIFIER_KINDS = ("log_reg", "decision_tree", "adaboost", "random_forest")


@dataclass(frozen=True)
class ModelSpec:
    """Recipe for a learner: kind, constructor overrides, and a seed."""

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0


def fit(spec: ModelSpec, X, y):
    """Instantiate and train the learner a ModelSpec describes."""
    params = dict(spec.params)
    if spec.kind == "log_reg":
        model = LogisticRegressionModel(**params)
    elif spec.kind == "decision_tree":
        model = DecisionTreeModel(seed=spec.seed, **params)
    elif spec.kind == "adaboost":
        model = AdaBoostModel(seed=spec.seed, **params)
    elif spec.kind == "random_forest":
        model = RandomForestModel(seed=spec.seed, **params)
    elif spec.kind == "random_forest_regressor":
        model = RandomForestRegressorModel(seed=spec.seed, **params)
    else:
        raise ValidationError(f"unknown model kind {spec.kind!r}")
    return model.fit(X, y)


def kfold_indices(n: int, k: int = 5, seed: int = 0, labels=None):
    """Deterministic k-fold split of range(n); stratified when labels given.

    Folds partition all rows and their sizes differ by at most one. With
    labels, each class is dealt round-robin with a rotating offset so both
    the per-class and the total fold sizes stay balanced.
    """
    if k < 2:
        raise ValidationError(f"k must be >= 2, got {k}")
    if k > n:
        raise ValidationError(f"cannot make {k} folds from {n} rows")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    if labels is None:
        perm = rng.permutation(n)
        for f, chunk in enumerate(np.array_split(perm, k)):
            folds[f] = list(chunk)
    else:
        labels = np.asarray(labels)
        offset = 0
        for cls in np.unique(labels):
            members = rng.permutation(np.nonzero(labels == cls)[0])
            for i, row in enumerate(members):
                folds[(i + offset) % k].append(int(row))
            offset += members.size % k
    out = []
    all_rows = np.arange(n)
    for f in range(k):
        test = np.sort(np.array(folds[f], dtype=np.int64))
        train = np.setdiff1d(all_rows, test)
        out.append((train, test))
    return out


def auroc(y_true, y_score, positive) -> float:
    """Area under the ROC curve via the rank (Mann-Whitney) statistic.

    Ties in the scores receive average ranks, matching the probability
    that a random positive outranks a random negative with ties at 1/2.
    """
    y_true = np.asarray(y_true)
    y_score = np.asarray(y_score, dtype=np.float64)
    pos = y_true == positive
    n_pos = int(pos.sum())
    n_neg = y_true.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("auroc needs both classes present")
    ranks = sps.rankdata(y_score)
    r_pos = float(ranks[pos].sum())
    return (r_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _confusion(y_true, y_pred):
    labels = np.unique(np.concatenate([np.asarray(y_true), np.asarray(y_pred)]))
    index = {lab: i for i, lab in enumerate(labels)}
    mat = np.zeros((labels.size, labels.size), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        mat[index[t], index[p]] += 1
    return labels, mat


def precision_recall_f1(y_true, y_pred, label) -> tuple[float, float, float]:
    """Precision, recall and F1 of one class; empty denominators give 0."""
    labels, mat = _confusion(y_true, y_pred)
    where = np.nonzero(labels == label)[0]
    if where.size == 0:
        return 0.0, 0.0, 0.0
    i = int(where[0])
    tp = mat[i, i]
    fp = mat[:, i].sum() - tp
    fn = mat[i, :].sum() - tp
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return float(precision), float(recall), float(f1)


def scores(y_true, y_pred, y_score=None, positive=None) -> dict:
    """Classification scores: micro/macro F1, macro precision/recall, AUROC.

    Macro averages run over the union of labels seen in truth or
    prediction. AUROC is only defined for a binary truth with scores for
    the positive class; otherwise the key holds None.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValidationError("scores needs aligned prediction and truth")
    labels, mat = _confusion(y_true, y_pred)
    accuracy = float(np.trace(mat) / mat.sum())
    per_class = [precision_recall_f1(y_true, y_pred, lab) for lab in labels]
    out = {
        "f1_micro": accuracy,
        "f1_macro": float(np.mean([f for _, _, f in per_class])),
        "precision_macro": float(np.mean([p for p, _, _ in per_class])),
        "recall_macro": float(np.mean([r for _, r, _ in per_class])),
        "auroc": None,
    }
    true_labels = np.unique(y_true)
    if y_score is not None and true_labels.size == 2:
        pos = positive if positive is not None else true_labels[1]
        out["auroc"] = auroc(y_true, y_score, pos)
    return out

"""The style-feature detector: a small fully connected network over pair
vectors, with training, cross-validation, metrics, ablation, and timing.

Backpropagation is explicit so the gradients can be verified against
finite differences; training is deterministic for a fixed seed.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from stylodetect.errors import (
    DimensionMismatch,
    LengthMismatch,
    NonFiniteFeature,
    SingleClassInput,
)
from stylodetect.features import FEATURE_NAMES

MODEL_FORMAT_VERSION = 1


@dataclass
class TrainConfig:
    seed: int = 42
    hidden_units: int = 100
    learning_rate: float = 1e-3
    max_epochs: int = 200
    batch_size: int = 32
    standardize: bool = True
    feature_mask: tuple[str, ...] = tuple(FEATURE_NAMES)

    def __post_init__(self) -> None:
        if self.hidden_units < 1:
            raise ValueError("hidden_units must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not self.feature_mask:
            raise ValueError("feature_mask must be non-empty")

    def mask_indices(self) -> list[int]:
        """Pair-vector column indices for the masked features (both halves)."""
        base = [FEATURE_NAMES.index(name) for name in self.feature_mask]
        return sorted(base) + [i + len(FEATURE_NAMES) for i in sorted(base)]


@dataclass
class Standardizer:
    means: np.ndarray
    scales: np.ndarray

    @classmethod
    def fit(cls, x: np.ndarray) -> "Standardizer":
        means = x.mean(axis=0)
        scales = x.std(axis=0)
        # Zero-variance coordinates pass through unscaled.
        adjusted_means = np.where(scales == 0.0, 0.0, means)
        adjusted_scales = np.where(scales == 0.0, 1.0, scales)
        return cls(adjusted_means, adjusted_scales)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (x - self.means) / self.scales


def standardize_fit(train_vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    st = Standardizer.fit(np.asarray(train_vectors, dtype=float))
    return st.means, st.scales


def standardize_apply(
    vectors: np.ndarray, means: np.ndarray, scales: np.ndarray
) -> np.ndarray:
    return Standardizer(np.asarray(means), np.asarray(scales)).apply(
        np.asarray(vectors, dtype=float)
    )


@dataclass
class MlpModel:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    @property
    def layer_sizes(self) -> list[int]:
        return [self.w1.shape[0], self.w1.shape[1], self.w2.shape[1]]

    @classmethod
    def init(cls, n_in: int, n_hidden: int, n_out: int, rng: np.random.Generator) -> "MlpModel":
        # He initialization for the rectified hidden layer.
        w1 = rng.normal(0.0, np.sqrt(2.0 / n_in), size=(n_in, n_hidden))
        w2 = rng.normal(0.0, np.sqrt(2.0 / n_hidden), size=(n_hidden, n_out))
        return cls(w1, np.zeros(n_hidden), w2, np.zeros(n_out))

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        hidden = np.maximum(0.0, x @ self.w1 + self.b1)
        return _softmax(hidden @ self.w2 + self.b2), hidden

    def params(self) -> dict[str, np.ndarray]:
        return {"w1": self.w1, "b1": self.b1, "w2": self.w2, "b2": self.b2}


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def cross_entropy_loss(model: MlpModel, x: np.ndarray, y: np.ndarray) -> float:
    probs, _ = model.forward(x)
    picked = probs[np.arange(len(y)), y]
    return float(-np.mean(np.log(np.maximum(picked, 1e-300))))


def loss_and_grads(
    model: MlpModel, x: np.ndarray, y: np.ndarray
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy and its analytic gradients."""
    n = len(y)
    probs, hidden = model.forward(x)
    picked = probs[np.arange(n), y]
    loss = float(-np.mean(np.log(np.maximum(picked, 1e-300))))
    delta_out = probs.copy()
    delta_out[np.arange(n), y] -= 1.0
    delta_out /= n
    grad_w2 = hidden.T @ delta_out
    grad_b2 = delta_out.sum(axis=0)
    delta_hidden = delta_out @ model.w2.T
    delta_hidden[hidden <= 0.0] = 0.0
    grad_w1 = x.T @ delta_hidden
    grad_b1 = delta_hidden.sum(axis=0)
    return loss, {"w1": grad_w1, "b1": grad_b1, "w2": grad_w2, "b2": grad_b2}


def train_mlp(
    x: np.ndarray,
    y: Sequence[int],
    config: TrainConfig,
    n_classes: int | None = None,
) -> MlpModel:
    """Fit the network by mini-batch Adam on cross-entropy."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    if not np.all(np.isfinite(x)):
        raise NonFiniteFeature("training matrix contains non-finite values")
    classes = np.unique(y)
    if len(classes) < 2:
        raise SingleClassInput("training labels contain a single class")
    if n_classes is None:
        n_classes = int(classes.max()) + 1
    rng = np.random.default_rng(config.seed)
    model = MlpModel.init(x.shape[1], config.hidden_units, n_classes, rng)
    moments = {k: (np.zeros_like(v), np.zeros_like(v)) for k, v in model.params().items()}
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    step = 0
    initial_loss = cross_entropy_loss(model, x, y)
    for _ in range(config.max_epochs):
        order = rng.permutation(len(y))
        for start in range(0, len(y), config.batch_size):
            batch = order[start : start + config.batch_size]
            _, grads = loss_and_grads(model, x[batch], y[batch])
            step += 1
            params = model.params()
            for key, grad in grads.items():
                m, v = moments[key]
                m[...] = beta1 * m + (1 - beta1) * grad
                v[...] = beta2 * v + (1 - beta2) * grad * grad
                m_hat = m / (1 - beta1**step)
                v_hat = v / (1 - beta2**step)
                params[key] -= config.learning_rate * m_hat / (np.sqrt(v_hat) + eps)
    final_loss = cross_entropy_loss(model, x, y)
    if not all(np.all(np.isfinite(p)) for p in model.params().values()):
        raise NonFiniteFeature("training diverged to non-finite parameters")
    # Contract: training must not have made things worse overall.
    if final_loss > initial_loss:
        raise RuntimeError(
            f"training loss increased ({initial_loss:.4f} -> {final_loss:.4f})"
        )
    return model


def predict(model: MlpModel, vector: np.ndarray) -> tuple[int, np.ndarray]:
    vector = np.asarray(vector, dtype=float)
    if vector.ndim != 1 or vector.shape[0] != model.w1.shape[0]:
        raise DimensionMismatch(
            f"expected input of length {model.w1.shape[0]}, got {vector.shape}"
        )
    probs, _ = model.forward(vector[None, :])
    probs = probs[0]
    # Ties break toward the lower class index (argmax already does).
    return int(np.argmax(probs)), probs


def predict_batch(model: MlpModel, x: np.ndarray) -> np.ndarray:
    probs, _ = model.forward(np.asarray(x, dtype=float))
    return probs.argmax(axis=1)


# -- metrics ------------------------------------------------------------------


def f1_score(truth: Sequence[int], predicted: Sequence[int], positive_class: int) -> float:
    """Binary F1 in percent; 0 when precision + recall is 0."""
    if len(truth) != len(predicted):
        raise LengthMismatch("truth and predicted lengths differ")
    truth = np.asarray(truth)
    predicted = np.asarray(predicted)
    tp = int(np.sum((predicted == positive_class) & (truth == positive_class)))
    fp = int(np.sum((predicted == positive_class) & (truth != positive_class)))
    fn = int(np.sum((predicted != positive_class) & (truth == positive_class)))
    if 2 * tp + fp + fn == 0:
        return 0.0
    return 100.0 * 2 * tp / (2 * tp + fp + fn)


def macro_f1(truth: Sequence[int], predicted: Sequence[int], n_classes: int) -> float:
    if len(truth) != len(predicted):
        raise LengthMismatch("truth and predicted lengths differ")
    return float(np.mean([f1_score(truth, predicted, c) for c in range(n_classes)]))


def confusion_matrix(
    truth: Sequence[int], predicted: Sequence[int], n_classes: int
) -> np.ndarray:
    matrix = np.zeros((n_classes, n_classes), dtype=int)
    for t, p in zip(truth, predicted):
        matrix[t, p] += 1
    return matrix


def per_class_metrics(matrix: np.ndarray) -> list[dict]:
    out = []
    for c in range(matrix.shape[0]):
        tp = matrix[c, c]
        fp = matrix[:, c].sum() - tp
        fn = matrix[c, :].sum() - tp
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (
            200.0 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        out.append(
            {
                "precision": round(float(precision) * 100, 10),
                "recall": round(float(recall) * 100, 10),
                "f1": round(float(f1), 10),
            }
        )
    return out


@dataclass
class EvalReport:
    task: str
    class_names: list[str]
    fold_f1: list[float]
    mean_f1: float
    per_class: list[dict]
    confusion: list[list[int]]
    timing: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "class_names": self.class_names,
            "fold_f1": [round(v, 10) for v in self.fold_f1],
            "mean_f1": round(self.mean_f1, 10),
            "per_class": self.per_class,
            "confusion": self.confusion,
        }


# -- cross-validation ---------------------------------------------------------


def cross_validate(
    x: np.ndarray,
    y: Sequence[int],
    folds: Sequence[int],
    config: TrainConfig,
    task: str,
    class_names: Sequence[str],
    binary_positive: int | None = None,
    mask_columns: Sequence[int] | None = None,
) -> EvalReport:
    """Train on k-1 folds, evaluate on the held-out fold, for every fold.

    `binary_positive` selects binary F1 with that class as positive;
    otherwise macro F1 over all classes. The standardizer and model are
    fitted per fold on training data only.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    folds = np.asarray(folds, dtype=int)
    if mask_columns is not None:
        x = x[:, list(mask_columns)]
    n_classes = len(class_names)
    fold_ids = sorted(set(folds.tolist()))
    fold_f1: list[float] = []
    total_confusion = np.zeros((n_classes, n_classes), dtype=int)
    train_seconds = 0.0
    infer_seconds = 0.0
    for fold in fold_ids:
        train_idx = folds != fold
        test_idx = folds == fold
        x_train, y_train = x[train_idx], y[train_idx]
        x_test, y_test = x[test_idx], y[test_idx]
        started = time.perf_counter()
        if config.standardize:
            st = Standardizer.fit(x_train)
            x_train = st.apply(x_train)
            x_test = st.apply(x_test)
        model = train_mlp(x_train, y_train, config, n_classes=n_classes)
        train_seconds += time.perf_counter() - started
        started = time.perf_counter()
        predicted = predict_batch(model, x_test)
        infer_seconds += time.perf_counter() - started
        if binary_positive is not None:
            fold_f1.append(f1_score(y_test, predicted, binary_positive))
        else:
            fold_f1.append(macro_f1(y_test, predicted, n_classes))
        total_confusion += confusion_matrix(y_test, predicted, n_classes)
    return EvalReport(
        task=task,
        class_names=list(class_names),
        fold_f1=fold_f1,
        mean_f1=float(np.mean(fold_f1)),
        per_class=per_class_metrics(total_confusion),
        confusion=total_confusion.tolist(),
        timing={"training": train_seconds, "inference": infer_seconds},
    )


def feature_group_ablation(
    x: np.ndarray,
    y: Sequence[int],
    folds: Sequence[int],
    config: TrainConfig,
    group_features: Sequence[str],
    task: str,
    class_names: Sequence[str],
    binary_positive: int | None = None,
) -> EvalReport:
    """Same pipeline with the pair vector masked to one feature group."""
    masked = replace(config, feature_mask=tuple(group_features))
    return cross_validate(
        x,
        y,
        folds,
        masked,
        task,
        class_names,
        binary_positive=binary_positive,
        mask_columns=masked.mask_indices(),
    )


# -- serialization ------------------------------------------------------------


def model_to_dict(
    model: MlpModel,
    standardizer: Optional[Standardizer],
    feature_mask: Sequence[str],
    seed: int,
) -> dict:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "layer_sizes": model.layer_sizes,
        "w1": model.w1.tolist(),
        "b1": model.b1.tolist(),
        "w2": model.w2.tolist(),
        "b2": model.b2.tolist(),
        "standardizer": None
        if standardizer is None
        else {
            "means": standardizer.means.tolist(),
            "scales": standardizer.scales.tolist(),
        },
        "feature_mask": list(feature_mask),
        "seed": seed,
    }


def model_from_dict(payload: dict) -> tuple[MlpModel, Optional[Standardizer], list[str], int]:
    if payload.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format: {payload.get('format_version')}")
    model = MlpModel(
        np.asarray(payload["w1"], dtype=float),
        np.asarray(payload["b1"], dtype=float),
        np.asarray(payload["w2"], dtype=float),
        np.asarray(payload["b2"], dtype=float),
    )
    st = payload["standardizer"]
    standardizer = (
        None
        if st is None
        else Standardizer(np.asarray(st["means"]), np.asarray(st["scales"]))
    )
    return model, standardizer, list(payload["feature_mask"]), int(payload["seed"])


def save_model(path: str, model: MlpModel, standardizer, feature_mask, seed) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model, standardizer, feature_mask, seed), fh)


def load_model(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))

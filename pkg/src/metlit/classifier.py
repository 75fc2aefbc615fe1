"""Linear soft-margin SVM and stratified k-fold cross-validation.

The SVM minimizes lambda/2 ||w||^2 + mean hinge loss by Pegasos-style
subgradient descent (one sample per step, eta_t = 1/(lambda*t), bias
unregularized). Features are standardized on training statistics. Labels:
literal -> -1, metaphor -> +1; metaphor is the positive class throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import LITERAL, METAPHOR
from .embeddings import format_floats
from .sentvec import SentenceVector


class FoldError(RuntimeError):
    """A cross-validation training split lost one of the two classes."""


@dataclass
class SvmModel:
    weights: np.ndarray
    bias: float
    lam: float
    scale_mean: np.ndarray
    scale_std: np.ndarray  # zero-variance dimensions stored as 1 (passthrough)

    @property
    def dim(self) -> int:
        return len(self.weights)

    def standardize(self, x: np.ndarray) -> np.ndarray:
        return (x - self.scale_mean) / self.scale_std


@dataclass
class FoldMetrics:
    accuracy: float
    precision: float | None  # None when tp + fp == 0
    tp: int
    fp: int
    tn: int
    fn: int


@dataclass
class EvalReport:
    per_fold: list[FoldMetrics]
    mean_accuracy: float
    mean_precision: float | None


def _labels_to_signs(vectors: list[SentenceVector]) -> np.ndarray:
    return np.array([1.0 if sv.label == METAPHOR else -1.0 for sv in vectors])


def _feature_matrix(vectors: list[SentenceVector]) -> np.ndarray:
    dims = {len(sv.values) for sv in vectors}
    if len(dims) != 1:
        raise ValueError(f"inconsistent vector dimensions: {sorted(dims)}")
    return np.stack([sv.values for sv in vectors])


def train_svm(
    train: list[SentenceVector],
    lam: float = 1e-4,
    epochs: int = 100,
    seed: int = 0,
) -> SvmModel:
    """Fit the hinge objective on standardized features; deterministic per seed.

    The bias rides along as an augmented constant feature so the 1/(lam*t)
    step schedule stays stable, and iterates over the second half of
    training are averaged, which tightens convergence at small lam.
    """
    if not train:
        raise ValueError("empty training set")
    signs = _labels_to_signs(train)
    if len(set(signs)) < 2:
        raise ValueError("training set must contain both classes")
    x = _feature_matrix(train)
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    z = (x - mean) / std
    n, dim = z.shape
    z_aug = np.hstack([z, np.ones((n, 1))])
    w = np.zeros(dim + 1)
    rng = np.random.default_rng(seed)
    radius = 1.0 / math.sqrt(lam)
    averaging_from = (epochs * n) // 2
    avg = np.zeros(dim + 1)
    averaged = 0
    t = 0
    for _ in range(epochs):
        for idx in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            violated = signs[idx] * (z_aug[idx] @ w) < 1.0
            w *= 1.0 - eta * lam
            if violated:
                w += eta * signs[idx] * z_aug[idx]
            # optional projection onto the ball ||w|| <= 1/sqrt(lam)
            norm = float(np.linalg.norm(w))
            if norm > radius:
                w *= radius / norm
            if t > averaging_from:
                avg += w
                averaged += 1
    if averaged:
        w = avg / averaged
    return SvmModel(
        weights=w[:dim], bias=float(w[dim]), lam=lam, scale_mean=mean, scale_std=std
    )


def hinge_objective(model: SvmModel, vectors: list[SentenceVector]) -> float:
    """lambda/2 ||w||^2 + mean hinge loss on standardized features."""
    z = model.standardize(_feature_matrix(vectors))
    signs = _labels_to_signs(vectors)
    margins = signs * (z @ model.weights + model.bias)
    hinge = np.maximum(0.0, 1.0 - margins).mean()
    return float(0.5 * model.lam * model.weights @ model.weights + hinge)


def predict(model: SvmModel, values: np.ndarray) -> tuple[str, float]:
    """Return (label, margin); metaphor iff margin > 0, exact 0 -> literal."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (model.dim,):
        raise ValueError(f"expected dimension {model.dim}, got {values.shape}")
    margin = float(model.standardize(values) @ model.weights + model.bias)
    return (METAPHOR if margin > 0 else LITERAL), margin


def kfold_split(
    n: int,
    k: int,
    seed: int = 0,
    stratified: bool = False,
    labels: list[str] | None = None,
) -> list[np.ndarray]:
    """Partition 0..n-1 into k folds with sizes differing by at most one.

    Stratified mode deals each class's shuffled members across folds,
    rotating which folds receive the leftover extras so per-fold class
    counts stay within one of the class's even share.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError(f"k={k} exceeds dataset size n={n}")
    rng = np.random.default_rng(seed)
    if not stratified:
        order = rng.permutation(n)
        return [fold for fold in np.array_split(order, k)]
    if labels is None or len(labels) != n:
        raise ValueError("stratified split needs one label per item")
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for cls in sorted(set(labels)):
        members = np.array([i for i, lab in enumerate(labels) if lab == cls])
        members = members[rng.permutation(len(members))]
        base, extra = divmod(len(members), k)
        sizes = [base] * k
        for e in range(extra):
            sizes[(offset + e) % k] += 1
        offset = (offset + extra) % k
        pos = 0
        for f in range(k):
            folds[f].extend(members[pos:pos + sizes[f]].tolist())
            pos += sizes[f]
    return [np.array(sorted(fold)) for fold in folds]


def evaluate_fold(
    model: SvmModel, test: list[SentenceVector]
) -> FoldMetrics:
    tp = fp = tn = fn = 0
    for sv in test:
        predicted, _ = predict(model, sv.values)
        if predicted == METAPHOR:
            if sv.label == METAPHOR:
                tp += 1
            else:
                fp += 1
        else:
            if sv.label == LITERAL:
                tn += 1
            else:
                fn += 1
    total = tp + fp + tn + fn
    accuracy = (tp + tn) / total
    precision = tp / (tp + fp) if (tp + fp) > 0 else None
    return FoldMetrics(accuracy=accuracy, precision=precision, tp=tp, fp=fp, tn=tn, fn=fn)


def cross_validate(
    vectors: list[SentenceVector],
    k: int = 10,
    lam: float = 1e-4,
    epochs: int = 100,
    seed: int = 0,
    stratified: bool = True,
) -> EvalReport:
    """Train on k-1 folds, evaluate on the held-out fold, for every fold.

    Folds are stratified by default so near-balanced data cannot produce a
    single-class training split. Mean precision averages only the folds
    where precision is defined.
    """
    labels = [sv.label for sv in vectors]
    folds = kfold_split(len(vectors), k, seed=seed, stratified=stratified, labels=labels)
    per_fold: list[FoldMetrics] = []
    for f, fold in enumerate(folds):
        held_out = set(fold.tolist())
        train = [sv for i, sv in enumerate(vectors) if i not in held_out]
        test = [vectors[i] for i in fold]
        train_labels = {sv.label for sv in train}
        if len(train_labels) < 2:
            raise FoldError(f"fold {f}: training split lost a class")
        model = train_svm(train, lam=lam, epochs=epochs, seed=seed + f)
        per_fold.append(evaluate_fold(model, test))
    mean_accuracy = sum(m.accuracy for m in per_fold) / len(per_fold)
    defined = [m.precision for m in per_fold if m.precision is not None]
    mean_precision = sum(defined) / len(defined) if defined else None
    return EvalReport(
        per_fold=per_fold, mean_accuracy=mean_accuracy, mean_precision=mean_precision
    )


def save_model(model: SvmModel, path: str) -> None:
    """Text format: `D lambda bias`, weights, scaling means, scaling stds."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{model.dim} {model.lam!r} {model.bias!r}\n")
        fh.write(format_floats(model.weights) + "\n")
        fh.write(format_floats(model.scale_mean) + "\n")
        fh.write(format_floats(model.scale_std) + "\n")


def load_model(path: str) -> SvmModel:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError("model header must be 'D lambda bias'")
        dim, lam, bias = int(header[0]), float(header[1]), float(header[2])
        rows = []
        for name in ("weights", "means", "stds"):
            line = fh.readline().split()
            if len(line) != dim:
                raise ValueError(f"model {name} line must hold {dim} values")
            rows.append(np.array([float(v) for v in line]))
    return SvmModel(
        weights=rows[0], bias=bias, lam=lam, scale_mean=rows[1], scale_std=rows[2]
    )


def save_report(report: EvalReport, path: str) -> None:
    """TSV: one row per fold plus a mean summary line."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("fold\taccuracy\tprecision\ttp\tfp\ttn\tfn\n")
        for f, m in enumerate(report.per_fold):
            prec = "NA" if m.precision is None else f"{m.precision:.6f}"
            fh.write(
                f"{f}\t{m.accuracy:.6f}\t{prec}\t{m.tp}\t{m.fp}\t{m.tn}\t{m.fn}\n"
            )
        mean_prec = (
            "NA" if report.mean_precision is None else f"{report.mean_precision:.6f}"
        )
        fh.write(f"mean\t{report.mean_accuracy:.6f}\t{mean_prec}\t\t\t\t\n")

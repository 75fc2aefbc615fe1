"""GloVe: weighted least-squares factorization of the co-occurrence table.

Minimizes sum over pairs of f(X_ij) * (w_i . w~_j + b_i + b~_j - ln X_ij)^2
with per-coordinate AdaGrad updates. The weight function f damps very
frequent pairs: (x / x_max)^a below the cutoff, 1 above it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cooccur import CooccurrenceTable
from .corpus import Vocabulary
from .embeddings import EmbeddingMatrix


@dataclass
class WeightParams:
    a: float = 0.75
    x_max: float = 100.0

    def __post_init__(self):
        if not 0 < self.a <= 1:
            raise ValueError("weight exponent must be in (0, 1]")
        if self.x_max <= 0:
            raise ValueError("x_max must be positive")


def weight_f(x: float, params: WeightParams = WeightParams()) -> float:
    """(x/x_max)^alpha for x < x_max, else 1. Monotone, in [0, 1]."""
    if x < 0:
        raise ValueError("co-occurrence count must be nonnegative")
    if x >= params.x_max:
        return 1.0
    return (x / params.x_max) ** params.a


@dataclass
class GloveModel:
    w: np.ndarray        # (V, D) main vectors
    w_tilde: np.ndarray  # (V, D) context vectors
    b: np.ndarray        # (V,) main biases
    b_tilde: np.ndarray  # (V,) context biases
    acc_w: np.ndarray
    acc_w_tilde: np.ndarray
    acc_b: np.ndarray
    acc_b_tilde: np.ndarray

    @property
    def dim(self) -> int:
        return self.w.shape[1]

    def copy(self) -> "GloveModel":
        return GloveModel(*(a.copy() for a in (
            self.w, self.w_tilde, self.b, self.b_tilde,
            self.acc_w, self.acc_w_tilde, self.acc_b, self.acc_b_tilde,
        )))

    def combined(self) -> np.ndarray:
        """Final embedding per word: w + w~ (both sides see the same evidence)."""
        return self.w + self.w_tilde


def init_model(vocab_size: int, dim: int, seed: int = 0) -> GloveModel:
    """All four parameter groups uniform in [-0.5/D, 0.5/D]; accumulators 1."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    bound = 0.5 / dim
    return GloveModel(
        w=rng.uniform(-bound, bound, size=(vocab_size, dim)),
        w_tilde=rng.uniform(-bound, bound, size=(vocab_size, dim)),
        b=rng.uniform(-bound, bound, size=vocab_size),
        b_tilde=rng.uniform(-bound, bound, size=vocab_size),
        acc_w=np.ones((vocab_size, dim)),
        acc_w_tilde=np.ones((vocab_size, dim)),
        acc_b=np.ones(vocab_size),
        acc_b_tilde=np.ones(vocab_size),
    )


def pair_loss(
    model: GloveModel, i: int, j: int, x: float,
    params: WeightParams = WeightParams(),
) -> float:
    """f(X_ij) * (w_i . w~_j + b_i + b~_j - ln X_ij)^2."""
    if x <= 0:
        raise ValueError("pair loss requires X_ij > 0 (log undefined)")
    residual = float(model.w[i] @ model.w_tilde[j] + model.b[i] + model.b_tilde[j]) - math.log(x)
    return weight_f(x, params) * residual * residual


def pair_gradients(
    model: GloveModel, i: int, j: int, x: float,
    params: WeightParams = WeightParams(),
) -> tuple[float, np.ndarray, np.ndarray, float, float]:
    """Loss and analytic gradients (d_wi, d_wtj, d_bi, d_btj) for one entry."""
    if x <= 0:
        raise ValueError("pair loss requires X_ij > 0 (log undefined)")
    f = weight_f(x, params)
    residual = float(model.w[i] @ model.w_tilde[j] + model.b[i] + model.b_tilde[j]) - math.log(x)
    loss = f * residual * residual
    common = 2.0 * f * residual
    return loss, common * model.w_tilde[j], common * model.w[i], common, common


def adagrad_step(
    model: GloveModel, i: int, j: int, x: float, lr0: float,
    params: WeightParams = WeightParams(),
) -> float:
    """One AdaGrad update on entry (i, j); returns the pre-step loss.

    Updates use the accumulators as they stand, then the squared gradients
    are added, matching the usual convention for this objective.
    """
    if lr0 <= 0:
        raise ValueError("lr0 must be positive")
    loss, d_wi, d_wtj, d_bi, d_btj = pair_gradients(model, i, j, x, params)
    model.w[i] -= lr0 * d_wi / np.sqrt(model.acc_w[i])
    model.w_tilde[j] -= lr0 * d_wtj / np.sqrt(model.acc_w_tilde[j])
    model.b[i] -= lr0 * d_bi / math.sqrt(model.acc_b[i])
    model.b_tilde[j] -= lr0 * d_btj / math.sqrt(model.acc_b_tilde[j])
    model.acc_w[i] += d_wi * d_wi
    model.acc_w_tilde[j] += d_wtj * d_wtj
    model.acc_b[i] += d_bi * d_bi
    model.acc_b_tilde[j] += d_btj * d_btj
    return loss


def total_loss(
    model: GloveModel, table: CooccurrenceTable,
    params: WeightParams = WeightParams(),
) -> float:
    return sum(
        pair_loss(model, i, j, x, params) for (i, j), x in table.entries.items()
    )


@dataclass
class GloveConfig:
    dim: int = 100
    lr: float = 0.05
    epochs: int = 15
    params: WeightParams = None  # defaults applied in __post_init__
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.params is None:
            self.params = WeightParams()


def _train_entries(model, entries, lr, params):
    loss = 0.0
    for i, j, x in entries:
        loss += adagrad_step(model, i, j, x, lr, params)
    return loss


def train_glove(
    table: CooccurrenceTable,
    vocab: Vocabulary,
    config: GloveConfig,
) -> tuple[EmbeddingMatrix, list[float]]:
    """Fit vectors and biases over the table; return embeddings + epoch losses.

    Entries are visited in seeded shuffled order each epoch. The reported
    loss per epoch is the total weighted objective summed over entries (at
    the parameter values each entry was visited with). Divergence is
    surfaced: non-finite parameters raise instead of being clipped.
    """
    if not table.entries:
        raise ValueError("empty co-occurrence table")
    model = init_model(len(vocab), config.dim, seed=config.seed)
    entries = [(i, j, x) for (i, j), x in table.sorted_items()]
    shuffle_rng = np.random.default_rng(config.seed + 1)
    epoch_losses: list[float] = []
    for epoch in range(config.epochs):
        order = shuffle_rng.permutation(len(entries))
        shuffled = [entries[k] for k in order]
        if config.threads <= 1:
            epoch_loss = _train_entries(model, shuffled, config.lr, config.params)
        else:
            shards = [shuffled[t::config.threads] for t in range(config.threads)]
            with ThreadPoolExecutor(max_workers=config.threads) as pool:
                futures = [
                    pool.submit(_train_entries, model, shard, config.lr, config.params)
                    for shard in shards
                ]
                epoch_loss = sum(f.result() for f in futures)
        epoch_losses.append(epoch_loss)
        for arr in (model.w, model.w_tilde, model.b, model.b_tilde):
            if not np.isfinite(arr).all():
                raise FloatingPointError(f"non-finite parameters after epoch {epoch}")
    embeddings = EmbeddingMatrix(list(vocab.words), model.combined())
    return embeddings, epoch_losses

"""CBOW word vector training by stochastic gradient descent.

Predicts a center word from the mean of its context vectors. Two modes:
an exact softmax (small vocabularies, used to verify gradients) and the
negative-sampling surrogate for scale. The objective J = -log P(center |
context) is minimized, which maximizes the log-likelihood.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cooccur import ContextWindow, iterate_windows
from .corpus import Vocabulary
from .embeddings import EmbeddingMatrix

LR_FLOOR_FRACTION = 1e-4  # linear decay ends at lr0 * this


@dataclass
class CbowModel:
    input_vectors: np.ndarray   # (V, D) context side
    output_vectors: np.ndarray  # (V, D) center side
    m: int = 5                  # window radius

    @property
    def dim(self) -> int:
        return self.input_vectors.shape[1]

    @property
    def vocab_size(self) -> int:
        return self.input_vectors.shape[0]

    def copy(self) -> "CbowModel":
        return CbowModel(self.input_vectors.copy(), self.output_vectors.copy(), self.m)


def init_model(vocab_size: int, dim: int, m: int = 5, seed: int = 0) -> CbowModel:
    """Input vectors uniform in [-0.5/D, 0.5/D]; output vectors zero."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    bound = 0.5 / dim
    input_vectors = rng.uniform(-bound, bound, size=(vocab_size, dim))
    output_vectors = np.zeros((vocab_size, dim))
    return CbowModel(input_vectors, output_vectors, m=m)


def context_mean(model: CbowModel, window: ContextWindow) -> np.ndarray:
    """Arithmetic mean of input vectors over the context ids."""
    if not window.context:
        raise ValueError("empty context window")
    return model.input_vectors[window.context].mean(axis=0)


def exact_probabilities(model: CbowModel, window: ContextWindow) -> np.ndarray:
    """Full softmax over the vocabulary for the window's context mean."""
    h = context_mean(model, window)
    logits = model.output_vectors @ h
    logits -= logits.max()
    exp = np.exp(logits)
    return exp / exp.sum()


def loss_exact(model: CbowModel, window: ContextWindow) -> float:
    """-log softmax(output . context_mean)[center]; always >= 0."""
    h = context_mean(model, window)
    logits = model.output_vectors @ h
    shift = logits.max()
    return float(shift + np.log(np.exp(logits - shift).sum()) - logits[window.center])


def exact_gradients(
    model: CbowModel, window: ContextWindow
) -> tuple[float, np.ndarray, np.ndarray]:
    """Loss plus gradients for exact mode.

    Returns (loss, grad over output_vectors (V, D), grad of the context
    mean h (D,)). The per-context-row input gradient is grad_h / |context|,
    accumulated once per occurrence of a duplicated id.
    """
    h = context_mean(model, window)
    logits = model.output_vectors @ h
    shift = logits.max()
    exp = np.exp(logits - shift)
    probs = exp / exp.sum()
    loss = float(shift + np.log(exp.sum()) - logits[window.center])
    d_logits = probs.copy()
    d_logits[window.center] -= 1.0
    grad_output = np.outer(d_logits, h)
    grad_h = model.output_vectors.T @ d_logits
    return loss, grad_output, grad_h


def sgd_step_exact(model: CbowModel, window: ContextWindow, lr: float) -> float:
    """Apply one exact-softmax gradient step in place; return pre-step loss."""
    if lr < 0:
        raise ValueError("learning rate must be >= 0")
    loss, grad_output, grad_h = exact_gradients(model, window)
    ctx = np.asarray(window.context)
    model.output_vectors -= lr * grad_output
    np.add.at(model.input_vectors, ctx, -lr * grad_h / len(ctx))
    return loss


class UnigramSampler:
    """Draws noise words from unigram frequency raised to the 0.75 power."""

    def __init__(self, freqs: np.ndarray, power: float = 0.75):
        weights = np.asarray(freqs, dtype=np.float64) ** power
        total = weights.sum()
        if total <= 0:
            raise ValueError("sampler needs at least one positive frequency")
        self._cumulative = np.cumsum(weights / total)
        self._cumulative[-1] = 1.0

    @classmethod
    def from_vocabulary(cls, vocab: Vocabulary, power: float = 0.75) -> "UnigramSampler":
        freqs = np.array([vocab.freq[w] for w in vocab.words], dtype=np.float64)
        return cls(freqs, power=power)

    def draw(self, rng: np.random.Generator, k: int) -> np.ndarray:
        return np.searchsorted(self._cumulative, rng.random(k), side="right")


def sample_negatives(
    sampler: UnigramSampler, rng: np.random.Generator, center: int, k: int
) -> list[int]:
    """Draw k negatives; a draw equal to the center is resampled once, then dropped."""
    negatives = sampler.draw(rng, k)
    collisions = negatives == center
    if collisions.any():
        redraws = sampler.draw(rng, int(collisions.sum()))
        negatives = negatives.copy()
        negatives[collisions] = redraws
    return [int(n) for n in negatives if n != center]


def negative_loss(
    model: CbowModel, window: ContextWindow, negatives: list[int]
) -> float:
    """Surrogate loss: -log sig(s_center) - sum(log sig(-s_negative))."""
    h = context_mean(model, window)
    s_pos = float(model.output_vectors[window.center] @ h)
    loss = float(np.logaddexp(0.0, -s_pos))
    if negatives:
        s_neg = model.output_vectors[negatives] @ h
        loss += float(np.logaddexp(0.0, s_neg).sum())
    return loss


def negative_gradients(
    model: CbowModel, window: ContextWindow, negatives: list[int]
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Loss plus gradients of the surrogate for fixed negatives.

    Returns (loss, rows = [center] + negatives as an array, grad over those
    output rows, grad of the context mean).
    """
    h = context_mean(model, window)
    rows = np.array([window.center] + list(negatives))
    scores = model.output_vectors[rows] @ h
    sig = 1.0 / (1.0 + np.exp(-scores))
    loss = float(np.logaddexp(0.0, -scores[0]))
    if len(negatives):
        loss += float(np.logaddexp(0.0, scores[1:]).sum())
    coeff = sig.copy()
    coeff[0] -= 1.0  # positive term: sigma - 1; negatives keep sigma
    grad_rows = np.outer(coeff, h)
    grad_h = coeff @ model.output_vectors[rows]
    return loss, rows, grad_rows, grad_h


def sgd_step_negative(
    model: CbowModel,
    window: ContextWindow,
    lr: float,
    k: int,
    sampler: UnigramSampler,
    rng: np.random.Generator,
) -> float:
    """Apply one negative-sampling step in place; return pre-step loss."""
    if k < 1:
        raise ValueError("negatives count must be >= 1")
    negatives = sample_negatives(sampler, rng, window.center, k)
    loss, rows, grad_rows, grad_h = negative_gradients(model, window, negatives)
    ctx = np.asarray(window.context)
    np.add.at(model.output_vectors, rows, -lr * grad_rows)
    np.add.at(model.input_vectors, ctx, -lr * grad_h / len(ctx))
    return loss


@dataclass
class CbowConfig:
    dim: int = 100
    window: int = 5           # radius m
    epochs: int = 5
    lr: float = 0.05
    negatives: int = 5
    seed: int = 0
    threads: int = 1
    mode: str = "negative"    # "negative" or "exact"


def _window_schedule(lr0: float, processed: int, total: int) -> float:
    frac = processed / total if total else 1.0
    return lr0 * max(LR_FLOOR_FRACTION, 1.0 - (1.0 - LR_FLOOR_FRACTION) * frac)


def _train_shard(model, shard, lr0, processed_base, total, config, sampler, seed):
    rng = np.random.default_rng(seed)
    loss_sum = 0.0
    loss_count = 0
    for n, window in enumerate(shard):
        if not window.context:
            continue
        lr = _window_schedule(lr0, processed_base + n, total)
        if config.mode == "exact":
            loss_sum += sgd_step_exact(model, window, lr)
        else:
            loss_sum += sgd_step_negative(
                model, window, lr, config.negatives, sampler, rng
            )
        loss_count += 1
    return loss_sum, loss_count


def train_cbow(
    sentences: list[list[int]],
    vocab: Vocabulary,
    config: CbowConfig,
) -> tuple[EmbeddingMatrix, list[float]]:
    """Train over encoded sentences; return embeddings and mean loss per epoch.

    The final embeddings are the input (context-side) vectors. Sentence
    order is reshuffled each epoch from the seed; with threads=1 training
    is bit-reproducible. With threads>1 workers update the shared matrices
    without locks, so lost updates are tolerated and only statistical
    quality is guaranteed.
    """
    if config.mode not in ("negative", "exact"):
        raise ValueError("mode must be 'negative' or 'exact'")
    sentences = [s for s in sentences if s]
    if not sentences:
        raise ValueError("empty corpus")
    model = init_model(len(vocab), config.dim, m=config.window, seed=config.seed)
    sampler = UnigramSampler.from_vocabulary(vocab)
    order_rng = np.random.default_rng(config.seed + 1)
    windows_per_epoch = sum(len(s) for s in sentences)
    total = windows_per_epoch * max(config.epochs, 1)
    epoch_losses: list[float] = []
    processed = 0
    for epoch in range(config.epochs):
        order = order_rng.permutation(len(sentences))
        windows = [
            w
            for idx in order
            for w in iterate_windows(sentences[idx], config.window)
        ]
        if config.threads <= 1:
            loss_sum, loss_count = _train_shard(
                model, windows, config.lr, processed, total, config, sampler,
                seed=config.seed + 7919 * (epoch + 1),
            )
        else:
            shards = [windows[t::config.threads] for t in range(config.threads)]
            with ThreadPoolExecutor(max_workers=config.threads) as pool:
                futures = [
                    pool.submit(
                        _train_shard, model, shard, config.lr,
                        processed + t * len(shard), total, config, sampler,
                        config.seed + 7919 * (epoch + 1) + t,
                    )
                    for t, shard in enumerate(shards)
                ]
                results = [f.result() for f in futures]
            loss_sum = sum(r[0] for r in results)
            loss_count = sum(r[1] for r in results)
        processed += len(windows)
        epoch_losses.append(loss_sum / loss_count if loss_count else 0.0)
        if not np.isfinite(model.input_vectors).all() or not np.isfinite(
            model.output_vectors
        ).all():
            raise FloatingPointError(f"non-finite parameters after epoch {epoch}")
    embeddings = EmbeddingMatrix(list(vocab.words), model.input_vectors.copy())
    return embeddings, epoch_losses

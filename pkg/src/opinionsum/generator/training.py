"""Reconstruction training: SGD with momentum over (textualized opinions,
review) pairs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus import Corpus
from ..extraction import OpinionSet
from ..textualize import textualize_training
from ..corpus import tokenize
from .model import GeneratorModel, ModelDims, loss_and_gradients
from .vocab import BOS, EOS, PAD, Vocabulary


class TrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    momentum: float = 0.1
    decay: float = 0.1          # per-epoch multiplier on the learning rate
    epochs: int = 5
    batch_size: int = 8
    seed: int = 0
    clip_norm: float = 5.0      # global gradient norm; stabilizes lr 0.1

    def __post_init__(self):
        if self.learning_rate <= 0 or self.decay <= 0:
            raise ValueError("rates must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def make_training_pairs(
    corpus: Corpus, extractions: dict[str, OpinionSet], vocab: Vocabulary
) -> tuple[list[tuple[list[int], list[int]]], int]:
    """One (source ids, BOS + review ids + EOS) pair per review with a
    non-empty opinion set; returns (pairs, skipped count)."""
    pairs = []
    skipped = 0
    for review in corpus.all_reviews():
        opinion_set = extractions.get(review.review_id)
        if opinion_set is None or len(opinion_set) == 0 or not review.tokens:
            skipped += 1
            continue
        src = vocab.encode(tokenize(textualize_training(opinion_set).text))
        tgt = [BOS] + vocab.encode(review.tokens) + [EOS]
        pairs.append((src, tgt))
    return pairs, skipped


def _pad_batch(rows: list[list[int]]) -> np.ndarray:
    width = max(len(r) for r in rows)
    out = np.full((len(rows), width), PAD, dtype=np.int64)
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out


def _clip_global_norm(grads: dict[str, np.ndarray], max_norm: float) -> None:
    total = np.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if max_norm > 0 and total > max_norm:
        scale = max_norm / total
        for g in grads.values():
            g *= scale


def train(
    pairs: list[tuple[list[int], list[int]]],
    dims: ModelDims,
    vocab: Vocabulary,
    config: TrainConfig,
) -> tuple[GeneratorModel, list[float]]:
    """Train a generator on reconstruction pairs.

    Batches are taken in input order (no shuffling) so runs are
    reproducible; the learning rate for epoch e is lr * decay**e.
    Returns the model and the per-epoch mean token cross-entropy.
    Final parameters are rounded to float32 values so that saving and
    reloading reproduces decoding exactly.
    """
    if not pairs:
        raise TrainingError("no training pairs")
    model = GeneratorModel(dims, vocab, seed=config.seed)
    dropout_rng = np.random.default_rng(config.seed + 1) if dims.dropout > 0 else None
    velocity = {name: np.zeros_like(p) for name, p in model.params.items()}
    batches = [pairs[i: i + config.batch_size] for i in range(0, len(pairs), config.batch_size)]
    epoch_losses: list[float] = []
    for epoch in range(config.epochs):
        lr = config.learning_rate * config.decay ** epoch
        loss_sum = 0.0
        token_sum = 0
        for bi, batch in enumerate(batches):
            src = _pad_batch([s for s, _ in batch])
            tgt = _pad_batch([t for _, t in batch])
            loss, grads, n_tokens = loss_and_gradients(model, (src, tgt), rng=dropout_rng)
            if not np.isfinite(loss):
                raise TrainingError(
                    f"non-finite loss at epoch {epoch} batch {bi} (lr={lr}); "
                    "reduce the learning rate or model size"
                )
            _clip_global_norm(grads, config.clip_norm)
            for name, g in grads.items():
                v = velocity[name]
                v *= config.momentum
                v += g
                model.params[name] -= lr * v
            loss_sum += loss * n_tokens
            token_sum += n_tokens
        epoch_losses.append(loss_sum / token_sum)
    model.quantize_float32()
    return model, epoch_losses

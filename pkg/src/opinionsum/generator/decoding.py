"""Beam search with length penalty and n-gram blocking.

Hypotheses are scored by total token log-probability divided by
lp(n) = ((5 + n) / 6) ** alpha, n counting generated tokens including
EOS.  A candidate token is disallowed when appending it would repeat
an n-gram already present in the hypothesis.  Decoding is fully
deterministic: ties break toward the lower beam index, then the lower
token id.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus import tokenize
from .model import GeneratorModel
from .vocab import BOS, EOS, PAD


@dataclass(frozen=True)
class DecodeConfig:
    beam_size: int = 5
    length_penalty_alpha: float = 0.6
    ngram_block: int | None = 3     # None disables blocking
    max_len: int = 60

    def __post_init__(self):
        if self.beam_size < 1:
            raise ValueError("beam_size must be >= 1")
        if self.max_len < 1:
            raise ValueError("max_len must be >= 1")
        if self.ngram_block is not None and self.ngram_block < 2:
            raise ValueError("ngram_block must be >= 2 or None")


def length_penalty(n: int, alpha: float) -> float:
    return ((5.0 + n) / 6.0) ** alpha


def _log_softmax(logits):
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def _blocked_tokens(tokens: list[int], seen_ngrams: set, n: int) -> list[int]:
    """Token ids whose addition would repeat an already-seen n-gram."""
    if len(tokens) < n - 1:
        return []
    prefix = tuple(tokens[-(n - 1):])
    return [gram[-1] for gram in seen_ngrams if gram[:-1] == prefix]


def _apply_masks(logprobs, hyp_tokens, seen_ngrams, ngram_block):
    """PAD and BOS are never valid continuations; blocked n-gram ends are
    masked unless that would leave no candidate at all (then EOS stays)."""
    logprobs[PAD] = -np.inf
    logprobs[BOS] = -np.inf
    if ngram_block is not None:
        blocked = _blocked_tokens(hyp_tokens, seen_ngrams, ngram_block)
        if blocked:
            keep_eos = logprobs[EOS]
            logprobs[blocked] = -np.inf
            if not np.isfinite(logprobs).any():
                logprobs[EOS] = keep_eos
    return logprobs


def greedy_decode(model: GeneratorModel, src_ids: list[int], config: DecodeConfig) -> list[int]:
    """Argmax decoding under the same masking rules as beam search."""
    memory, src_mask = model.encode(np.asarray([src_ids]))
    tokens: list[int] = []
    seen: set = set()
    n = config.ngram_block
    for _ in range(config.max_len):
        prefix = np.asarray([[BOS] + tokens])
        logprobs = _log_softmax(model.next_logits(memory, src_mask, prefix)[0])
        logprobs = _apply_masks(logprobs, tokens, seen, n)
        nxt = int(np.argmax(logprobs))
        if nxt == EOS:
            break
        tokens.append(nxt)
        if n is not None and len(tokens) >= n:
            seen.add(tuple(tokens[-n:]))
    return tokens


class _Hypothesis:
    __slots__ = ("tokens", "logprob", "ngrams")

    def __init__(self, tokens, logprob, ngrams):
        self.tokens = tokens
        self.logprob = logprob
        self.ngrams = ngrams


def beam_decode(model: GeneratorModel, src_ids: list[int], config: DecodeConfig) -> list[int]:
    """Highest-scoring finished hypothesis (best unfinished at max_len).

    Each step keeps the beam_size best candidates overall; a candidate
    ending in EOS occupies its slot as a finished hypothesis, so with
    beam_size=1 the search IS greedy decoding.
    """
    memory, src_mask = model.encode(np.asarray([src_ids]))
    alpha = config.length_penalty_alpha
    n = config.ngram_block
    beams = [_Hypothesis([], 0.0, set())]
    finished: list[tuple[float, list[int]]] = []
    vocab_size = len(model.vocab)
    for _ in range(config.max_len):
        prefixes = np.asarray([[BOS] + h.tokens for h in beams])
        logprobs = _log_softmax(model.next_logits(memory, src_mask, prefixes))
        for bi, h in enumerate(beams):
            logprobs[bi] = _apply_masks(logprobs[bi], h.tokens, h.ngrams, n)
        cand = (np.asarray([h.logprob for h in beams])[:, None] + logprobs).ravel()
        take = min(config.beam_size, cand.size)
        top = np.argpartition(-cand, take - 1)[:take] if take < cand.size else np.arange(cand.size)
        # Deterministic order: score desc, then beam index, then token id
        # (both encoded in the flat index).
        top = top[np.lexsort((top, -cand[top]))]
        next_beams: list[_Hypothesis] = []
        for flat in top:
            score = cand[flat]
            if not np.isfinite(score):
                continue
            bi, tok = divmod(int(flat), vocab_size)
            src_h = beams[bi]
            if tok == EOS:
                finished.append(
                    (float(score) / length_penalty(len(src_h.tokens) + 1, alpha), src_h.tokens)
                )
                continue
            ngrams = src_h.ngrams
            tokens = src_h.tokens + [tok]
            if n is not None and len(tokens) >= n:
                ngrams = ngrams | {tuple(tokens[-n:])}
            next_beams.append(_Hypothesis(tokens, float(score), ngrams))
        beams = next_beams
        if not beams:
            break
    if finished:
        best = max(range(len(finished)), key=lambda i: (finished[i][0], -i))
        return finished[best][1]
    if beams:
        scored = [(h.logprob / length_penalty(len(h.tokens), alpha), i) for i, h in enumerate(beams)]
        best = max(scored, key=lambda t: (t[0], -t[1]))[1]
        return beams[best].tokens
    return []


def generate(model: GeneratorModel, textualized, config: DecodeConfig | None = None) -> str:
    """Verbalize a textualized opinion sequence into a summary string."""
    if config is None:
        config = DecodeConfig()
    text = textualized if isinstance(textualized, str) else textualized.text
    if not text.strip():
        raise ValueError("cannot generate from empty input")
    src_ids = model.vocab.encode(tokenize(text))
    ids = beam_decode(model, src_ids, config)
    return " ".join(model.vocab.decode(ids))

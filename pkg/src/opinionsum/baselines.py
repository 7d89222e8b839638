"""Reference summarizers: LexRank and the best/worst review selectors."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .corpus import Review, detokenize
from .evaluation import rouge_n

DAMPING = 0.85
TOL = 1e-8
MAX_ITER = 200
_TERMINALS = {".", "!", "?"}


def split_sentences(tokens) -> list[list[str]]:
    """Group tokens into sentences ending at terminal punctuation."""
    sentences: list[list[str]] = []
    cur: list[str] = []
    for tok in tokens:
        cur.append(tok)
        if tok in _TERMINALS:
            sentences.append(cur)
            cur = []
    if cur:
        sentences.append(cur)
    return [s for s in sentences if any(t not in _TERMINALS for t in s)]


@dataclass
class SentenceGraph:
    """Sentences plus their idf-weighted-cosine adjacency (zero diagonal)."""

    sentences: list[list[str]]
    adjacency: np.ndarray
    damping: float = DAMPING


def build_sentence_graph(sentences: list[list[str]], damping: float = DAMPING) -> SentenceGraph:
    n = len(sentences)
    df: Counter = Counter()
    for s in sentences:
        df.update(set(s))
    # Smoothed idf keeps duplicated sentences fully similar instead of
    # zeroing out corpus-wide terms.
    idf = {t: math.log((1 + n) / (1 + c)) + 1.0 for t, c in df.items()}
    vecs = []
    for s in sentences:
        tf = Counter(s)
        vecs.append({t: c * idf[t] for t, c in tf.items()})
    adj = np.zeros((n, n))
    norms = [math.sqrt(sum(w * w for w in v.values())) for v in vecs]
    for i in range(n):
        for j in range(i + 1, n):
            if norms[i] == 0.0 or norms[j] == 0.0:
                continue
            shared = vecs[i].keys() & vecs[j].keys()
            dot = sum(vecs[i][t] * vecs[j][t] for t in shared)
            adj[i, j] = adj[j, i] = dot / (norms[i] * norms[j])
    return SentenceGraph(sentences, adj, damping)


def centrality(graph: SentenceGraph) -> np.ndarray:
    """Stationary scores of the damped random walk on the sentence graph.

    Power iteration on the row-normalized adjacency (rows with no weight
    jump uniformly) until the L1 change drops below 1e-8, capped at 200
    iterations.  The result is non-negative and sums to 1.
    """
    n = len(graph.sentences)
    if n == 0:
        raise ValueError("no sentences to rank")
    rows = graph.adjacency.sum(axis=1)
    trans = np.where(rows[:, None] > 0.0, graph.adjacency / np.where(rows[:, None] > 0.0, rows[:, None], 1.0), 1.0 / n)
    p = np.full(n, 1.0 / n)
    d = graph.damping
    for _ in range(MAX_ITER):
        nxt = d * (trans.T @ p) + (1.0 - d) / n
        if np.abs(nxt - p).sum() < TOL:
            p = nxt
            break
        p = nxt
    return p


def lexrank_summarize(reviews: list[Review], budget_tokens: int = 60) -> str:
    """Extractive summary: most-central sentences within a token budget.

    Sentences are picked by descending centrality (ties keep document
    order), always including the top one, and emitted in original order.
    """
    sentences: list[list[str]] = []
    for review in reviews:
        sentences.extend(split_sentences(review.tokens))
    if not sentences:
        raise ValueError("no sentences found in the input reviews")
    graph = build_sentence_graph(sentences)
    scores = centrality(graph)
    order = sorted(range(len(sentences)), key=lambda i: (-scores[i], i))
    chosen: list[int] = []
    used = 0
    for i in order:
        cost = len(sentences[i])
        if chosen and used + cost > budget_tokens:
            break
        chosen.append(i)
        used += cost
        if used >= budget_tokens:
            break
    return detokenize([t for i in sorted(chosen) for t in sentences[i]])


def overlap_rank(reviews: list[Review]) -> list[tuple[Review, float]]:
    """Reviews ordered by mean unigram-overlap F1 against the others.

    The first entry is the "best review" (most representative), the last
    the "worst"; equal scores keep input order.
    """
    if len(reviews) < 2:
        raise ValueError("overlap ranking needs at least 2 reviews")
    scores = []
    for i, a in enumerate(reviews):
        others = [rouge_n(a.text, b.text, 1).f1 for j, b in enumerate(reviews) if j != i]
        scores.append(sum(others) / len(others))
    order = sorted(range(len(reviews)), key=lambda i: (-scores[i], i))
    return [(reviews[i], scores[i]) for i in order]


def best_review(reviews: list[Review]) -> Review:
    return overlap_rank(reviews)[0][0]


def worst_review(reviews: list[Review]) -> Review:
    return overlap_rank(reviews)[-1][0]

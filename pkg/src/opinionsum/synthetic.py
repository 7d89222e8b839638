"""Templated synthetic review corpora and toy embedding stores.

Used by the demos and the test suite: reviews follow a couple of fixed
syntactic templates over (adjective, noun) opinion pairs that the
built-in hotel lexicon can extract exactly, so the whole pipeline can
run end to end without external data.
"""

from __future__ import annotations

import random

import numpy as np

from .corpus import Corpus, make_review, tokenize
from .embedding import EmbeddingStore

# (adjective, noun) pairs compatible with the hotel lexicon.
OPINION_PAIRS = [
    ("clean", "room"), ("spacious", "room"), ("quiet", "room"),
    ("comfy", "bed"), ("lovely", "view"),
    ("small", "bath"), ("dirty", "bathroom"),
    ("friendly", "staff"), ("rude", "staff"), ("helpful", "reception"),
    ("great", "location"), ("central", "location"),
    ("cheap", "rate"), ("expensive", "rate"),
    ("tasty", "breakfast"), ("stale", "breakfast"),
]

# Clause boundaries carry two filler tokens so the extractor's 3-token
# aspect window never reaches across into the next sentence's noun.
_ONE_OPINION_TEMPLATE = "the {n1} was really {a1} ."
_TWO_OPINION_TEMPLATE = "the {n1} was really {a1} . and the {n2} was really {a2} ."
_THREE_OPINION_TEMPLATE = (
    "the {n1} was really {a1} . but the {n2} was really {a2} . "
    "and the {n3} was really {a3} ."
)


def _sample_pairs(rng: random.Random, k: int):
    # distinct nouns (and hence adjectives) keep review trigrams unique
    while True:
        pairs = rng.sample(OPINION_PAIRS, k)
        if len({n for _, n in pairs}) == k:
            return pairs


def synthetic_corpus(n_reviews: int = 640, n_entities: int = 8, seed: int = 13) -> Corpus:
    """Hotel-domain corpus of templated reviews, deterministic per seed."""
    rng = random.Random(seed)
    entities: dict[str, list] = {}
    for i in range(n_reviews):
        entity_id = f"e{i % n_entities}"
        roll = rng.random()
        if roll < 0.15:
            ((a1, n1),) = _sample_pairs(rng, 1)
            text = _ONE_OPINION_TEMPLATE.format(n1=n1, a1=a1)
        elif roll < 0.75:
            (a1, n1), (a2, n2) = _sample_pairs(rng, 2)
            text = _TWO_OPINION_TEMPLATE.format(n1=n1, a1=a1, n2=n2, a2=a2)
        else:
            (a1, n1), (a2, n2), (a3, n3) = _sample_pairs(rng, 3)
            text = _THREE_OPINION_TEMPLATE.format(n1=n1, a1=a1, n2=n2, a2=a2, n3=n3, a3=a3)
        entities.setdefault(entity_id, []).append(make_review(f"r{i}", entity_id, text))
    return Corpus(entities, domain_label="hotel")


def planted_entity_corpus(
    dominant: tuple[str, str] = ("great", "location"),
    minority: tuple[str, str] = ("rude", "staff"),
    n_dominant: int = 30,
    n_minority: int = 2,
    entity_id: str = "planted",
) -> Corpus:
    """One entity where a dominant opinion vastly outnumbers a minority one."""
    reviews = []
    a, n = dominant
    for i in range(n_dominant):
        reviews.append(make_review(f"{entity_id}-d{i}", entity_id,
                                   _ONE_OPINION_TEMPLATE.format(n1=n, a1=a)))
    a, n = minority
    for i in range(n_minority):
        reviews.append(make_review(f"{entity_id}-m{i}", entity_id,
                                   _ONE_OPINION_TEMPLATE.format(n1=n, a1=a)))
    return Corpus({entity_id: reviews}, domain_label="hotel")


def toy_embedding_store(corpus: Corpus, dim: int = 16, seed: int = 7) -> EmbeddingStore:
    """Random unit vectors for every corpus token; same token, same vector."""
    tokens = sorted({t for r in corpus.all_reviews() for t in r.tokens})
    rng = np.random.default_rng(seed)
    vectors = {}
    for t in tokens:
        v = rng.normal(size=dim)
        vectors[t] = v / np.linalg.norm(v)
    return EmbeddingStore(dim, vectors)


def write_embeddings_file(store: EmbeddingStore, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for token, vec in store.vectors.items():
            fh.write(token + " " + " ".join(f"{x:.6f}" for x in vec) + "\n")


def write_reviews_file(corpus: Corpus, path) -> None:
    import json

    with open(path, "w", encoding="utf-8") as fh:
        for review in corpus.all_reviews():
            fh.write(json.dumps({
                "review_id": review.review_id,
                "entity_id": review.entity_id,
                "text": review.text,
            }) + "\n")

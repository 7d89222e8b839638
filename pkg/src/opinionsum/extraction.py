"""Opinion phrase extraction.

Each review yields an ordered set of (phrase, polarity, aspect)
triples grounded in the review's token indices.  Two sources are
supported: a deterministic lexicon-driven rule extractor, and a loader
for externally produced tags (JSON Lines with fields ``review_id``,
``token_indices``, ``polarity``, ``aspect``) so a real ABSA tagger can
be plugged in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .corpus import SEP_TOKEN, Corpus, Review

POLARITIES = ("positive", "neutral", "negative")

# How far (in tokens) the rule extractor looks for an aspect noun
# around a sentiment word.
ASPECT_WINDOW = 3


class PretaggedFileError(ValueError):
    """Raised when a pre-tagged opinion file fails validation."""


@dataclass(frozen=True)
class OpinionTriple:
    """One opinion: tokens of the phrase, where they came from, and labels.

    ``token_indices`` are strictly increasing positions into the source
    review's tokens; the phrase need not be contiguous there.
    """

    phrase_tokens: tuple[str, ...]
    token_indices: tuple[int, ...]
    polarity: str
    aspect: str
    review_id: str

    @property
    def phrase_text(self) -> str:
        return " ".join(self.phrase_tokens)


@dataclass(frozen=True)
class OpinionSet:
    """Opinions of one review, ordered by (first index, last index)."""

    review_id: str
    opinions: tuple[OpinionTriple, ...]

    def __len__(self) -> int:
        return len(self.opinions)


@dataclass(frozen=True)
class DomainLexicon:
    """Keyword maps backing the rule extractor for one review domain."""

    domain: str
    aspects: dict[str, str]         # noun -> aspect category
    sentiments: dict[str, str]      # token -> positive / negative
    intensifiers: frozenset[str]


def _ordered(review_id: str, triples: list[OpinionTriple]) -> OpinionSet:
    triples.sort(key=lambda o: (o.token_indices[0], o.token_indices[-1]))
    return OpinionSet(review_id, tuple(triples))


def extract_rule_based(review: Review, lexicon: DomainLexicon) -> OpinionSet:
    """Extract opinions with a deterministic lexicon rule.

    For every sentiment-lexicon token: take an immediately preceding
    intensifier if present, plus the nearest following aspect noun
    within ASPECT_WINDOW tokens (falling back to the nearest preceding
    one); the aspect is the matched noun's category, or "general" when
    no noun is in range.  Phrase tokens always keep review index order.
    """
    tokens = review.tokens
    triples: list[OpinionTriple] = []
    for pos, tok in enumerate(tokens):
        polarity = lexicon.sentiments.get(tok)
        if polarity is None:
            continue
        indices = {pos}
        if pos > 0 and tokens[pos - 1] in lexicon.intensifiers:
            indices.add(pos - 1)
        noun_pos = None
        for j in range(pos + 1, min(pos + ASPECT_WINDOW + 1, len(tokens))):
            if tokens[j] in lexicon.aspects:
                noun_pos = j
                break
        if noun_pos is None:
            for j in range(pos - 1, max(pos - ASPECT_WINDOW - 1, -1), -1):
                if tokens[j] in lexicon.aspects:
                    noun_pos = j
                    break
        aspect = "general"
        if noun_pos is not None:
            aspect = lexicon.aspects[tokens[noun_pos]]
            indices.add(noun_pos)
        ordered = tuple(sorted(indices))
        triples.append(
            OpinionTriple(
                phrase_tokens=tuple(tokens[i] for i in ordered),
                token_indices=ordered,
                polarity=polarity,
                aspect=aspect,
                review_id=review.review_id,
            )
        )
    return _ordered(review.review_id, triples)


def extract_corpus(corpus: Corpus, lexicon: DomainLexicon) -> dict[str, OpinionSet]:
    """Rule-extract every review; pure per review, order-independent."""
    return {r.review_id: extract_rule_based(r, lexicon) for r in corpus.all_reviews()}


def _validate_record(record: dict, lineno: int, corpus: Corpus) -> OpinionTriple:
    for name in ("review_id", "token_indices", "polarity", "aspect"):
        if name not in record:
            raise PretaggedFileError(f"line {lineno}: missing field {name!r}")
    review_id = record["review_id"]
    if not corpus.has_review(review_id):
        raise PretaggedFileError(f"line {lineno}: unknown review_id {review_id!r}")
    review = corpus.review(review_id)
    indices = record["token_indices"]
    if not isinstance(indices, list) or not indices or not all(isinstance(i, int) for i in indices):
        raise PretaggedFileError(f"line {lineno}: token_indices must be a non-empty integer array")
    if any(i < 0 or i >= len(review.tokens) for i in indices):
        raise PretaggedFileError(
            f"line {lineno}: index out of range for review {review_id!r} "
            f"({len(review.tokens)} tokens)"
        )
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise PretaggedFileError(f"line {lineno}: token_indices must be strictly increasing")
    if record["polarity"] not in POLARITIES:
        raise PretaggedFileError(f"line {lineno}: polarity must be one of {POLARITIES}")
    phrase = tuple(review.tokens[i] for i in indices)
    if SEP_TOKEN in phrase:
        raise PretaggedFileError(f"line {lineno}: phrase may not contain the {SEP_TOKEN} token")
    return OpinionTriple(phrase, tuple(indices), record["polarity"], str(record["aspect"]), review_id)


def load_pretagged(path, corpus: Corpus) -> dict[str, OpinionSet]:
    """Load externally produced opinion tags, validated against the corpus.

    Returns an OpinionSet for every corpus review (empty when untagged),
    normalized to review order.
    """
    per_review: dict[str, list[OpinionTriple]] = {r.review_id: [] for r in corpus.all_reviews()}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise PretaggedFileError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
                triple = _validate_record(record, lineno, corpus)
                per_review[triple.review_id].append(triple)
    except OSError as exc:
        raise PretaggedFileError(f"cannot read pre-tagged file {path}: {exc}") from exc
    return {rid: _ordered(rid, triples) for rid, triples in per_review.items()}


def save_pretagged(path, extractions: dict[str, OpinionSet]) -> int:
    """Write extractions in the pre-tagged JSON Lines format; returns record count."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for opinion_set in extractions.values():
            for o in opinion_set.opinions:
                fh.write(json.dumps({
                    "review_id": o.review_id,
                    "token_indices": list(o.token_indices),
                    "polarity": o.polarity,
                    "aspect": o.aspect,
                }) + "\n")
                n += 1
    return n


def entity_opinion_set(
    extractions: dict[str, OpinionSet], corpus: Corpus, entity_id: str
) -> list[OpinionTriple]:
    """Concatenate the entity's per-review opinions in corpus order.

    Duplicates are preserved: the entity opinion set is a multiset.
    """
    out: list[OpinionTriple] = []
    for review in corpus.entity_reviews(entity_id):
        opinion_set = extractions.get(review.review_id)
        if opinion_set is not None:
            out.extend(opinion_set.opinions)
    return out

"""Review corpus loading, validation, and tokenization.

Reviews arrive as UTF-8 JSON Lines, one object per line with string
fields ``review_id``, ``entity_id`` and ``text`` (optional ``split``).
After ingestion the corpus is immutable and indexed by entity and by
review id.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

SEP_TOKEN = "[SEP]"

# Word runs, the atomic [SEP] delimiter, or single punctuation marks.
_TOKEN_RE = re.compile(r"\[SEP\]|\w+|[^\w\s]")

REQUIRED_FIELDS = ("review_id", "entity_id", "text")
VALID_SPLITS = ("train", "dev", "test")


class ReviewFileError(ValueError):
    """Raised when a review file cannot be parsed or validated."""


def tokenize(text: str) -> list[str]:
    """Split ``text`` into lowercased word and punctuation tokens.

    Punctuation marks become their own tokens.  The literal substring
    ``[SEP]`` is preserved as one atomic token and keeps its casing so
    it can act as a reserved delimiter downstream.
    """
    return [t if t == SEP_TOKEN else t.lower() for t in _TOKEN_RE.findall(text)]


def detokenize(tokens: list[str] | tuple[str, ...]) -> str:
    return " ".join(tokens)


@dataclass(frozen=True)
class Review:
    review_id: str
    entity_id: str
    text: str
    tokens: tuple[str, ...]
    split: str | None = None


def make_review(review_id: str, entity_id: str, text: str, split: str | None = None) -> Review:
    return Review(review_id, entity_id, text, tuple(tokenize(text)), split)


@dataclass
class Corpus:
    """Reviews grouped by entity, in stable ingestion order."""

    entities: dict[str, list[Review]] = field(default_factory=dict)
    domain_label: str = ""

    def __post_init__(self):
        self._by_id: dict[str, Review] = {}
        for reviews in self.entities.values():
            for r in reviews:
                self._by_id[r.review_id] = r

    @property
    def review_count(self) -> int:
        return len(self._by_id)

    def entity_ids(self) -> list[str]:
        return list(self.entities.keys())

    def entity_reviews(self, entity_id: str) -> list[Review]:
        """All and only the reviews of ``entity_id``, ingestion order."""
        if entity_id not in self.entities:
            raise KeyError(f"unknown entity_id: {entity_id!r}")
        return list(self.entities[entity_id])

    def review(self, review_id: str) -> Review:
        if review_id not in self._by_id:
            raise KeyError(f"unknown review_id: {review_id!r}")
        return self._by_id[review_id]

    def has_review(self, review_id: str) -> bool:
        return review_id in self._by_id

    def all_reviews(self) -> list[Review]:
        return [r for reviews in self.entities.values() for r in reviews]


def ingest_reviews(path, format: str = "jsonl", domain_label: str = "") -> Corpus:
    """Read a review file into a :class:`Corpus`.

    Every record must carry string ``review_id``, ``entity_id`` and
    ``text``; problems are reported with their 1-based line number.
    Duplicate review ids are rejected.  Per-entity review order equals
    file order.
    """
    if format != "jsonl":
        raise ValueError(f"unsupported review-file format: {format!r}")
    entities: dict[str, list[Review]] = {}
    seen: set[str] = set()
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ReviewFileError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
                if not isinstance(record, dict):
                    raise ReviewFileError(f"line {lineno}: record is not an object")
                for name in REQUIRED_FIELDS:
                    if name not in record:
                        raise ReviewFileError(f"line {lineno}: missing required field {name!r}")
                    if not isinstance(record[name], str):
                        raise ReviewFileError(f"line {lineno}: field {name!r} must be a string")
                split = record.get("split")
                if split is not None and split not in VALID_SPLITS:
                    raise ReviewFileError(f"line {lineno}: split must be one of {VALID_SPLITS}")
                if record["review_id"] in seen:
                    raise ReviewFileError(f"line {lineno}: duplicate review_id {record['review_id']!r}")
                seen.add(record["review_id"])
                review = make_review(record["review_id"], record["entity_id"], record["text"], split)
                entities.setdefault(review.entity_id, []).append(review)
    except OSError as exc:
        raise ReviewFileError(f"cannot read review file {path}: {exc}") from exc
    return Corpus(entities, domain_label)

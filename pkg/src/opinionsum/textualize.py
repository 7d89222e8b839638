"""Flatten opinion sets into the delimiter-joined input text for the generator."""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import SEP_TOKEN
from .extraction import OpinionSet
from .selection import SelectedOpinions

_DELIM = f" {SEP_TOKEN} "


@dataclass(frozen=True)
class TextualizedOpinions:
    text: str
    phrase_count: int


def _join(phrases: list[str]) -> TextualizedOpinions:
    return TextualizedOpinions(_DELIM.join(phrases), len(phrases))


def textualize_training(opinion_set: OpinionSet) -> TextualizedOpinions:
    """Concatenate a review's opinion phrases in their review order."""
    if not opinion_set.opinions:
        raise ValueError(f"review {opinion_set.review_id!r} has no opinions to textualize")
    return _join([o.phrase_text for o in opinion_set.opinions])


def textualize_selected(selected: SelectedOpinions) -> TextualizedOpinions:
    """Concatenate selected representatives in frequency (cluster-size) order."""
    if not selected.items:
        raise ValueError("empty selection cannot be textualized")
    return _join([o.phrase_text for o, _ in selected.items])


def split_textualization(text: str) -> list[str]:
    """Inverse of the textualize operations; rejects malformed input."""
    parts = text.split(_DELIM)
    for part in parts:
        if not part or part != part.strip() or SEP_TOKEN in part:
            raise ValueError(f"malformed textualization: {text!r}")
    return parts

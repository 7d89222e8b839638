"""Token inventory shared by the encoder and decoder."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..corpus import SEP_TOKEN

PAD, BOS, EOS, UNK, SEP = 0, 1, 2, 3, 4
SPECIAL_TOKENS = ("<pad>", "<bos>", "<eos>", "<unk>", SEP_TOKEN)


@dataclass(frozen=True)
class Vocabulary:
    token_of: tuple[str, ...]
    id_of: dict[str, int]

    def __len__(self) -> int:
        return len(self.token_of)

    def encode(self, tokens) -> list[int]:
        return [self.id_of.get(t, UNK) for t in tokens]

    def decode(self, ids, strip_specials: bool = True) -> list[str]:
        if strip_specials:
            ids = [i for i in ids if i not in (PAD, BOS, EOS)]
        return [self.token_of[i] for i in ids]


def build_vocab(token_streams, min_count: int = 1) -> Vocabulary:
    """Vocabulary over all streams: tokens with frequency >= min_count,
    ordered by frequency then lexicographically after the specials.

    The ``[SEP]`` delimiter is always present with its reserved id,
    regardless of counts; unknown tokens encode to UNK.
    """
    counts: Counter = Counter()
    for stream in token_streams:
        counts.update(t for t in stream if t != SEP_TOKEN)
    if not counts:
        raise ValueError("empty input stream: nothing to build a vocabulary from")
    kept = sorted(
        (t for t, c in counts.items() if c >= min_count),
        key=lambda t: (-counts[t], t),
    )
    token_of = SPECIAL_TOKENS + tuple(kept)
    return Vocabulary(token_of, {t: i for i, t in enumerate(token_of)})

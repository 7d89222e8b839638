"""Pre-trained word vectors, phrase vectors, and cosine similarity.

The on-disk format is the common distribution format of GloVe-style
embeddings: UTF-8 text, one entry per line, a token followed by
``dim`` space-separated floats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class EmbeddingFileError(ValueError):
    """Raised when an embedding file cannot be parsed."""


@dataclass
class EmbeddingStore:
    """Immutable token -> vector table; all vectors share one dim."""

    dim: int
    vectors: dict[str, np.ndarray]

    def lookup(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass
class PhraseVector:
    """Mean embedding of a phrase; all-OOV phrases get the zero vector."""

    values: np.ndarray
    oov_count: int
    token_count: int


def load_embeddings(path, expected_dim: int) -> EmbeddingStore:
    """Parse a whitespace-separated embedding file.

    Duplicate tokens keep their first occurrence; a line whose float
    count differs from ``expected_dim`` is an error reported with its
    line number.
    """
    if expected_dim < 1:
        raise ValueError("expected_dim must be positive")
    vectors: dict[str, np.ndarray] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                parts = line.split()
                if not parts:
                    continue
                token, values = parts[0], parts[1:]
                if len(values) != expected_dim:
                    raise EmbeddingFileError(
                        f"line {lineno}: expected {expected_dim} floats, got {len(values)}"
                    )
                if token in vectors:
                    continue
                try:
                    vectors[token] = np.array(values, dtype=np.float64)
                except ValueError as exc:
                    raise EmbeddingFileError(f"line {lineno}: non-numeric value") from exc
    except OSError as exc:
        raise EmbeddingFileError(f"cannot read embedding file {path}: {exc}") from exc
    return EmbeddingStore(expected_dim, vectors)


def phrase_vector(store: EmbeddingStore, tokens) -> PhraseVector:
    """Arithmetic mean of the in-vocabulary token vectors.

    OOV tokens are skipped rather than mapped to a default vector; if
    every token is OOV the result is the zero vector, which never
    clears a positive similarity threshold.
    """
    if not tokens:
        raise ValueError("phrase_vector requires a non-empty token list")
    found = [store.vectors[t] for t in tokens if t in store.vectors]
    if not found:
        return PhraseVector(np.zeros(store.dim), len(tokens), len(tokens))
    mean = np.mean(found, axis=0)
    return PhraseVector(mean, len(tokens) - len(found), len(tokens))


def cosine(u, v) -> float:
    """Cosine similarity in [-1, 1]; defined as 0 when either norm is 0."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))

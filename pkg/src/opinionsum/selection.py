"""Opinion merging, ranking, and filtering.

Similar opinions are greedily merged into clusters: opinions are
visited in input order, the existing clusters are scanned in an order
shuffled by a seeded RNG, and an opinion joins the first cluster whose
every member has cosine similarity >= theta with it (else it opens a
new cluster).  Cluster size is the popularity signal: the selected
opinion set is the representatives of the top-k largest clusters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

import numpy as np

from .embedding import EmbeddingStore, PhraseVector, cosine, phrase_vector
from .extraction import POLARITIES, OpinionTriple

FILTER_STAGES = ("pre_merge", "post_rank")


@dataclass(frozen=True)
class SelectionConfig:
    theta: float = 0.8
    k: int = 15
    seed: int = 0
    aspect_filter: frozenset[str] | None = None
    polarity_filter: str | None = None
    # Where aspect/polarity filters apply: before merging (default, so
    # top-k is computed over on-topic opinions) or to the ranked
    # clusters' representatives.
    filter_stage: str = "pre_merge"

    def __post_init__(self):
        if not 0.0 < self.theta <= 1.0:
            raise ValueError("theta must be in (0, 1]")
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if self.polarity_filter is not None and self.polarity_filter not in POLARITIES:
            raise ValueError(f"polarity_filter must be one of {POLARITIES}")
        if self.filter_stage not in FILTER_STAGES:
            raise ValueError(f"filter_stage must be one of {FILTER_STAGES}")


@dataclass
class OpinionCluster:
    """Merged opinions; members keep insertion order."""

    members: list[tuple[OpinionTriple, PhraseVector]]
    creation_index: int
    centroid: np.ndarray | None = None

    @property
    def size(self) -> int:
        return len(self.members)

    def finalize(self) -> None:
        self.centroid = np.mean([v.values for _, v in self.members], axis=0)


@dataclass(frozen=True)
class SelectedOpinions:
    """Representatives of the top clusters with their cluster sizes.

    Items are ordered by cluster size, non-increasing; ties keep the
    earlier-created cluster first.
    """

    items: tuple[tuple[OpinionTriple, int], ...]

    def __len__(self) -> int:
        return len(self.items)


def _matches(o: OpinionTriple, config: SelectionConfig) -> bool:
    if config.aspect_filter is not None and o.aspect not in config.aspect_filter:
        return False
    if config.polarity_filter is not None and o.polarity != config.polarity_filter:
        return False
    return True


def filter_opinions(opinions: list[OpinionTriple], config: SelectionConfig) -> list[OpinionTriple]:
    """Subsequence of opinions matching all active filters; no filters = identity."""
    if config.aspect_filter is None and config.polarity_filter is None:
        return list(opinions)
    return [o for o in opinions if _matches(o, config)]


def merge_opinions(
    opinions: list[OpinionTriple], store: EmbeddingStore, config: SelectionConfig
) -> list[OpinionCluster]:
    """Greedy similarity clustering of the opinion multiset.

    Deterministic for a fixed (opinions, store, config): the cluster
    scan order is shuffled with ``random.Random(config.seed)``, one RNG
    instance per call.  All-OOV phrases have zero vectors, whose cosine
    to anything is 0 < theta, so they always form singleton clusters.
    """
    rng = random.Random(config.seed)
    clusters: list[OpinionCluster] = []
    # Per-cluster stacked member vectors and norms, for the pairwise check.
    matrices: list[np.ndarray] = []
    norms: list[np.ndarray] = []
    for opinion in opinions:
        pv = phrase_vector(store, opinion.phrase_tokens)
        u = pv.values
        nu = float(np.linalg.norm(u))
        order = list(range(len(clusters)))
        rng.shuffle(order)
        placed = False
        for ci in order:
            if nu == 0.0:
                break  # cosine to every member is 0 < theta
            dots = matrices[ci] @ u
            mn = norms[ci]
            sims = np.where(mn > 0.0, dots / np.where(mn > 0.0, mn * nu, 1.0), 0.0)
            if np.all(sims >= config.theta):
                clusters[ci].members.append((opinion, pv))
                matrices[ci] = np.vstack([matrices[ci], u])
                norms[ci] = np.append(mn, nu)
                placed = True
                break
        if not placed:
            clusters.append(OpinionCluster([(opinion, pv)], creation_index=len(clusters)))
            matrices.append(u.reshape(1, -1))
            norms.append(np.array([nu]))
    for c in clusters:
        c.finalize()
    return clusters


def representative(cluster: OpinionCluster) -> OpinionTriple:
    """Member whose vector is closest (by cosine) to the cluster centroid.

    Ties go to the earliest-inserted member.
    """
    if not cluster.members:
        raise ValueError("cluster has no members")
    if cluster.centroid is None:
        cluster.finalize()
    best, best_sim = None, -np.inf
    for triple, pv in cluster.members:
        sim = cosine(pv.values, cluster.centroid)
        if sim > best_sim:
            best, best_sim = triple, sim
    return best


def rank_clusters(clusters: list[OpinionCluster], config: SelectionConfig) -> list[OpinionCluster]:
    """Order clusters by size descending, earlier-created first on ties.

    With ``filter_stage="post_rank"``, clusters whose representative
    fails the aspect/polarity filters are dropped here.
    """
    ranked = sorted(clusters, key=lambda c: (-c.size, c.creation_index))
    if config.filter_stage == "post_rank":
        ranked = [c for c in ranked if _matches(representative(c), config)]
    return ranked


def select(
    opinions: list[OpinionTriple], store: EmbeddingStore, config: SelectionConfig
) -> SelectedOpinions:
    """Filter -> merge -> rank -> take the top-k representatives."""
    if config.filter_stage == "pre_merge":
        opinions = filter_opinions(opinions, config)
    clusters = merge_opinions(opinions, store, config)
    ranked = rank_clusters(clusters, config)
    items = tuple((representative(c), c.size) for c in ranked[: config.k])
    return SelectedOpinions(items)

"""Everything a summarization run needs, loaded once and shared read-only."""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

from ..corpus import Corpus
from ..embedding import EmbeddingStore
from ..extraction import DomainLexicon, OpinionSet, entity_opinion_set
from ..generator import DecodeConfig, GeneratorModel, generate
from ..generator.vocab import SEP
from ..corpus import SEP_TOKEN
from ..selection import (
    SelectionConfig,
    filter_opinions,
    merge_opinions,
    rank_clusters,
    representative,
    SelectedOpinions,
)
from ..textualize import textualize_selected


@dataclass
class PipelineBundle:
    """Immutable after construction; safe for concurrent reads."""

    corpus: Corpus
    extractions: dict[str, OpinionSet]
    store: EmbeddingStore
    model: GeneratorModel
    lexicon: DomainLexicon
    selection_defaults: SelectionConfig = SelectionConfig()
    decode_defaults: DecodeConfig = DecodeConfig()

    def __post_init__(self):
        if self.model.vocab.id_of.get(SEP_TOKEN) != SEP:
            raise ValueError("model vocabulary does not reserve the delimiter token")
        for review_id in self.extractions:
            if not self.corpus.has_review(review_id):
                raise ValueError(f"extractions reference unknown review {review_id!r}")

    def aspect_categories(self) -> list[str]:
        cats = sorted(set(self.lexicon.aspects.values()) | {"general"})
        return cats


def _override_selection(defaults: SelectionConfig, k, theta, seed, aspect, polarity) -> SelectionConfig:
    changes = {}
    if k is not None:
        changes["k"] = k
    if theta is not None:
        changes["theta"] = theta
    if seed is not None:
        changes["seed"] = seed
    if aspect:
        changes["aspect_filter"] = frozenset(aspect if not isinstance(aspect, str) else [aspect])
    if polarity is not None and polarity != "all":
        changes["polarity_filter"] = polarity
    return replace(defaults, **changes) if changes else defaults


def _override_decode(defaults: DecodeConfig, beam_size, max_len) -> DecodeConfig:
    changes = {}
    if beam_size is not None:
        changes["beam_size"] = beam_size
    if max_len is not None:
        changes["max_len"] = max_len
    return replace(defaults, **changes) if changes else defaults


def ranked_entity_clusters(bundle: PipelineBundle, entity_id: str, config: SelectionConfig):
    """Filter, merge, and rank one entity's opinions; shared by the
    summarize path and the cluster-inspection endpoint."""
    opinions = entity_opinion_set(bundle.extractions, bundle.corpus, entity_id)
    if config.filter_stage == "pre_merge":
        opinions = filter_opinions(opinions, config)
    clusters = merge_opinions(opinions, bundle.store, config)
    return rank_clusters(clusters, config)


def _cluster_payload(clusters, k: int | None = None) -> list[dict]:
    out = []
    for c in clusters if k is None else clusters[:k]:
        rep = representative(c)
        out.append({
            "size": c.size,
            "representative": rep.phrase_text,
            "aspect": rep.aspect,
            "polarity": rep.polarity,
            "members": [
                {"phrase": o.phrase_text, "review_id": o.review_id,
                 "aspect": o.aspect, "polarity": o.polarity}
                for o, _ in c.members
            ],
        })
    return out


def run_summarize(
    bundle: PipelineBundle,
    entity_id: str,
    k: int | None = None,
    theta: float | None = None,
    seed: int | None = None,
    aspect=None,
    polarity: str | None = None,
    beam_size: int | None = None,
    max_len: int | None = None,
) -> dict:
    """Select -> textualize -> generate for one entity.

    The response carries the summary plus full cluster provenance so a
    client can show which reviews back every selected opinion.  When the
    filters leave nothing to say, the status is "empty_selection" and no
    summary is fabricated.
    """
    started = time.perf_counter()
    sel_cfg = _override_selection(bundle.selection_defaults, k, theta, seed, aspect, polarity)
    dec_cfg = _override_decode(bundle.decode_defaults, beam_size, max_len)
    ranked = ranked_entity_clusters(bundle, entity_id, sel_cfg)
    top = ranked[: sel_cfg.k]
    items = tuple((representative(c), c.size) for c in top)
    response = {
        "entity_id": entity_id,
        "config": {
            "k": sel_cfg.k, "theta": sel_cfg.theta, "seed": sel_cfg.seed,
            "aspect": sorted(sel_cfg.aspect_filter) if sel_cfg.aspect_filter else None,
            "polarity": sel_cfg.polarity_filter,
            "beam_size": dec_cfg.beam_size, "max_len": dec_cfg.max_len,
        },
    }
    if not items:
        response.update({"status": "empty_selection", "summary": "", "selected": [],
                         "clusters": [], "timing_ms": _ms(started)})
        return response
    selected = SelectedOpinions(items)
    text = textualize_selected(selected)
    summary = generate(bundle.model, text, dec_cfg)
    response.update({
        "status": "ok",
        "summary": summary,
        "input_text": text.text,
        "selected": [
            {"phrase": o.phrase_text, "size": size, "aspect": o.aspect,
             "polarity": o.polarity, "review_id": o.review_id}
            for o, size in selected.items
        ],
        "clusters": _cluster_payload(top),
        "timing_ms": _ms(started),
    })
    return response


def _ms(started: float) -> float:
    return round(1000.0 * (time.perf_counter() - started), 3)

"""ROUGE-1/2/L scoring, corpus aggregation, Best-Worst Scaling, and the
hyper-parameter sensitivity sweep.

All texts pass through the corpus tokenizer (lowercase, punctuation
split, no stemming or stopword removal); reported absolute scores
depend on that choice.
"""

from __future__ import annotations

import json
import statistics
from collections import Counter
from dataclasses import dataclass

from .corpus import tokenize

METRICS = ("rouge1", "rouge2", "rougeL")


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


def _f1(p: float, r: float) -> float:
    return 0.0 if p + r == 0.0 else 2 * p * r / (p + r)


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: str, reference: str, n: int) -> RougeScore:
    """Clipped n-gram overlap precision/recall/F1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = _ngrams(tokenize(candidate), n)
    ref = _ngrams(tokenize(reference), n)
    total_cand = sum(cand.values())
    total_ref = sum(ref.values())
    if total_cand == 0 or total_ref == 0:
        return RougeScore(0.0, 0.0, 0.0)
    overlap = sum(min(count, ref[gram]) for gram, count in cand.items())
    p = overlap / total_cand
    r = overlap / total_ref
    return RougeScore(p, r, _f1(p, r))


def _lcs_len(a: list[str], b: list[str]) -> int:
    # Iterative DP, two rows.
    prev = [0] * (len(b) + 1)
    for i in range(1, len(a) + 1):
        cur = [0] * (len(b) + 1)
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return prev[len(b)]


def rouge_l(candidate: str, reference: str) -> RougeScore:
    """Longest-common-subsequence precision/recall/F1 over tokens."""
    cand = tokenize(candidate)
    ref = tokenize(reference)
    if not cand or not ref:
        return RougeScore(0.0, 0.0, 0.0)
    lcs = _lcs_len(cand, ref)
    p = lcs / len(cand)
    r = lcs / len(ref)
    return RougeScore(p, r, _f1(p, r))


def rouge_all(candidate: str, reference: str) -> dict[str, RougeScore]:
    return {
        "rouge1": rouge_n(candidate, reference, 1),
        "rouge2": rouge_n(candidate, reference, 2),
        "rougeL": rouge_l(candidate, reference),
    }


@dataclass
class CorpusEvalReport:
    """Per-entity ROUGE plus corpus means (F1 x 100), Table-style."""

    per_entity: dict[str, dict[str, RougeScore]]
    mean_scores: dict[str, float]
    skipped: list[str]

    def to_dict(self) -> dict:
        return {
            "mean": {m: self.mean_scores[m] for m in METRICS},
            "per_entity": {
                eid: {m: [s.precision, s.recall, s.f1] for m, s in scores.items()}
                for eid, scores in self.per_entity.items()
            },
            "skipped": list(self.skipped),
        }


def evaluate_corpus(summaries: dict[str, str], references: dict[str, str]) -> CorpusEvalReport:
    """Mean ROUGE-1/2/L (F1 x 100) over entities present on both sides.

    Entities missing a summary or a reference are excluded and listed in
    the report's ``skipped`` field.
    """
    shared = [eid for eid in summaries if eid in references]
    if not shared:
        raise ValueError("no entity appears in both summaries and references")
    skipped = sorted(set(summaries) ^ set(references))
    per_entity = {eid: rouge_all(summaries[eid], references[eid]) for eid in shared}
    means = {
        m: 100.0 * sum(per_entity[eid][m].f1 for eid in shared) / len(shared)
        for m in METRICS
    }
    return CorpusEvalReport(per_entity, means, skipped)


def render_score_table(rows: dict[str, dict[str, float]]) -> str:
    """Aligned plain-text table: one row per method, columns R1/R2/RL."""
    width = max([len("Method")] + [len(name) for name in rows])
    lines = [f"{'Method':<{width}}  {'R1':>6}  {'R2':>6}  {'RL':>6}"]
    for name, scores in rows.items():
        lines.append(
            f"{name:<{width}}  {scores['rouge1']:>6.2f}  {scores['rouge2']:>6.2f}  "
            f"{scores['rougeL']:>6.2f}"
        )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Best-Worst Scaling

@dataclass(frozen=True)
class SystemVotes:
    best: int
    worst: int
    total: int

    def __post_init__(self):
        if min(self.best, self.worst, self.total) < 0:
            raise ValueError("vote counts must be non-negative")
        if self.best + self.worst > self.total:
            raise ValueError("best + worst votes exceed total votes")


@dataclass
class VoteTable:
    systems: dict[str, SystemVotes]


VOTE_VALUES = ("best", "worst", "none")


def load_votes(path) -> VoteTable:
    """Build a vote table from JSON Lines {item_id, system, vote}."""
    counts: dict[str, list[int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = json.loads(line)
            for name in ("item_id", "system", "vote"):
                if name not in record:
                    raise ValueError(f"line {lineno}: missing field {name!r}")
            if record["vote"] not in VOTE_VALUES:
                raise ValueError(f"line {lineno}: vote must be one of {VOTE_VALUES}")
            best, worst, total = counts.setdefault(record["system"], [0, 0, 0])
            counts[record["system"]] = [
                best + (record["vote"] == "best"),
                worst + (record["vote"] == "worst"),
                total + 1,
            ]
        return VoteTable({s: SystemVotes(*c) for s, c in counts.items()})


def bws_score(table: VoteTable) -> dict[str, float]:
    """100 x (best - worst) / total per system; -100 (unanimously worst)
    to +100 (unanimously best)."""
    scores = {}
    for system, votes in table.systems.items():
        if votes.total == 0:
            raise ValueError(f"system {system!r} has zero total votes")
        scores[system] = 100.0 * (votes.best - votes.worst) / votes.total
    return scores


def label_ratios(records: list[dict]) -> dict[str, dict[str, float]]:
    """Per-system percentage of each label in annotation records
    ({item_id, system, label}); the arithmetic behind simple
    support/coverage tables."""
    by_system: dict[str, Counter] = {}
    for rec in records:
        by_system.setdefault(rec["system"], Counter())[rec["label"]] += 1
    return {
        system: {label: 100.0 * n / sum(c.values()) for label, n in sorted(c.items())}
        for system, c in by_system.items()
    }


# ---------------------------------------------------------------------------
# Sensitivity sweep

@dataclass(frozen=True)
class SweepCell:
    k: int
    theta: float
    max_len: int
    mean_scores: dict[str, float]


@dataclass
class SweepGrid:
    cells: list[SweepCell]
    mean: dict[str, float]
    std: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "cells": [
                {"k": c.k, "theta": c.theta, "max_len": c.max_len, "scores": c.mean_scores}
                for c in self.cells
            ],
            "mean": self.mean,
            "std": self.std,
        }


def sensitivity_sweep(
    summarize_fn,
    references: dict[str, str],
    ks: list[int],
    thetas: list[float],
    max_lens: list[int],
) -> SweepGrid:
    """Run the pipeline over a (k, theta, max_len) grid and score each cell.

    ``summarize_fn(entity_id, k, theta, max_len)`` must return a summary
    string; it is a pure function of its arguments, so cells are
    independent.  Reports per-cell mean ROUGE plus mean and population
    std per metric across cells.
    """
    if not (ks and thetas and max_lens):
        raise ValueError("each sweep axis needs at least one value")
    cells = []
    for k in ks:
        for theta in thetas:
            for max_len in max_lens:
                summaries = {eid: summarize_fn(eid, k, theta, max_len) for eid in references}
                report = evaluate_corpus(summaries, references)
                cells.append(SweepCell(k, theta, max_len, dict(report.mean_scores)))
    mean = {m: statistics.fmean(c.mean_scores[m] for c in cells) for m in METRICS}
    std = {m: statistics.pstdev(c.mean_scores[m] for c in cells) for m in METRICS}
    return SweepGrid(cells, mean, std)


def render_sweep(grid: SweepGrid) -> str:
    lines = [f"{'k':>4}  {'theta':>5}  {'max_len':>7}  {'R1':>6}  {'R2':>6}  {'RL':>6}"]
    for c in grid.cells:
        lines.append(
            f"{c.k:>4}  {c.theta:>5.2f}  {c.max_len:>7}  "
            f"{c.mean_scores['rouge1']:>6.2f}  {c.mean_scores['rouge2']:>6.2f}  "
            f"{c.mean_scores['rougeL']:>6.2f}"
        )
    lines.append(
        "mean (std): "
        + "  ".join(
            f"{name} {grid.mean[m]:.2f} (+/-{grid.std[m]:.2f})"
            for name, m in zip(("R1", "R2", "RL"), METRICS)
        )
    )
    return "\n".join(lines)

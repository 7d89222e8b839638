import json

import pytest

from opinionsum.corpus import (
    Corpus,
    ReviewFileError,
    detokenize,
    ingest_reviews,
    make_review,
    tokenize,
)


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")
    return path


class TestTokenize:
    def test_lowercase_and_punct_split(self):
        assert tokenize("Very comfy bed.") == ["very", "comfy", "bed", "."]

    def test_empty(self):
        assert tokenize("") == []

    def test_sep_token_atomic(self):
        assert tokenize("clean bath [SEP] nice view") == ["clean", "bath", "[SEP]", "nice", "view"]

    def test_lowercase_sep_is_not_special(self):
        assert tokenize("[sep]") == ["[", "sep", "]"]

    def test_apostrophes_and_numbers(self):
        assert tokenize("Don't pay $20!") == ["don", "'", "t", "pay", "$", "20", "!"]

    def test_idempotent_under_detokenize(self):
        texts = ["Very comfy bed.", "a [SEP] b", "who's   there?!", "Ünïcode, too."]
        for t in texts:
            once = tokenize(t)
            assert tokenize(detokenize(once)) == once

    def test_word_character_implies_tokens(self):
        import random
        import re

        rng = random.Random(8)
        pool = "ab C1.?! \t-é"
        for _ in range(300):
            text = "".join(rng.choice(pool) for _ in range(rng.randint(0, 12)))
            if re.search(r"\w", text):
                assert tokenize(text), repr(text)


class TestIngest:
    def test_single_record(self, tmp_path):
        path = write_jsonl(tmp_path / "r.jsonl", [
            {"review_id": "r1", "entity_id": "e1", "text": "great food"},
        ])
        corpus = ingest_reviews(path)
        assert corpus.review_count == 1
        assert corpus.entity_ids() == ["e1"]
        assert corpus.entity_reviews("e1")[0].tokens == ("great", "food")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        corpus = ingest_reviews(path)
        assert corpus.review_count == 0
        assert corpus.entity_ids() == []

    def test_missing_field_reports_line(self, tmp_path):
        path = write_jsonl(tmp_path / "r.jsonl", [
            {"review_id": "r1", "entity_id": "e1", "text": "ok"},
            {"review_id": "r2", "entity_id": "e1"},
        ])
        with pytest.raises(ReviewFileError, match="line 2"):
            ingest_reviews(path)

    def test_duplicate_review_id(self, tmp_path):
        path = write_jsonl(tmp_path / "r.jsonl", [
            {"review_id": "r1", "entity_id": "e1", "text": "a"},
            {"review_id": "r1", "entity_id": "e2", "text": "b"},
        ])
        with pytest.raises(ReviewFileError, match="duplicate"):
            ingest_reviews(path)

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "r.jsonl"
        path.write_text('{"review_id": "r1", "entity_id": "e1", "text": "a"}\nnot json\n')
        with pytest.raises(ReviewFileError, match="line 2"):
            ingest_reviews(path)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ReviewFileError):
            ingest_reviews(tmp_path / "nope.jsonl")

    def test_unsupported_format(self, tmp_path):
        with pytest.raises(ValueError, match="format"):
            ingest_reviews(tmp_path / "r.csv", format="csv")

    def test_order_and_partition(self, tmp_path):
        records = [
            {"review_id": f"r{i}", "entity_id": f"e{i % 3}", "text": f"text {i}"}
            for i in range(10)
        ]
        path = write_jsonl(tmp_path / "r.jsonl", records)
        corpus = ingest_reviews(path)
        # per-entity order equals file order
        assert [r.review_id for r in corpus.entity_reviews("e0")] == ["r0", "r3", "r6", "r9"]
        # partition: entity sizes sum to the total
        assert sum(len(corpus.entities[e]) for e in corpus.entity_ids()) == corpus.review_count

    def test_deterministic_reingest(self, tmp_path):
        records = [
            {"review_id": f"r{i}", "entity_id": f"e{i % 2}", "text": f"some text {i}."}
            for i in range(6)
        ]
        path = write_jsonl(tmp_path / "r.jsonl", records)
        a = ingest_reviews(path)
        b = ingest_reviews(path)
        assert a.entities == b.entities

    def test_split_field(self, tmp_path):
        path = write_jsonl(tmp_path / "r.jsonl", [
            {"review_id": "r1", "entity_id": "e1", "text": "a", "split": "train"},
        ])
        assert ingest_reviews(path).review("r1").split == "train"
        path = write_jsonl(tmp_path / "bad.jsonl", [
            {"review_id": "r1", "entity_id": "e1", "text": "a", "split": "validation"},
        ])
        with pytest.raises(ReviewFileError, match="split"):
            ingest_reviews(path)


class TestEntityReviews:
    def test_unknown_entity(self):
        corpus = Corpus({"e1": [make_review("r1", "e1", "hello")]})
        with pytest.raises(KeyError, match="zzz"):
            corpus.entity_reviews("zzz")

    def test_no_cross_entity_leakage(self):
        corpus = Corpus({
            "e1": [make_review("r1", "e1", "a"), make_review("r2", "e1", "b")],
            "e2": [make_review("r3", "e2", "c")],
        })
        assert [r.review_id for r in corpus.entity_reviews("e1")] == ["r1", "r2"]
        assert [r.review_id for r in corpus.entity_reviews("e2")] == ["r3"]

import json

import pytest
from fastapi.testclient import TestClient

from opinionsum.app.bundle import PipelineBundle, run_summarize
from opinionsum.app.cli import run_cli
from opinionsum.app.service import create_app
from opinionsum.extraction import extract_corpus
from opinionsum.lexicons import HOTEL_LEXICON
from opinionsum.selection import SelectionConfig
from opinionsum.synthetic import (
    planted_entity_corpus,
    toy_embedding_store,
    write_embeddings_file,
    write_reviews_file,
)


@pytest.fixture(scope="module")
def bundle(toy_corpus, toy_extractions, toy_store, toy_model):
    return PipelineBundle(toy_corpus, toy_extractions, toy_store, toy_model, HOTEL_LEXICON)


@pytest.fixture(scope="module")
def planted_bundle(toy_model):
    corpus = planted_entity_corpus()
    extractions = extract_corpus(corpus, HOTEL_LEXICON)
    store = toy_embedding_store(corpus, dim=16, seed=7)
    return PipelineBundle(corpus, extractions, store, toy_model, HOTEL_LEXICON)


class TestRunSummarize:
    def test_dominant_cluster_listed_first(self, planted_bundle):
        result = run_summarize(planted_bundle, "planted")
        assert result["status"] == "ok"
        assert result["summary"]
        assert result["selected"][0]["phrase"] == "location really great"
        assert result["selected"][0]["size"] == 30
        assert result["selected"][0]["aspect"] == "location"

    def test_aspect_filter_matching_nothing(self, planted_bundle):
        result = run_summarize(planted_bundle, "planted", aspect=["price"])
        assert result["status"] == "empty_selection"
        assert result["summary"] == "" and result["selected"] == []

    def test_k_override(self, planted_bundle):
        result = run_summarize(planted_bundle, "planted", k=1)
        assert len(result["selected"]) == 1

    def test_polarity_filter(self, planted_bundle):
        result = run_summarize(planted_bundle, "planted", polarity="negative")
        assert result["status"] == "ok"
        assert all(item["polarity"] == "negative" for item in result["selected"])

    def test_cluster_provenance_included(self, planted_bundle):
        result = run_summarize(planted_bundle, "planted")
        top = result["clusters"][0]
        assert top["size"] == len(top["members"]) == 30
        assert all(m["review_id"].startswith("planted-d") for m in top["members"])

    def test_repeat_identical_excluding_timing(self, planted_bundle):
        a = run_summarize(planted_bundle, "planted", k=2)
        b = run_summarize(planted_bundle, "planted", k=2)
        a.pop("timing_ms"), b.pop("timing_ms")
        assert a == b

    def test_unknown_entity(self, planted_bundle):
        with pytest.raises(KeyError):
            run_summarize(planted_bundle, "nope")


class TestBundleValidation:
    def test_extractions_must_reference_corpus(self, toy_corpus, toy_store, toy_model,
                                               toy_extractions):
        bad = dict(toy_extractions)
        bad["ghost"] = next(iter(toy_extractions.values()))
        with pytest.raises(ValueError, match="ghost"):
            PipelineBundle(toy_corpus, bad, toy_store, toy_model, HOTEL_LEXICON)


class TestService:
    @pytest.fixture()
    def client(self, bundle):
        return TestClient(create_app(bundle))

    def test_health(self, client):
        response = client.get("/api/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok"}

    def test_entities_projection(self, client, bundle):
        listing = client.get("/api/entities").json()
        assert {e["entity_id"]: e["review_count"] for e in listing} == {
            eid: len(reviews) for eid, reviews in bundle.corpus.entities.items()
        }

    def test_aspects_endpoint(self, client):
        payload = client.get("/api/aspects").json()
        assert payload["domain"] == "hotel"
        assert "service" in payload["aspects"]

    def test_clusters_endpoint(self, client):
        payload = client.get("/api/entities/e0/clusters?theta=0.8&seed=0").json()
        assert payload["entity_id"] == "e0"
        sizes = [c["size"] for c in payload["clusters"]]
        assert sizes == sorted(sizes, reverse=True)

    def test_clusters_polarity_param(self, client):
        payload = client.get("/api/entities/e0/clusters?polarity=negative").json()
        assert all(c["polarity"] == "negative" for c in payload["clusters"])

    def test_summarize_delegates(self, client, bundle):
        body = {"entity_id": "e0", "k": 3, "seed": 1}
        got = client.post("/api/summarize", json=body).json()
        expected = run_summarize(bundle, "e0", k=3, seed=1)
        got.pop("timing_ms"), expected.pop("timing_ms")
        assert got == expected

    def test_summarize_unknown_entity_404(self, client):
        assert client.post("/api/summarize", json={"entity_id": "zzz"}).status_code == 404

    def test_unknown_cluster_entity_404(self, client):
        assert client.get("/api/entities/zzz/clusters").status_code == 404

    def test_invalid_theta_422(self, client):
        body = {"entity_id": "e0", "theta": 2.0}
        assert client.post("/api/summarize", json=body).status_code == 422

    def test_identical_requests_identical_bodies(self, client):
        body = {"entity_id": "e1", "polarity": "positive", "seed": 3}
        a = client.post("/api/summarize", json=body).json()
        b = client.post("/api/summarize", json=body).json()
        a.pop("timing_ms"), b.pop("timing_ms")
        assert a == b


@pytest.fixture(scope="module")
def cli_data(tmp_path_factory, toy_corpus, toy_store):
    root = tmp_path_factory.mktemp("cli")
    reviews = root / "reviews.jsonl"
    embeddings = root / "embeddings.txt"
    write_reviews_file(toy_corpus, reviews)
    write_embeddings_file(toy_store, embeddings)
    refs = root / "refs.jsonl"
    with open(refs, "w") as fh:
        for eid in list(toy_corpus.entity_ids())[:2]:
            text = toy_corpus.entities[eid][0].text
            fh.write(json.dumps({"entity_id": eid, "summary": text}) + "\n")
    return {"root": root, "reviews": reviews, "embeddings": embeddings, "refs": refs}


class TestCli:
    def test_no_arguments_usage_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli([])
        assert exc.value.code == 2

    def test_unknown_subcommand_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["frobnicate"])
        assert exc.value.code == 2

    def test_ingest(self, cli_data, capsys):
        assert run_cli(["ingest", "--reviews", str(cli_data["reviews"])]) == 0
        out = capsys.readouterr().out
        assert "read 640 reviews across 8 entities" in out

    def test_ingest_missing_file_exit_1(self, cli_data, capsys):
        assert run_cli(["ingest", "--reviews", str(cli_data["root"] / "nope.jsonl")]) == 1
        assert "error:" in capsys.readouterr().err

    def test_extract_writes_tags(self, cli_data, capsys):
        out_path = cli_data["root"] / "tags.jsonl"
        code = run_cli(["extract", "--reviews", str(cli_data["reviews"]),
                        "--domain", "hotel", "--out", str(out_path)])
        assert code == 0 and out_path.exists()
        first = json.loads(out_path.read_text().splitlines()[0])
        assert set(first) == {"review_id", "token_indices", "polarity", "aspect"}

    def test_train_summarize_evaluate_roundtrip(self, cli_data, capsys):
        root = cli_data["root"]
        model_path = root / "model.ckpt"
        code = run_cli([
            "train", "--reviews", str(cli_data["reviews"]), "--out", str(model_path),
            "--epochs", "1", "--d-model", "32", "--d-ff", "64", "--heads", "2",
            "--layers", "1", "--dropout", "0.0", "--seed", "0",
        ])
        assert code == 0 and model_path.exists()
        capsys.readouterr()

        code = run_cli([
            "summarize", "--reviews", str(cli_data["reviews"]),
            "--embeddings", str(cli_data["embeddings"]), "--dim", "16",
            "--model", str(model_path), "--entity", "e0", "--k", "3",
        ])
        assert code == 0
        assert capsys.readouterr().out.strip()

        report_path = root / "report.json"
        code = run_cli([
            "evaluate", "--reviews", str(cli_data["reviews"]),
            "--refs", str(cli_data["refs"]), "--method", "lexrank",
            "--out", str(report_path),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0].split() == ["Method", "R1", "R2", "RL"]
        report = json.loads(report_path.read_text())
        assert report["method"] == "lexrank" and "mean" in report

    def test_summarize_baseline_methods(self, cli_data, capsys):
        for method in ("lexrank", "best_review", "worst_review"):
            code = run_cli([
                "summarize", "--reviews", str(cli_data["reviews"]),
                "--entity", "e1", "--method", method,
            ])
            assert code == 0
            assert capsys.readouterr().out.strip()

    def test_evaluate_votes(self, cli_data, capsys):
        votes = cli_data["root"] / "votes.jsonl"
        records = [
            {"item_id": "1", "system": "a", "vote": "best"},
            {"item_id": "1", "system": "b", "vote": "worst"},
            {"item_id": "2", "system": "a", "vote": "best"},
            {"item_id": "2", "system": "b", "vote": "none"},
        ]
        votes.write_text("\n".join(json.dumps(r) for r in records) + "\n")
        assert run_cli(["evaluate", "--reviews", str(cli_data["reviews"]),
                        "--votes", str(votes)]) == 0
        out = capsys.readouterr().out
        assert "+100.00" in out

    def test_data_dir_env_var(self, cli_data, monkeypatch, capsys):
        monkeypatch.setenv("OPINIONSUM_DATA_DIR", str(cli_data["root"]))
        monkeypatch.chdir(cli_data["root"].parent)
        assert run_cli(["ingest", "--reviews", "reviews.jsonl"]) == 0
        assert "640 reviews" in capsys.readouterr().out

    def test_sweep_grid(self, cli_data, capsys):
        root = cli_data["root"]
        model_path = root / "sweep_model.ckpt"
        assert run_cli([
            "train", "--reviews", str(cli_data["reviews"]), "--out", str(model_path),
            "--epochs", "1", "--d-model", "16", "--d-ff", "32", "--heads", "2",
            "--layers", "1", "--dropout", "0.0",
        ]) == 0
        capsys.readouterr()
        out_path = root / "sweep.json"
        code = run_cli([
            "sweep", "--reviews", str(cli_data["reviews"]),
            "--embeddings", str(cli_data["embeddings"]), "--dim", "16",
            "--model", str(model_path), "--refs", str(cli_data["refs"]),
            "--k", "2,3", "--theta", "0.8", "--max-len", "20",
            "--out", str(out_path),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "mean (std):" in out
        payload = json.loads(out_path.read_text())
        assert len(payload["cells"]) == 2
        assert set(payload["mean"]) == {"rouge1", "rouge2", "rougeL"}

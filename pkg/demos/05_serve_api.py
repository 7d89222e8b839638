"""Build a bundle on synthetic data and serve the HTTP API.

Endpoints once running (default http://127.0.0.1:8000):
    GET  /api/health
    GET  /api/entities
    GET  /api/aspects
    GET  /api/entities/{id}/clusters?theta=&seed=&aspect=&polarity=
    POST /api/summarize   {"entity_id": "e0", "k": 5, "polarity": "negative"}

Point the frontend at it, or curl:
    curl -s localhost:8000/api/entities
    curl -s -X POST localhost:8000/api/summarize \
         -H 'content-type: application/json' -d '{"entity_id": "e0"}'
"""

from opinionsum.app.bundle import PipelineBundle
from opinionsum.app.service import serve
from opinionsum.extraction import extract_corpus
from opinionsum.generator import ModelDims, TrainConfig, build_vocab, make_training_pairs, train
from opinionsum.lexicons import HOTEL_LEXICON
from opinionsum.synthetic import synthetic_corpus, toy_embedding_store

corpus = synthetic_corpus(n_reviews=640, n_entities=8, seed=13)
extractions = extract_corpus(corpus, HOTEL_LEXICON)
store = toy_embedding_store(corpus, dim=16, seed=7)
vocab = build_vocab([r.tokens for r in corpus.all_reviews()])
pairs, _ = make_training_pairs(corpus, extractions, vocab)
print("training generator (a few seconds)...")
model, _ = train(pairs, ModelDims(layers=2, heads=4, d_model=64, d_ff=128, dropout=0.0),
                 vocab, TrainConfig(seed=0))
bundle = PipelineBundle(corpus, extractions, store, model, HOTEL_LEXICON)

if __name__ == "__main__":
    # frontend/ holds index.html plus the tsc output in dist/; run
    # `npm run build` there first (the API works fine without it)
    serve(bundle, host="127.0.0.1", port=8000, frontend_dir="frontend")

"""Hyper-parameter sensitivity: sweep k, theta, and max generation length.

Each grid cell re-runs select + generate + ROUGE; the report shows the
per-cell scores plus mean and standard deviation per metric.
"""

from opinionsum.app.bundle import PipelineBundle, run_summarize
from opinionsum.evaluation import render_sweep, sensitivity_sweep
from opinionsum.extraction import extract_corpus
from opinionsum.generator import ModelDims, TrainConfig, build_vocab, make_training_pairs, train
from opinionsum.lexicons import HOTEL_LEXICON
from opinionsum.synthetic import synthetic_corpus, toy_embedding_store

corpus = synthetic_corpus(n_reviews=320, n_entities=4, seed=13)
extractions = extract_corpus(corpus, HOTEL_LEXICON)
store = toy_embedding_store(corpus, dim=16, seed=7)
vocab = build_vocab([r.tokens for r in corpus.all_reviews()])
pairs, _ = make_training_pairs(corpus, extractions, vocab)
model, _ = train(pairs, ModelDims(layers=2, heads=4, d_model=64, d_ff=128, dropout=0.0),
                 vocab, TrainConfig(seed=0))
bundle = PipelineBundle(corpus, extractions, store, model, HOTEL_LEXICON)

references = {eid: corpus.entities[eid][0].text for eid in corpus.entity_ids()}


def summarize_fn(entity_id, k, theta, max_len):
    return run_summarize(bundle, entity_id, k=k, theta=theta, max_len=max_len)["summary"]


grid = sensitivity_sweep(
    summarize_fn, references,
    ks=[5, 10, 15],
    thetas=[0.6, 0.8],
    max_lens=[40, 60],
)
print(render_sweep(grid))

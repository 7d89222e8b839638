"""End-to-end walkthrough on a synthetic hotel corpus.

Builds each pipeline stage in order and prints what it produces:
reviews -> opinion triples -> merged clusters -> selected opinions ->
textualization -> generated summary.  Runs in well under a minute.
"""

from opinionsum.app.bundle import PipelineBundle, run_summarize
from opinionsum.extraction import entity_opinion_set, extract_corpus
from opinionsum.generator import ModelDims, TrainConfig, build_vocab, make_training_pairs, train
from opinionsum.lexicons import HOTEL_LEXICON
from opinionsum.selection import SelectionConfig, merge_opinions, representative
from opinionsum.synthetic import synthetic_corpus, toy_embedding_store
from opinionsum.textualize import textualize_training

corpus = synthetic_corpus(n_reviews=640, n_entities=8, seed=13)
print(f"corpus: {corpus.review_count} reviews, {len(corpus.entities)} entities")
sample = corpus.entities["e0"][0]
print(f"sample review: {sample.text!r}")

# Step 1: opinion extraction (deterministic rule extractor)
extractions = extract_corpus(corpus, HOTEL_LEXICON)
for op in extractions[sample.review_id].opinions:
    print(f"  opinion: {op.phrase_text!r}  polarity={op.polarity}  aspect={op.aspect}")

# Step 2: merge similar opinions and rank clusters by size
store = toy_embedding_store(corpus, dim=16, seed=7)
opinions = entity_opinion_set(extractions, corpus, "e0")
clusters = merge_opinions(opinions, store, SelectionConfig(theta=0.8, seed=0))
clusters = sorted(clusters, key=lambda c: -c.size)
print(f"\nentity e0: {len(opinions)} opinions merged into {len(clusters)} clusters; top 5:")
for c in clusters[:5]:
    print(f"  size {c.size:>3}  repr: {representative(c).phrase_text!r}")

# Step 3a: train the generator to reconstruct reviews from T(O_r)
vocab = build_vocab([r.tokens for r in corpus.all_reviews()])
pairs, skipped = make_training_pairs(corpus, extractions, vocab)
print(f"\ntraining pairs: {len(pairs)} (skipped {skipped}); vocab {len(vocab)} tokens")
print(f"example input : {textualize_training(extractions[sample.review_id]).text!r}")
print(f"example target: {sample.text!r}")
dims = ModelDims(layers=2, heads=4, d_model=64, d_ff=128, dropout=0.0)
model, losses = train(pairs, dims, vocab, TrainConfig(seed=0))
print("per-epoch mean loss:", " ".join(f"{l:.3f}" for l in losses))

# Step 3b: verbalize the selected opinions of an entity
bundle = PipelineBundle(corpus, extractions, store, model, HOTEL_LEXICON)
result = run_summarize(bundle, "e0", k=5)
print("\nselected opinions (frequency order):")
for item in result["selected"]:
    print(f"  x{item['size']:<3} {item['phrase']!r}  [{item['aspect']}/{item['polarity']}]")
print(f"\nsummary: {result['summary']!r}")

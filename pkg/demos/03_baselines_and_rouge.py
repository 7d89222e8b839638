"""Extractive baselines and ROUGE scoring side by side.

LexRank picks central sentences, best/worst review pick whole reviews
by mean word overlap; all methods are scored against a reference with
ROUGE-1/2/L and printed as one table.
"""

from opinionsum.baselines import best_review, lexrank_summarize, worst_review
from opinionsum.evaluation import evaluate_corpus, render_score_table
from opinionsum.synthetic import synthetic_corpus

corpus = synthetic_corpus(n_reviews=200, n_entities=4, seed=3)
entity_ids = corpus.entity_ids()

# references: desk-scale stand-in, the first review of each entity
references = {eid: corpus.entities[eid][0].text for eid in entity_ids}

rows = {}
for method, fn in [
    ("lexrank", lambda revs: lexrank_summarize(revs, budget_tokens=60)),
    ("best_review", lambda revs: best_review(revs).text),
    ("worst_review", lambda revs: worst_review(revs).text),
]:
    summaries = {eid: fn(corpus.entity_reviews(eid)) for eid in entity_ids}
    report = evaluate_corpus(summaries, references)
    rows[method] = report.mean_scores

print(render_score_table(rows))

print("\nlexrank summary for e0:")
print(" ", lexrank_summarize(corpus.entity_reviews("e0"), budget_tokens=30))
print("best review for e0:")
print(" ", best_review(corpus.entity_reviews("e0")).text)

import pytest

from opinionsum.extraction import extract_corpus
from opinionsum.generator import ModelDims, TrainConfig, build_vocab, make_training_pairs, train
from opinionsum.lexicons import HOTEL_LEXICON
from opinionsum.synthetic import synthetic_corpus, toy_embedding_store

TOY_DIMS = ModelDims(layers=2, heads=4, d_model=64, d_ff=128, dropout=0.0)


@pytest.fixture(scope="session")
def toy_corpus():
    return synthetic_corpus(n_reviews=640, n_entities=8, seed=13)


@pytest.fixture(scope="session")
def toy_extractions(toy_corpus):
    return extract_corpus(toy_corpus, HOTEL_LEXICON)


@pytest.fixture(scope="session")
def toy_vocab(toy_corpus):
    return build_vocab([r.tokens for r in toy_corpus.all_reviews()], min_count=1)


@pytest.fixture(scope="session")
def toy_pairs(toy_corpus, toy_extractions, toy_vocab):
    pairs, _ = make_training_pairs(toy_corpus, toy_extractions, toy_vocab)
    return pairs


@pytest.fixture(scope="session")
def toy_model(toy_pairs, toy_vocab):
    model, losses = train(toy_pairs, TOY_DIMS, toy_vocab, TrainConfig(seed=0))
    model.epoch_losses = losses
    return model


@pytest.fixture(scope="session")
def toy_store(toy_corpus):
    return toy_embedding_store(toy_corpus, dim=16, seed=7)

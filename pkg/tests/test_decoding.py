import numpy as np
import pytest

from opinionsum.corpus import detokenize, tokenize
from opinionsum.generator import DecodeConfig, beam_decode, generate, greedy_decode, length_penalty
from opinionsum.generator.vocab import EOS


def review_trigrams(tokens, n):
    return [tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


class TestLengthPenalty:
    def test_formula_value(self):
        assert length_penalty(5, 0.6) == pytest.approx(((5 + 5) / 6) ** 0.6)
        assert length_penalty(5, 0.6) == pytest.approx(1.3587, abs=1e-4)

    def test_alpha_zero_is_neutral(self):
        assert length_penalty(17, 0.0) == 1.0


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            DecodeConfig(beam_size=0)
        with pytest.raises(ValueError):
            DecodeConfig(max_len=0)
        with pytest.raises(ValueError):
            DecodeConfig(ngram_block=1)
        DecodeConfig(ngram_block=None)

    def test_defaults(self):
        cfg = DecodeConfig()
        assert (cfg.beam_size, cfg.length_penalty_alpha, cfg.ngram_block, cfg.max_len) == \
            (5, 0.6, 3, 60)


class TestDecoding:
    def test_beam_one_equals_greedy(self, toy_model, toy_pairs):
        cfg = DecodeConfig(beam_size=1)
        for src, _ in toy_pairs[:20]:
            assert beam_decode(toy_model, src, cfg) == greedy_decode(toy_model, src, cfg)

    def test_no_repeated_ngram_when_blocking(self, toy_model, toy_pairs):
        cfg = DecodeConfig(beam_size=5, ngram_block=3)
        for src, _ in toy_pairs[:25]:
            out = beam_decode(toy_model, src, cfg)
            grams = review_trigrams(out, 3)
            assert len(grams) == len(set(grams))

    def test_length_capped(self, toy_model, toy_pairs):
        cfg = DecodeConfig(max_len=7)
        for src, _ in toy_pairs[:10]:
            assert len(beam_decode(toy_model, src, cfg)) <= 7
            assert len(greedy_decode(toy_model, src, cfg)) <= 7

    def test_deterministic(self, toy_model, toy_pairs):
        cfg = DecodeConfig()
        src = toy_pairs[0][0]
        assert beam_decode(toy_model, src, cfg) == beam_decode(toy_model, src, cfg)

    def test_wider_beam_never_lowers_best_score(self, toy_model, toy_pairs):
        # score the returned hypothesis under the shared normalization
        def normalized_score(model, src, out, cfg):
            from opinionsum.generator.decoding import _log_softmax
            from opinionsum.generator.vocab import BOS
            memory, mask = model.encode(np.asarray([src]))
            total = 0.0
            prefix = [BOS]
            for tok in out + [EOS]:
                logprobs = _log_softmax(model.next_logits(memory, mask, np.asarray([prefix]))[0])
                total += logprobs[tok]
                prefix.append(tok)
            return total / length_penalty(len(out) + 1, cfg.length_penalty_alpha)

        for src, _ in toy_pairs[:6]:
            scores = []
            for beam in (1, 2, 5):
                cfg = DecodeConfig(beam_size=beam, ngram_block=None, max_len=20)
                out = beam_decode(toy_model, src, cfg)
                scores.append(normalized_score(toy_model, src, out, cfg))
            assert scores[0] <= scores[1] + 1e-9
            assert scores[1] <= scores[2] + 1e-9

    def test_eos_never_mid_output(self, toy_model, toy_pairs):
        for src, _ in toy_pairs[:10]:
            out = beam_decode(toy_model, src, DecodeConfig())
            assert EOS not in out


class TestGenerate:
    def test_returns_string(self, toy_model):
        text = "location really great [SEP] staff really friendly"
        summary = generate(toy_model, text, DecodeConfig())
        assert isinstance(summary, str) and summary
        assert "<" not in summary  # specials stripped

    def test_accepts_textualized_object(self, toy_model, toy_extractions, toy_corpus):
        from opinionsum.textualize import textualize_training

        rid = next(r.review_id for r in toy_corpus.all_reviews()
                   if len(toy_extractions[r.review_id]) > 0)
        t = textualize_training(toy_extractions[rid])
        assert generate(toy_model, t) == generate(toy_model, t.text)

    def test_empty_input_rejected(self, toy_model):
        with pytest.raises(ValueError):
            generate(toy_model, "   ")

    def test_reconstruction_quality(self, toy_model, toy_pairs, toy_vocab):
        from opinionsum.evaluation import rouge_n

        cfg = DecodeConfig(beam_size=1)
        scores = []
        for src, tgt in toy_pairs[:20]:
            cand = detokenize(toy_vocab.decode(greedy_decode(toy_model, src, cfg)))
            ref = detokenize(toy_vocab.decode(tgt))
            scores.append(rouge_n(cand, ref, 1).f1)
        assert float(np.mean(scores)) >= 0.6

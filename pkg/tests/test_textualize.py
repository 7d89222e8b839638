import pytest

from opinionsum.extraction import OpinionSet, OpinionTriple
from opinionsum.selection import SelectedOpinions
from opinionsum.textualize import (
    TextualizedOpinions,
    split_textualization,
    textualize_selected,
    textualize_training,
)


def opinion(tokens, rid="r1", start=0):
    indices = tuple(range(start, start + len(tokens)))
    return OpinionTriple(tuple(tokens), indices, "positive", "general", rid)


class TestTraining:
    def test_two_phrases(self):
        oset = OpinionSet("r1", (opinion(["very", "comfy", "bed"]),
                                 opinion(["clean", "bath"], start=5)))
        t = textualize_training(oset)
        assert t.text == "very comfy bed [SEP] clean bath"
        assert t.phrase_count == 2

    def test_single_phrase_no_delimiter(self):
        t = textualize_training(OpinionSet("r1", (opinion(["great", "food"]),)))
        assert t.text == "great food"
        assert "[SEP]" not in t.text

    def test_three_phrases_two_delimiters(self):
        oset = OpinionSet("r1", (opinion(["a"]), opinion(["b"], start=2),
                                 opinion(["c"], start=4)))
        t = textualize_training(oset)
        assert t.text.count("[SEP]") == t.phrase_count - 1 == 2

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            textualize_training(OpinionSet("r1", ()))


class TestSelected:
    def test_frequency_order_preserved(self):
        sel = SelectedOpinions(((opinion(["great", "location"]), 30),
                                (opinion(["rude", "staff"]), 1)))
        assert textualize_selected(sel).text == "great location [SEP] rude staff"

    def test_single_item(self):
        sel = SelectedOpinions(((opinion(["clean", "room"]), 4),))
        assert textualize_selected(sel).text == "clean room"

    def test_equal_sizes_stable(self):
        sel = SelectedOpinions(((opinion(["a"]), 2), (opinion(["b"]), 2)))
        assert textualize_selected(sel).text == "a [SEP] b"

    def test_empty_selection_rejected(self):
        with pytest.raises(ValueError):
            textualize_selected(SelectedOpinions(()))


class TestSplit:
    def test_inverse_of_textualize(self):
        assert split_textualization("very comfy bed [SEP] clean bath") == [
            "very comfy bed", "clean bath",
        ]

    def test_single_phrase(self):
        assert split_textualization("great food") == ["great food"]

    @pytest.mark.parametrize("bad", [
        "[SEP] x", "x [SEP]", "x [SEP]  [SEP] y", "x [SEP] [SEP] y", "",
    ])
    def test_malformed(self, bad):
        with pytest.raises(ValueError):
            split_textualization(bad)

    def test_round_trip(self):
        oset = OpinionSet("r1", (opinion(["very", "comfy", "bed"]),
                                 opinion(["clean", "bath"], start=5),
                                 opinion(["nice", "view"], start=9)))
        t = textualize_training(oset)
        assert split_textualization(t.text) == [o.phrase_text for o in oset.opinions]
        assert len(split_textualization(t.text)) == t.phrase_count

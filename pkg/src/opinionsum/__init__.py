"""Controllable abstractive opinion summarization.

Pipeline: extract (phrase, polarity, aspect) opinions from reviews,
greedily merge similar opinions by embedding cosine, rank clusters by
size, optionally filter by aspect/polarity, and verbalize the selected
opinions with a small encoder-decoder trained only to reconstruct
reviews from their own extracted opinions.
"""

__version__ = "0.1.0"

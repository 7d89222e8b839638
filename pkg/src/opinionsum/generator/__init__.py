"""Desk-scale encoder-decoder generator: trained to reconstruct a review
from its textualized opinions, then used to verbalize selected opinions."""

from .vocab import PAD, BOS, EOS, UNK, SEP, Vocabulary, build_vocab
from .model import ModelDims, GeneratorModel, loss_and_gradients, loss_only
from .training import TrainConfig, TrainingError, make_training_pairs, train
from .decoding import DecodeConfig, generate, greedy_decode, beam_decode, length_penalty
from .checkpoint import CheckpointError, save_model, load_model

__all__ = [
    "PAD", "BOS", "EOS", "UNK", "SEP", "Vocabulary", "build_vocab",
    "ModelDims", "GeneratorModel", "loss_and_gradients", "loss_only",
    "TrainConfig", "TrainingError", "make_training_pairs", "train",
    "DecodeConfig", "generate", "greedy_decode", "beam_decode", "length_penalty",
    "CheckpointError", "save_model", "load_model",
]

"""Deterministic wordpiece vocabulary laboratory."""

from ._pieces import (
    ConfigError,
    FormatError,
    IoError,
    Tokenizer,
    count_words,
    decode_bioes,
    load_vocab,
    normalize,
    pretokenize,
    seg_f1,
    train_vocab,
)

__all__ = [
    "ConfigError",
    "FormatError",
    "IoError",
    "Tokenizer",
    "count_words",
    "decode_bioes",
    "load_vocab",
    "normalize",
    "pretokenize",
    "seg_f1",
    "train_vocab",
]

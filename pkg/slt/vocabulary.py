import numpy as np

from config.settings import Config
from slt.sequence import RELATION_TOKENS, STRUCTURAL_TOKENS, TokenSequence, BRACKETED_SLT
from utils.exceptions import MalformedSequence


class Vocabulary:
    """Token <-> id eşlemesi; özel token'lar her zaman ilk sıradadır"""

    def __init__(self, tokens):
        self.tokens = list(tokens)
        self.index = {token: i for i, token in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValueError("sözlükte tekrar eden token var")
        for special in Config.SPECIAL_TOKENS:
            if special not in self.index:
                raise ValueError(f"özel token eksik: {special}")

    @classmethod
    def build(cls, symbols=None):
        symbols = Config.DEFAULT_SYMBOLS if symbols is None else symbols
        tokens = list(Config.SPECIAL_TOKENS)
        tokens += [Config.OPEN, Config.CLOSE] + list(RELATION_TOKENS.values())
        tokens += [Config.SUP_MARK, Config.SUB_MARK]
        for symbol in symbols:
            if symbol not in tokens:
                tokens.append(symbol)
        return cls(tokens)

    def __len__(self):
        return len(self.tokens)

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self.tokens == other.tokens

    @property
    def pad_id(self):
        return self.index[Config.PAD]

    @property
    def sos_id(self):
        return self.index[Config.SOS]

    @property
    def eos_id(self):
        return self.index[Config.EOS]

    @property
    def const_id(self):
        return self.index[Config.CONST]

    def encode(self, sequence):
        """TokenSequence -> id dizisi"""
        ids = []
        for position, token in enumerate(sequence.tokens):
            if token not in self.index:
                raise MalformedSequence(f"sözlük dışı token {token!r}", position)
            ids.append(self.index[token])
        return np.asarray(ids, dtype=np.int64)

    def decode(self, ids, kind=BRACKETED_SLT):
        return TokenSequence(tuple(self.tokens[int(i)] for i in ids), kind)

    def structural_ids(self):
        return np.asarray([i for i, t in enumerate(self.tokens) if t in STRUCTURAL_TOKENS], dtype=np.int64)

    def symbol_ids(self):
        return np.asarray([i for i, t in enumerate(self.tokens) if t not in STRUCTURAL_TOKENS], dtype=np.int64)

    def is_symbol_id(self, token_id):
        return self.tokens[int(token_id)] not in STRUCTURAL_TOKENS

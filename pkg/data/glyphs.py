import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from config.grammar_params import AtlasConfig
from config.settings import Config
from utils.exceptions import MissingGlyph

GLYPH_SIZE = 16
FONT_SCALE = 2

# 5x7 nokta matrisi yazı tipi (satır satır)
FONT_5X7 = {
    '0': ("01110", "10001", "10011", "10101", "11001", "10001", "01110"),
    '1': ("00100", "01100", "00100", "00100", "00100", "00100", "01110"),
    '2': ("01110", "10001", "00001", "00010", "00100", "01000", "11111"),
    '3': ("11111", "00010", "00100", "00010", "00001", "10001", "01110"),
    '4': ("00010", "00110", "01010", "10010", "11111", "00010", "00010"),
    '5': ("11111", "10000", "11110", "00001", "00001", "10001", "01110"),
    '6': ("00110", "01000", "10000", "11110", "10001", "10001", "01110"),
    '7': ("11111", "00001", "00010", "00100", "01000", "01000", "01000"),
    '8': ("01110", "10001", "10001", "01110", "10001", "10001", "01110"),
    '9': ("01110", "10001", "10001", "01111", "00001", "00010", "01100"),
    'a': ("00000", "00000", "01110", "00001", "01111", "10001", "01111"),
    'b': ("10000", "10000", "10110", "11001", "10001", "10001", "11110"),
    'c': ("00000", "00000", "01110", "10000", "10000", "10001", "01110"),
    'd': ("00001", "00001", "01101", "10011", "10001", "10001", "01111"),
    'e': ("00000", "00000", "01110", "10001", "11111", "10000", "01110"),
    'k': ("10000", "10000", "10010", "10100", "11000", "10100", "10010"),
    'l': ("01100", "00100", "00100", "00100", "00100", "00100", "01110"),
    'm': ("00000", "00000", "11010", "10101", "10101", "10001", "10001"),
    'n': ("00000", "00000", "10110", "11001", "10001", "10001", "10001"),
    'o': ("00000", "00000", "01110", "10001", "10001", "10001", "01110"),
    'p': ("00000", "00000", "11110", "10001", "11110", "10000", "10000"),
    'x': ("00000", "00000", "10001", "01010", "00100", "01010", "10001"),
    'y': ("00000", "00000", "10001", "10001", "01111", "00001", "01110"),
    'z': ("00000", "00000", "11111", "00010", "00100", "01000", "11111"),
    '+': ("00000", "00100", "00100", "11111", "00100", "00100", "00000"),
    '-': ("00000", "00000", "00000", "11111", "00000", "00000", "00000"),
    '=': ("00000", "00000", "11111", "00000", "11111", "00000", "00000"),
}


def _font_bitmap(rows):
    """5x7 deseni x2 büyüt ve 16x16 hücrenin ortasına yerleştir"""
    pattern = np.array([[int(ch) for ch in row] for row in rows], dtype=np.uint8)
    scaled = np.kron(pattern, np.ones((FONT_SCALE, FONT_SCALE), dtype=np.uint8))
    cell = np.zeros((GLYPH_SIZE, GLYPH_SIZE), dtype=np.uint8)
    top = (GLYPH_SIZE - scaled.shape[0]) // 2
    left = (GLYPH_SIZE - scaled.shape[1]) // 2
    cell[top:top + scaled.shape[0], left:left + scaled.shape[1]] = scaled
    return cell


def _bar_bitmap():
    cell = np.zeros((GLYPH_SIZE, GLYPH_SIZE), dtype=np.uint8)
    cell[GLYPH_SIZE // 2, 1:GLYPH_SIZE - 1] = 1
    return cell


def _radical_bitmap():
    cell = np.zeros((GLYPH_SIZE, GLYPH_SIZE), dtype=np.uint8)
    cell[1, 6:GLYPH_SIZE - 1] = 1
    cell[1:GLYPH_SIZE - 1, 6] = 1
    for step in range(5):
        cell[GLYPH_SIZE - 2 - step, 5 - step] = 1
    return cell


def morph_toward(source, target, k):
    """source bitmap'ini en fazla k pikselde target'a benzeyecek şekilde kopyala"""
    result = source.copy()
    differing = np.argwhere(source != target)
    for row, col in differing[:k]:
        result[row, col] = target[row, col]
    return result


@dataclass
class GlyphAtlas:
    bitmaps: Dict[str, np.ndarray]
    ambiguous_pairs: List[Tuple[str, str]] = field(default_factory=list)

    @classmethod
    def build(cls, symbols=None, config=None):
        """Sembol kümesi için 16x16 ikili bitmap'ler; belirsiz çiftler birbirine yaklaştırılır"""
        logger = logging.getLogger('glyphs')
        symbols = Config.DEFAULT_SYMBOLS if symbols is None else symbols
        config = config or AtlasConfig()
        bitmaps = {}
        for symbol in symbols:
            if symbol == Config.FRAC:
                bitmaps[symbol] = _bar_bitmap()
            elif symbol == Config.SQRT:
                bitmaps[symbol] = _radical_bitmap()
            elif symbol in FONT_5X7:
                bitmaps[symbol] = _font_bitmap(FONT_5X7[symbol])
            else:
                logger.error(f"yazı tipinde glyph yok: {symbol!r}")
                raise MissingGlyph(f"yazı tipinde glyph yok: {symbol!r}")

        pairs = []
        for first, second in config.ambiguous_pairs:
            if first not in bitmaps or second not in bitmaps:
                logger.debug(f"belirsiz çift atlandı (sembol kümede yok): {first}/{second}")
                continue
            if config.ambiguity_k is not None:
                bitmaps[second] = morph_toward(bitmaps[first], bitmaps[second], config.ambiguity_k)
            pairs.append((first, second))
        return cls(bitmaps=bitmaps, ambiguous_pairs=pairs)

    def __contains__(self, symbol):
        return symbol in self.bitmaps

    def glyph(self, symbol):
        if symbol not in self.bitmaps:
            raise MissingGlyph(f"atlas'ta glyph yok: {symbol!r}")
        return self.bitmaps[symbol]

    def pixel_distance(self, first, second):
        return int(np.sum(self.glyph(first) != self.glyph(second)))


def apply_salt_pepper(image, p, rng):
    """Her piksel p olasılıkla rastgele 0/1 değerine çekilir"""
    if p <= 0:
        return image
    hit = rng.random(image.shape) < p
    values = (rng.random(image.shape) < 0.5).astype(image.dtype)
    noisy = image.copy()
    noisy[hit] = values[hit]
    return noisy


def collision_rate(atlas, pair, p, trials=10000, seed=0):
    """Aynı gürültü çekimleriyle iki glyph'in gürültülü hallerinin özdeş çıkma oranı"""
    first, second = atlas.glyph(pair[0]), atlas.glyph(pair[1])
    rng = np.random.default_rng(seed)
    collisions = 0
    for _ in range(trials):
        hit = rng.random(first.shape) < p
        values = (rng.random(first.shape) < 0.5).astype(first.dtype)
        noisy_first = np.where(hit, values, first)
        noisy_second = np.where(hit, values, second)
        if np.array_equal(noisy_first, noisy_second):
            collisions += 1
    return collisions / trials

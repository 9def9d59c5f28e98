import logging

import numpy as np

from config.grammar_params import NoiseConfig
from config.settings import Config
from data.dataset import DatasetManifest, Sample
from data.glyphs import GlyphAtlas
from data.rasterizer import rasterize
from slt.latex import slt_to_latex
from slt.mirror import mirror_flip
from slt.tree import L2R, Relation, build_tree, canonicalize
from utils.exceptions import DataError, GrammarExhausted

MAX_ATTEMPTS = 100
NESTED = {'sup': Relation.SUP, 'sub': Relation.SUB}


class ExpressionSampler:
    """Ağırlıklı gramerden derinlik/zincir sınırlı ifade ağaçları örnekler"""

    def __init__(self, config, rng):
        self.config = config.validate()
        self.rng = rng
        self.atoms = config.atom_symbols()
        extend = config.weights.get('chain_extend', 0.0)
        self.p_extend = extend / (1.0 + extend)

    def sample(self):
        self.symbols = []
        self.edges = []
        root = self._chain(depth=1)
        return canonicalize(build_tree(self.symbols, self.edges, root, L2R))

    def _node(self, symbol):
        self.symbols.append(symbol)
        return len(self.symbols) - 1

    def _chain(self, depth):
        head = last = self._element(depth)
        length = 1
        while length < self.config.max_chain and self.rng.random() < self.p_extend:
            node = self._element(depth)
            self.edges.append((last, Relation.FORWARD, node))
            last = node
            length += 1
        return head

    def _choose(self, depth):
        weights = self.config.weights
        options = ['atom']
        if depth < self.config.max_depth:
            options += ['sup', 'sub', 'frac', 'sqrt']
        if Config.FRAC not in self.config.symbols:
            options = [o for o in options if o != 'frac']
        if Config.SQRT not in self.config.symbols:
            options = [o for o in options if o != 'sqrt']
        w = np.array([weights.get(o, 0.0) for o in options], dtype=np.float64)
        if w.sum() <= 0:
            return 'atom'
        return options[int(self.rng.choice(len(options), p=w / w.sum()))]

    def _element(self, depth):
        production = self._choose(depth)
        if production == 'frac':
            node = self._node(Config.FRAC)
            self.edges.append((node, Relation.ABOVE, self._chain(depth + 1)))
            self.edges.append((node, Relation.BELOW, self._chain(depth + 1)))
            return node
        if production == 'sqrt':
            node = self._node(Config.SQRT)
            self.edges.append((node, Relation.INSIDE, self._chain(depth + 1)))
            return node
        node = self._node(self.atoms[int(self.rng.integers(len(self.atoms)))])
        if production in NESTED:
            self.edges.append((node, NESTED[production], self._chain(depth + 1)))
        return node


def gen_corpus(config, count, noise=None, atlas=None, start_index=0):
    """Tohumdan tamamen belirlenen sentetik örnek kümesi üret"""
    logger = logging.getLogger('grammar')
    if count < 1:
        raise DataError("count >= 1 olmalı")
    noise = (noise or NoiseConfig()).validate()
    atlas = atlas or GlyphAtlas.build(config.symbols)
    rng = np.random.default_rng(config.seed)
    sampler = ExpressionSampler(config, rng)

    seen = set()
    trees = []
    for index in range(count):
        for _ in range(MAX_ATTEMPTS):
            tree = sampler.sample()
            latex = slt_to_latex(tree)
            if latex not in seen:
                break
        else:
            logger.error(f"{index}. örnek için {MAX_ATTEMPTS} denemede benzersiz ifade bulunamadı")
            raise GrammarExhausted(f"{count} benzersiz ifade üretilemiyor ({index} üretildi)")
        seen.add(latex)
        trees.append((latex, tree))

    # Gürültü tohumları sırayla önceden çekilir; rasterleştirme örnek başına bağımsızdır
    noise_seeds = rng.integers(0, 2 ** 32, size=count)
    samples = []
    for index, ((latex, tree), seed) in enumerate(zip(trees, noise_seeds)):
        image = rasterize(tree, atlas, noise, np.random.default_rng(int(seed)))
        samples.append(Sample(id=f"{start_index + index:06d}", image=image, latex=latex,
                              slt=tree, mfslt=mirror_flip(tree)))
    logger.info(f"{count} örnek üretildi (seed={config.seed})")
    return DatasetManifest(samples)

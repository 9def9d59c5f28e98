from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from config.settings import Config
from utils.exceptions import ConfigError

PRODUCTIONS = ('atom', 'sup', 'sub', 'frac', 'sqrt', 'chain_extend')


def _default_weights():
    return {'atom': 6.0, 'sup': 1.0, 'sub': 1.0, 'frac': 0.7, 'sqrt': 0.5, 'chain_extend': 1.5}


@dataclass
class GrammarConfig:
    symbols: List[str] = field(default_factory=lambda: list(Config.DEFAULT_SYMBOLS))
    max_depth: int = 3
    max_chain: int = 8
    weights: Dict[str, float] = field(default_factory=_default_weights)
    seed: int = 0

    def validate(self):
        if self.max_depth < 1:
            raise ConfigError("max_depth >= 1 olmalı")
        if self.max_chain < 1:
            raise ConfigError("max_chain >= 1 olmalı")
        unknown = set(self.weights) - set(PRODUCTIONS)
        if unknown:
            raise ConfigError(f"bilinmeyen üretim ağırlıkları: {sorted(unknown)}")
        if any(w < 0 for w in self.weights.values()):
            raise ConfigError("ağırlıklar >= 0 olmalı")
        if not any(self.weights.get(p, 0.0) > 0 for p in PRODUCTIONS if p != 'chain_extend'):
            raise ConfigError("en az bir eleman üretiminin ağırlığı pozitif olmalı")
        if not self.atom_symbols():
            raise ConfigError("sembol kümesinde atom yok")
        return self

    def atom_symbols(self):
        return [s for s in self.symbols if s not in (Config.FRAC, Config.SQRT)]


@dataclass
class NoiseConfig:
    salt_pepper_p: float = 0.0
    jitter_px: int = 0

    def validate(self):
        if not 0.0 <= self.salt_pepper_p <= 1.0:
            raise ConfigError("salt_pepper_p [0, 1] aralığında olmalı")
        if self.jitter_px < 0:
            raise ConfigError("jitter_px >= 0 olmalı")
        return self


@dataclass
class AtlasConfig:
    ambiguous_pairs: List[Tuple[str, str]] = field(default_factory=lambda: list(Config.AMBIGUOUS_PAIRS))
    ambiguity_k: Optional[int] = 2

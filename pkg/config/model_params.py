from dataclasses import dataclass, field, fields
from typing import Optional, Tuple

from utils.exceptions import ConfigError

# first_pass_label / ablation / target_kind değerleri
MFSLT = "MFSLT"
SLT = "SLT"
ABLATION_NONE = "none"
ABLATION_CONFIG1 = "config1"
ABLATION_CONFIG2 = "config2"


@dataclass
class ModelConfig:
    vocab_size: int = 0
    embed_dim: int = 256
    hidden_dim: int = 256
    attention_dim: int = 128
    maxout_proj_dim: int = 512
    encoder_channels: int = 64
    encoder_stage_channels: Tuple[int, ...] = (16, 32)
    coverage_filters: int = 64
    coverage_kernel: int = 5
    ham_kernel: int = 5
    lambda1: float = 1.0
    lambda2: float = 0.1
    use_bat: bool = True
    use_slm: bool = True
    interaction: bool = True
    first_pass_label: str = MFSLT
    uni_direction: str = "L2R"
    ablation: str = ABLATION_NONE
    target_kind: str = "BracketedSlt"
    max_decode_len: int = 200
    seed: int = 0

    def validate(self):
        """Yapılandırma değişmezlerini kontrol et"""
        if self.vocab_size < 5:
            raise ConfigError(f"vocab_size çok küçük: {self.vocab_size}")
        for name in ('embed_dim', 'hidden_dim', 'attention_dim', 'maxout_proj_dim',
                     'encoder_channels', 'coverage_filters', 'max_decode_len'):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} pozitif olmalı")
        if self.maxout_proj_dim % 2 != 0:
            raise ConfigError("maxout_proj_dim çift olmalı")
        if self.coverage_kernel % 2 == 0 or self.ham_kernel % 2 == 0:
            raise ConfigError("kapsama çekirdekleri tek boyutlu olmalı")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ConfigError("lambda1, lambda2 >= 0 olmalı")
        if self.first_pass_label not in (MFSLT, SLT):
            raise ConfigError(f"bilinmeyen first_pass_label: {self.first_pass_label}")
        if self.uni_direction not in ("L2R", "R2L"):
            raise ConfigError(f"bilinmeyen uni_direction: {self.uni_direction}")
        if self.target_kind not in ("BracketedSlt", "LatexSeq"):
            raise ConfigError(f"bilinmeyen target_kind: {self.target_kind}")
        if self.ablation not in (ABLATION_NONE, ABLATION_CONFIG1, ABLATION_CONFIG2):
            raise ConfigError(f"bilinmeyen ablation: {self.ablation}")
        if self.ablation != ABLATION_NONE and (self.use_bat or self.use_slm):
            raise ConfigError("config1/config2 yalnızca tek yönlü temel modelde çalışır (use_bat=use_slm=false)")
        if len(self.encoder_stage_channels) != 2:
            raise ConfigError("encoder_stage_channels iki kanal sayısı içermeli")
        return self


@dataclass
class TrainConfig:
    batch_size: int = 32
    epochs: int = 60
    lr_peak: float = 2.0
    rho: float = 0.95
    eps: float = 1e-6
    seed: int = 0
    eval_every: int = 10
    clip_norm: Optional[float] = None
    log_wall_time: bool = False

    def validate(self):
        if self.batch_size < 1:
            raise ConfigError("batch_size >= 1 olmalı")
        if self.epochs < 1:
            raise ConfigError("epochs >= 1 olmalı")
        if self.lr_peak <= 0:
            raise ConfigError("lr_peak > 0 olmalı")
        if not 0.0 <= self.rho < 1.0:
            raise ConfigError("rho [0, 1) aralığında olmalı")
        if self.eps <= 0:
            raise ConfigError("eps > 0 olmalı")
        if self.eval_every < 1:
            raise ConfigError("eval_every >= 1 olmalı")
        if self.clip_norm is not None and self.clip_norm <= 0:
            raise ConfigError("clip_norm > 0 olmalı")
        return self


# Tam ölçek tarifi: 240 epoch, batch 32
CROHME_SCALE_EPOCHS = 240


def field_names(config_cls):
    return [f.name for f in fields(config_cls)]

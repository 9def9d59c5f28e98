import logging
import os

from config.config_file import apply_overrides, config_to_values, read_key_values, write_key_values
from config.model_params import ModelConfig, field_names
from config.settings import Config
from models.recognizer import BatRecognizer
from numerics.checkpoint import load_checkpoint, save_checkpoint
from slt.vocabulary import Vocabulary
from utils.exceptions import CheckpointCorrupt, ConfigError, NumericsError
from utils.helpers import ensure_directory

VOCABULARY_KEY = "vocabulary"
STATE_PREFIX = "state."


def sidecar_path(checkpoint_path):
    """model.mtck -> model.cfg"""
    return os.path.splitext(checkpoint_path)[0] + os.path.splitext(Config.SIDECAR_NAME)[1]


class ModelLoader:
    """Checkpoint (MTCK) + key=value sidecar okuma/yazma"""

    def __init__(self):
        self.config = Config()
        self.logger = logging.getLogger('model_loader')

    def save_model(self, model, path, extra_arrays=None, state=None):
        """Parametreleri, isteğe bağlı optimizer kayıtlarını ve sidecar'ı yaz"""
        ensure_directory(os.path.dirname(path))
        arrays = model.params.snapshot()
        for name, value in (extra_arrays or {}).items():
            arrays[name] = value
        save_checkpoint(path, arrays)

        values = config_to_values(model.config)
        values[VOCABULARY_KEY] = " ".join(model.vocabulary.tokens)
        for key, value in (state or {}).items():
            values[STATE_PREFIX + key] = value
        write_key_values(sidecar_path(path), values)
        self.logger.info(f"model kaydedildi: {path} ({model.params.count()} parametre)")

    def load_model(self, path):
        """(model, ek diziler, durum sözlüğü) döndür"""
        if not os.path.exists(path):
            self.logger.error(f"checkpoint bulunamadı: {path}")
            raise CheckpointCorrupt(f"checkpoint bulunamadı: {path}")
        values = read_key_values(sidecar_path(path))
        if VOCABULARY_KEY not in values:
            raise ConfigError(f"{sidecar_path(path)}: sözlük satırı eksik")
        vocabulary = Vocabulary(values[VOCABULARY_KEY].split())
        model_values = {k: v for k, v in values.items() if k in field_names(ModelConfig)}
        config = apply_overrides(ModelConfig(), model_values)
        model = BatRecognizer(config, vocabulary)

        arrays = load_checkpoint(path)
        try:
            model.params.load(arrays, strict=True)
        except NumericsError as e:
            self.logger.error(f"parametreler yüklenemedi: {e}")
            raise CheckpointCorrupt(f"{path}: parametreler modelle uyuşmuyor ({e})") from e
        extra = {name: value for name, value in arrays.items() if name not in model.params}
        state = {k[len(STATE_PREFIX):]: v for k, v in values.items() if k.startswith(STATE_PREFIX)}
        self.logger.info(f"model yüklendi: {path}")
        return model, extra, state

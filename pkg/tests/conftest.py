import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from config.model_params import ModelConfig
from slt.vocabulary import Vocabulary

TINY_MODEL = dict(embed_dim=8, hidden_dim=8, attention_dim=8, maxout_proj_dim=8, encoder_channels=4,
                  encoder_stage_channels=(2, 4), coverage_filters=2, max_decode_len=12)


@pytest.fixture
def vocabulary():
    return Vocabulary.build()


@pytest.fixture
def tiny_config():
    return ModelConfig(**TINY_MODEL)


@pytest.fixture
def image():
    img = np.zeros((16, 32))
    img[3:13, 4:12] = 1.0
    img[6:9, 18:28] = 1.0
    return img

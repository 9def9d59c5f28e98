from dataclasses import dataclass

import numpy as np

from numerics.tensor import Tensor, conv2d, reshape, tanh, transpose
from utils.exceptions import ImageTooSmall, ModelError

MIN_IMAGE_SIDE = 16


@dataclass(frozen=True)
class FeatureMap:
    A: Tensor       # [H', W', D]
    flat: Tensor    # [H'*W', D]

    @property
    def height(self):
        return self.A.shape[0]

    @property
    def width(self):
        return self.A.shape[1]

    @property
    def channels(self):
        return self.A.shape[2]


class ConvEncoder:
    """Üç adımlı (stride 2) küçük evrişimli kodlayıcı; uzamsal küçültme x8"""

    def __init__(self, params, prefix, config, rng):
        self.params = params
        self.prefix = prefix
        c1, c2 = config.encoder_stage_channels
        channels = [1, c1, c2, config.encoder_channels]
        for stage in range(3):
            c_in, c_out = channels[stage], channels[stage + 1]
            params.add_weight(f"{prefix}.conv{stage + 1}.w", (c_out, c_in, 3, 3), c_in * 9, rng)
            params.add_bias(f"{prefix}.conv{stage + 1}.b", (c_out,))

    def encode(self, image):
        """Gri tonlu [H, W] görüntüden A özellik haritası üret"""
        image = image if isinstance(image, Tensor) else Tensor(image)
        if image.ndim != 2 or min(image.shape) < MIN_IMAGE_SIDE:
            raise ImageTooSmall(f"görüntü en az {MIN_IMAGE_SIDE}x{MIN_IMAGE_SIDE} olmalı, gelen {image.shape}")
        if np.any(image.data < 0.0) or np.any(image.data > 1.0):
            raise ModelError("piksel değerleri [0, 1] aralığında olmalı")
        x = reshape(image, (1,) + image.shape)
        for stage in range(1, 4):
            x = tanh(conv2d(x, self.params[f"{self.prefix}.conv{stage}.w"],
                            self.params[f"{self.prefix}.conv{stage}.b"], stride=2))
        A = transpose(x, (1, 2, 0))
        h, w, d = A.shape
        return FeatureMap(A=A, flat=reshape(A, (h * w, d)))

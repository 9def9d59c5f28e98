import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from utils.exceptions import DataError


@dataclass
class PreparedSample:
    id: str
    image: np.ndarray
    targets: Dict[str, np.ndarray]


def pad_batch(sequences, pad_id):
    """Farklı uzunluktaki id dizilerini sağdan PAD ile doldur -> [B, T]"""
    if not sequences:
        raise DataError("boş batch doldurulamaz")
    length = max(len(seq) for seq in sequences)
    batch = np.full((len(sequences), length), pad_id, dtype=np.int64)
    for row, seq in enumerate(sequences):
        batch[row, :len(seq)] = seq
    return batch


class DataProcessor:
    """Örnekleri model girdilerine (görüntü + yön başına hedef id'leri) çevirir"""

    def __init__(self, model):
        self.model = model
        self.logger = logging.getLogger('data_processor')

    def prepare_sample(self, sample):
        image = np.asarray(sample.image, dtype=np.float64)
        if image.ndim != 2:
            raise DataError(f"{sample.id}: görüntü 2 boyutlu olmalı")
        return PreparedSample(id=sample.id, image=image, targets=self.model.target_ids(sample.slt))

    def prepare(self, manifest):
        prepared = [self.prepare_sample(sample) for sample in manifest]
        self.logger.debug(f"{len(prepared)} örnek hazırlandı")
        return prepared

    def collate(self, batch):
        """Batch içindeki hedefleri yön başına aynı uzunluğa doldur"""
        pad_id = self.model.vocabulary.pad_id
        directions = batch[0].targets.keys()
        padded = {direction: pad_batch([item.targets[direction] for item in batch], pad_id)
                  for direction in directions}
        return [PreparedSample(item.id, item.image, {d: padded[d][row] for d in directions})
                for row, item in enumerate(batch)]

    def batches(self, prepared, batch_size, seed, epoch):
        """Epoch başına sabit permütasyonla batch'ler; son batch eksik kalabilir"""
        order = np.random.default_rng([seed, epoch]).permutation(len(prepared))
        for start in range(0, len(order), batch_size):
            yield self.collate([prepared[i] for i in order[start:start + batch_size]])

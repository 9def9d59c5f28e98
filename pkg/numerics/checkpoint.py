import struct

import numpy as np

from config.settings import Config
from utils.exceptions import CheckpointCorrupt


def save_checkpoint(path, arrays):
    """MTCK formatında yaz: isim sırası korunur, yük little-endian f32"""
    config = Config()
    with open(path, 'wb') as f:
        f.write(config.CHECKPOINT_MAGIC)
        f.write(struct.pack('<H', config.CHECKPOINT_VERSION))
        for name, value in arrays.items():
            value = np.asarray(value)
            encoded = name.encode('utf-8')
            f.write(struct.pack('<H', len(encoded)))
            f.write(encoded)
            f.write(struct.pack('<B', value.ndim))
            for dim in value.shape:
                f.write(struct.pack('<I', dim))
            f.write(value.astype('<f4').tobytes())


def load_checkpoint(path):
    """MTCK dosyasını isim -> float64 dizi olarak oku"""
    config = Config()
    with open(path, 'rb') as f:
        payload = f.read()
    if payload[:4] != config.CHECKPOINT_MAGIC:
        raise CheckpointCorrupt(f"{path}: MTCK imzası yok")
    if len(payload) < 6:
        raise CheckpointCorrupt(f"{path}: başlık eksik")
    (version,) = struct.unpack_from('<H', payload, 4)
    if version != config.CHECKPOINT_VERSION:
        raise CheckpointCorrupt(f"{path}: desteklenmeyen sürüm {version}")

    arrays = {}
    pos = 6
    try:
        while pos < len(payload):
            (name_len,) = struct.unpack_from('<H', payload, pos)
            pos += 2
            name = payload[pos:pos + name_len].decode('utf-8')
            pos += name_len
            (rank,) = struct.unpack_from('<B', payload, pos)
            pos += 1
            shape = struct.unpack_from('<' + 'I' * rank, payload, pos)
            pos += 4 * rank
            count = int(np.prod(shape)) if rank else 1
            if pos + 4 * count > len(payload):
                raise CheckpointCorrupt(f"{path}: {name} kaydı kesik")
            data = np.frombuffer(payload, dtype='<f4', count=count, offset=pos)
            pos += 4 * count
            arrays[name] = data.reshape(shape).astype(np.float64)
    except (struct.error, UnicodeDecodeError) as e:
        raise CheckpointCorrupt(f"{path}: bozuk kayıt ({e})") from e
    return arrays


def round_to_storage(array):
    """Checkpoint hassasiyetine (f32) yuvarla; f32 kayıt kayıpsız geri okunur"""
    return np.asarray(array, dtype=np.float32).astype(np.float64)

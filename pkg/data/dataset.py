import io
import logging
import os
from dataclasses import dataclass
from typing import List

import numpy as np
import pandas as pd

from config.settings import Config
from slt.latex import parse_latex
from slt.mirror import mirror_flip
from slt.tree import R2L, SymbolLayoutTree
from slt.tuples import decode_tuple_field, encode_tuple_field
from utils.exceptions import DatasetIoError, ManifestCorrupt, RecognitionError
from utils.helpers import ensure_directory

MANIFEST_COLUMNS = ['id', 'image', 'latex', 'slt', 'mfslt']
IMAGE_DIR = "images"


@dataclass(eq=False)
class Sample:
    id: str
    image: np.ndarray
    latex: str
    slt: SymbolLayoutTree
    mfslt: SymbolLayoutTree

    def __eq__(self, other):
        return (isinstance(other, Sample) and self.id == other.id and self.latex == other.latex
                and self.slt == other.slt and self.mfslt == other.mfslt
                and np.array_equal(self.image, other.image))


class DatasetManifest:
    """Örnek listesi (sıra korunur)"""

    def __init__(self, samples):
        self.samples: List[Sample] = list(samples)

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, index):
        return self.samples[index]

    def __eq__(self, other):
        return isinstance(other, DatasetManifest) and self.samples == other.samples

    def subset(self, indices):
        return DatasetManifest(self.samples[int(i)] for i in indices)

    def latex(self):
        return [sample.latex for sample in self.samples]

    def to_frame(self):
        return pd.DataFrame({
            'id': [s.id for s in self.samples],
            'image': [f"{IMAGE_DIR}/{s.id}.pgm" for s in self.samples],
            'latex': [s.latex for s in self.samples],
            'slt': [encode_tuple_field(s.slt) for s in self.samples],
            'mfslt': [encode_tuple_field(s.mfslt) for s in self.samples],
        }, columns=MANIFEST_COLUMNS)


# --- PGM (P5) ---

def quantize(image):
    return np.clip(np.round(np.asarray(image) * 255.0), 0, 255).astype(np.uint8)


def write_pgm(path, image):
    pixels = quantize(image)
    height, width = pixels.shape
    with open(path, 'wb') as f:
        f.write(f"P5\n{width} {height}\n255\n".encode('ascii'))
        f.write(pixels.tobytes())


def read_pgm(path):
    """P5 ikili PGM oku; [0, 1] aralığında float görüntü döner"""
    try:
        with open(path, 'rb') as f:
            payload = f.read()
    except OSError as e:
        raise DatasetIoError(f"görüntü okunamadı: {path} ({e})") from e

    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(payload) and payload[pos:pos + 1].isspace():
            pos += 1
        if payload[pos:pos + 1] == b'#':
            while pos < len(payload) and payload[pos:pos + 1] != b'\n':
                pos += 1
            continue
        start = pos
        while pos < len(payload) and not payload[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise DatasetIoError(f"{path}: PGM başlığı eksik")
        fields.append(payload[start:pos])
    pos += 1

    if fields[0] != b'P5':
        raise DatasetIoError(f"{path}: P5 PGM değil")
    try:
        width, height, maxval = (int(v) for v in fields[1:])
    except ValueError as e:
        raise DatasetIoError(f"{path}: PGM başlığı bozuk") from e
    if maxval != 255:
        raise DatasetIoError(f"{path}: yalnızca maxval=255 destekleniyor")
    data = np.frombuffer(payload, dtype=np.uint8, offset=pos)
    if data.size < width * height:
        raise DatasetIoError(f"{path}: piksel verisi kesik")
    return data[:width * height].reshape(height, width).astype(np.float64) / 255.0


# --- manifest ---

def save_dataset(manifest, path):
    """Görüntüleri PGM, manifest'i UTF-8 TSV olarak yaz"""
    logger = logging.getLogger('dataset')
    try:
        ensure_directory(os.path.join(path, IMAGE_DIR))
        for sample in manifest:
            write_pgm(os.path.join(path, IMAGE_DIR, f"{sample.id}.pgm"), sample.image)
        manifest.to_frame().to_csv(os.path.join(path, Config.MANIFEST_NAME), sep='\t',
                                   index=False, encoding='utf-8', lineterminator='\n')
    except OSError as e:
        logger.error(f"veri kümesi yazılamadı: {e}")
        raise DatasetIoError(f"veri kümesi yazılamadı: {path} ({e})") from e
    logger.info(f"{len(manifest)} örnek kaydedildi: {path}")


def _check_lines(text):
    lines = text.split('\n')
    if lines and lines[-1] == '':
        lines.pop()
    if not lines:
        raise ManifestCorrupt("manifest boş", 1)
    if lines[0].split('\t') != MANIFEST_COLUMNS:
        raise ManifestCorrupt(f"başlık satırı {MANIFEST_COLUMNS} olmalı", 1)
    for number, line in enumerate(lines[1:], start=2):
        if len(line.split('\t')) != len(MANIFEST_COLUMNS):
            raise ManifestCorrupt(f"{len(MANIFEST_COLUMNS)} sütun bekleniyordu", number)


def load_dataset(path):
    """Manifest'i oku; slt/mfslt LaTeX'ten yeniden hesaplanarak doğrulanır"""
    logger = logging.getLogger('dataset')
    manifest_path = os.path.join(path, Config.MANIFEST_NAME)
    if not os.path.isfile(manifest_path):
        logger.error(f"manifest bulunamadı: {manifest_path}")
        raise ManifestCorrupt(f"manifest bulunamadı: {manifest_path}")
    try:
        with open(manifest_path, 'r', encoding='utf-8', newline='') as f:
            text = f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise DatasetIoError(f"manifest okunamadı: {manifest_path} ({e})") from e

    _check_lines(text)
    frame = pd.read_csv(io.StringIO(text), sep='\t', dtype=str, keep_default_na=False)
    samples = []
    for offset, row in enumerate(frame.itertuples(index=False)):
        line = offset + 2
        try:
            slt = decode_tuple_field(row.slt)
            mfslt = decode_tuple_field(row.mfslt, direction_tag=R2L)
            parsed = parse_latex(row.latex)
        except RecognitionError as e:
            raise ManifestCorrupt(f"satır çözümlenemedi: {e}", line) from e
        if parsed != slt:
            raise ManifestCorrupt("slt sütunu LaTeX ile uyuşmuyor", line)
        if mirror_flip(parsed) != mfslt:
            raise ManifestCorrupt("mfslt sütunu mirror_flip(slt) ile uyuşmuyor", line)
        image = read_pgm(os.path.join(path, row.image))
        samples.append(Sample(id=row.id, image=image, latex=row.latex, slt=slt, mfslt=mfslt))
    logger.info(f"{len(samples)} örnek yüklendi: {path}")
    return DatasetManifest(samples)

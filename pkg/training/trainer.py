import logging
import math
import os
import time

import numpy as np
import pandas as pd

from config.config_file import config_to_values
from config.settings import Config
from data.data_processor import DataProcessor
from evaluation.evaluator import predict_trees
from evaluation.metrics import exprate
from models.model_loader import ModelLoader
from numerics.tensor import Tape, backward, scale
from slt.tree import L2R, R2L
from training.optimizer import AdadeltaState, adadelta_step
from training.schedule import lr_schedule
from utils.exceptions import NonFiniteGradient, NonFiniteResult, TrainingAborted, TrainingError
from utils.helpers import ensure_directory

LOSS_COLUMNS = ['loss', 'ce_main_r2l', 'ce_main_l2r', 'ce_lm_r2l', 'ce_lm_l2r']


class TrainLog:
    """Epoch başına kayıtlar; CSV olarak yazılır"""

    def __init__(self, log_wall_time=False):
        self.log_wall_time = log_wall_time
        self.records = []

    @property
    def columns(self):
        columns = ['epoch', 'lr'] + LOSS_COLUMNS + ['exprate']
        return columns + ['wall_time'] if self.log_wall_time else columns

    def append(self, record):
        if self.records and record['epoch'] <= self.records[-1]['epoch']:
            raise TrainingError(f"epoch sırası bozuk: {record['epoch']}")
        for key in LOSS_COLUMNS:
            value = record.get(key)
            if value is not None and not math.isfinite(value):
                raise TrainingError(f"epoch {record['epoch']}: {key} sonlu değil")
        self.records.append(record)

    def to_frame(self):
        return pd.DataFrame([{c: r.get(c) for c in self.columns} for r in self.records], columns=self.columns)

    def save(self, path):
        self.to_frame().to_csv(path, index=False, lineterminator='\n')

    @classmethod
    def load(cls, path, upto_epoch=None, log_wall_time=False):
        log = cls(log_wall_time)
        if not os.path.exists(path):
            return log
        frame = pd.read_csv(path, float_precision='round_trip')
        for row in frame.to_dict('records'):
            if upto_epoch is not None and row['epoch'] > upto_epoch:
                break
            row['epoch'] = int(row['epoch'])
            log.records.append({k: (None if isinstance(v, float) and math.isnan(v) else v)
                                for k, v in row.items()})
        return log


class Trainer:
    """Adadelta + kosinüs takvimiyle BAT/SLM eğitimi; kaldığı yerden devam edebilir"""

    def __init__(self, model, train_config, out_dir=None, eval_manifest=None):
        self.model = model
        self.config = train_config.validate()
        self.out_dir = out_dir
        self.eval_manifest = eval_manifest
        self.logger = logging.getLogger('trainer')
        self.processor = DataProcessor(model)
        self.loader = ModelLoader()
        self.state = AdadeltaState(model.params)
        self.start_epoch = 0
        self.log = TrainLog(train_config.log_wall_time)

    @property
    def checkpoint_path(self):
        return os.path.join(self.out_dir, Config.CHECKPOINT_NAME)

    @property
    def log_path(self):
        return os.path.join(self.out_dir, Config.TRAIN_LOG_NAME)

    @classmethod
    def from_checkpoint(cls, checkpoint_path, train_config, out_dir=None, eval_manifest=None):
        """Checkpoint'ten model, optimizer durumu ve TrainLog'u geri yükle"""
        loader = ModelLoader()
        model, extra, state = loader.load_model(checkpoint_path)
        out_dir = out_dir or os.path.dirname(checkpoint_path)
        trainer = cls(model, train_config, out_dir, eval_manifest)
        trainer.state = AdadeltaState.from_arrays(model.params, extra)
        last_epoch = int(state.get('epoch', -1))
        trainer.start_epoch = last_epoch + 1
        trainer.log = TrainLog.load(os.path.join(os.path.dirname(checkpoint_path), Config.TRAIN_LOG_NAME),
                                    upto_epoch=last_epoch, log_wall_time=train_config.log_wall_time)
        trainer.logger.info(f"eğitim epoch {trainer.start_epoch} noktasından devam ediyor")
        return trainer

    def train_step(self, batch, lr):
        """Batch ortalama kaybı için bir Adadelta adımı; (kayıp, parça kayıplar) döner"""
        parts = {key: 0.0 for key in LOSS_COLUMNS[1:]}
        with Tape() as tape:
            try:
                total = None
                for item in batch:
                    loss, diagnostics = self.model.bat_forward(item.image, targets=item.targets)
                    total = loss if total is None else total + loss
                    for direction, suffix in ((R2L, 'r2l'), (L2R, 'l2r')):
                        result = diagnostics.get(direction)
                        if result is None:
                            continue
                        parts[f'ce_main_{suffix}'] += result.ce_main.item() / len(batch)
                        if result.ce_lm is not None:
                            parts[f'ce_lm_{suffix}'] += result.ce_lm.item() / len(batch)
                batch_loss = scale(total, 1.0 / len(batch))
            except NonFiniteResult as e:
                ids = [item.id for item in batch]
                self.logger.error(f"NaN/Inf kayıp, batch: {ids} ({e})")
                raise TrainingAborted("sonlu olmayan kayıp", ids) from e

        grads = backward(tape, batch_loss, self.model.params)
        try:
            adadelta_step(self.model.params, grads, self.state, lr, self.config.rho,
                          self.config.eps, self.config.clip_norm)
        except NonFiniteGradient as e:
            self.logger.warning(f"adım atlandı: {e}")
        return batch_loss.item(), parts

    def evaluate(self, manifest):
        predictions, _ = predict_trees(self.model, manifest)
        return exprate(predictions, [sample.slt for sample in manifest])

    def save(self, epoch):
        if self.out_dir is None:
            return
        ensure_directory(self.out_dir)
        state = {'epoch': epoch}
        state.update({f'train.{k}': v for k, v in config_to_values(self.config).items()})
        self.loader.save_model(self.model, self.checkpoint_path, self.state.to_arrays(), state)
        self.log.save(self.log_path)

    def train(self, manifest):
        """Tüm epoch'ları çalıştır; TrainLog döner"""
        if len(manifest) == 0:
            raise TrainingError("boş veri kümesiyle eğitim yapılamaz")
        prepared = self.processor.prepare(manifest)
        epochs = self.config.epochs
        steps = -(-len(prepared) // self.config.batch_size)
        eval_manifest = self.eval_manifest if self.eval_manifest is not None else manifest

        for epoch in range(self.start_epoch, epochs):
            started = time.perf_counter()
            losses = []
            totals = {key: 0.0 for key in LOSS_COLUMNS[1:]}
            lr = lr_schedule(epoch, epochs, self.config.lr_peak)
            for step, batch in enumerate(self.processor.batches(prepared, self.config.batch_size,
                                                                self.config.seed, epoch)):
                lr = lr_schedule(epoch, epochs, self.config.lr_peak, step, steps)
                loss, parts = self.train_step(batch, lr)
                losses.append(loss)
                for key, value in parts.items():
                    totals[key] += value / steps
                self.logger.debug(f"epoch {epoch} adım {step}: loss {loss:.6f} lr {lr:.6f}")

            last = epoch == epochs - 1
            checkpoint = last or (epoch + 1) % self.config.eval_every == 0
            record = {'epoch': epoch, 'lr': lr, 'loss': float(np.mean(losses)), **totals,
                      'exprate': self.evaluate(eval_manifest) if checkpoint else None}
            elapsed = time.perf_counter() - started
            if self.config.log_wall_time:
                record['wall_time'] = elapsed
            self.log.append(record)
            self.logger.info(f"epoch {epoch + 1}/{epochs}: loss {record['loss']:.6f}, "
                             f"lr {lr:.6f}, {elapsed:.1f}s")
            if checkpoint:
                self.save(epoch)
        return self.log


def train(model, train_config, manifest, out_dir=None, eval_manifest=None):
    return Trainer(model, train_config, out_dir, eval_manifest).train(manifest)

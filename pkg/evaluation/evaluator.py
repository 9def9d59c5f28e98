import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List

import pandas as pd

from evaluation.metrics import exprate, prefix_suffix_accuracy, short_gold_count
from slt.tree import SymbolLayoutTree
from utils.exceptions import DecodeFailed, EvaluationInvariantError
from utils.helpers import format_fraction, to_json

PREFIX_SUFFIX_N = (2, 5)


@dataclass
class EvalReport:
    exprate: float
    prefix_acc: Dict[int, float]
    suffix_acc: Dict[int, float]
    short_gold: Dict[int, int]
    symbol_subtask_acc: float
    structure_subtask_acc: float
    verdicts: List[dict] = field(default_factory=list)

    def to_dict(self):
        data = asdict(self)
        for key in ('prefix_acc', 'suffix_acc', 'short_gold'):
            data[key] = {str(n): value for n, value in data[key].items()}
        return data


def report_to_json(report):
    """Sabit anahtar sırasıyla JSON"""
    return to_json(report.to_dict())


def report_table(report):
    """İnsan okunur özet tablo (pandas)"""
    rows = [('ExpRate', format_fraction(report.exprate))]
    for n in sorted(report.prefix_acc):
        rows.append((f'prefix-{n}', format_fraction(report.prefix_acc[n])))
        rows.append((f'suffix-{n}', format_fraction(report.suffix_acc[n])))
    rows.append(('symbol sub-task', format_fraction(report.symbol_subtask_acc)))
    rows.append(('structure sub-task', format_fraction(report.structure_subtask_acc)))
    frame = pd.DataFrame(rows, columns=['metric', 'value'])
    return frame.to_string(index=False)


def predict_trees(model, manifest):
    """Greedy çıkarım; boş çözüm boş ağaç olarak sayılır"""
    logger = logging.getLogger('evaluator')
    trees, latex = [], []
    for sample in manifest:
        try:
            result = model.greedy_infer(sample.image)
        except DecodeFailed as e:
            logger.debug(f"{sample.id}: {e}")
            trees.append(SymbolLayoutTree.empty())
            latex.append("")
            continue
        trees.append(result.slt)
        latex.append(result.latex)
    return trees, latex


def subtask_accuracy(model, manifest, mode):
    """Verilen token sınıfı gold'a zorlanarak ExpRate"""
    predictions = [model.forced_decode(sample.image, sample.slt, mode) for sample in manifest]
    return exprate(predictions, [sample.slt for sample in manifest])


class Evaluator:
    def __init__(self, ns=PREFIX_SUFFIX_N):
        self.ns = tuple(ns)
        self.logger = logging.getLogger('evaluator')

    def evaluate(self, model, manifest):
        """EvalReport üret; ExpRate <= alt görev doğrulukları kontrol edilir"""
        golds = [sample.slt for sample in manifest]
        predictions, latex = predict_trees(model, manifest)
        rate = exprate(predictions, golds)

        prefix_acc, suffix_acc, short = {}, {}, {}
        for n in self.ns:
            prefix_acc[n], suffix_acc[n] = prefix_suffix_accuracy(predictions, golds, n)
            short[n] = short_gold_count(golds, n)

        symbol_acc = subtask_accuracy(model, manifest, 'relations_given')
        structure_acc = subtask_accuracy(model, manifest, 'symbols_given')
        if rate > symbol_acc or rate > structure_acc:
            self.logger.error(f"ExpRate {rate} alt görev doğruluğunu aşıyor ({symbol_acc}, {structure_acc})")
            raise EvaluationInvariantError("ExpRate alt görev doğruluklarından büyük olamaz")

        verdicts = [{'id': sample.id, 'correct': (not pred.is_empty and pred == sample.slt),
                     'latex': sample.latex, 'predicted': text}
                    for sample, pred, text in zip(manifest, predictions, latex)]
        self.logger.info(f"değerlendirme: {len(golds)} örnek, ExpRate {format_fraction(rate)}")
        return EvalReport(exprate=rate, prefix_acc=prefix_acc, suffix_acc=suffix_acc, short_gold=short,
                          symbol_subtask_acc=symbol_acc, structure_subtask_acc=structure_acc,
                          verdicts=verdicts)

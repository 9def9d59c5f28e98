import logging
import math
from dataclasses import replace

import pandas as pd
from sklearn.model_selection import train_test_split

from config.grammar_params import GrammarConfig, NoiseConfig
from config.model_params import (ABLATION_CONFIG1, ABLATION_CONFIG2, MFSLT, SLT, ModelConfig,
                                 TrainConfig)
from data.grammar import gen_corpus
from evaluation.evaluator import predict_trees
from evaluation.metrics import exprate, prefix_suffix_accuracy
from models.recognizer import BatRecognizer
from slt.vocabulary import Vocabulary
from training.trainer import Trainer
from utils.exceptions import ConfigError, TrendGateFailed

UNI = dict(use_bat=False, use_slm=False)

# mod -> [(varyant adı, ModelConfig güncellemeleri)]
EXPERIMENTS = {
    'config1': [('baseline', UNI), ('config1', dict(UNI, ablation=ABLATION_CONFIG1))],
    'config2': [('baseline', UNI), ('config2', dict(UNI, ablation=ABLATION_CONFIG2))],
    'slm-sweep': [('Uni', UNI), ('Uni-SLM', dict(use_bat=False, use_slm=True))],
    'bidirectional': [
        ('Uni', UNI),
        ('No-interaction', dict(use_bat=True, use_slm=False, interaction=False)),
        ('BAT', dict(use_bat=True, use_slm=False)),
        ('BAT-SLM', dict(use_bat=True, use_slm=True)),
    ],
    'prefix-suffix': [
        ('L2R', dict(UNI, uni_direction='L2R')),
        ('R2L', dict(UNI, uni_direction='R2L')),
        ('BAT', dict(use_bat=True, use_slm=False)),
    ],
    'uat': [
        ('SLT-first-pass', dict(use_bat=True, use_slm=True, first_pass_label=SLT)),
        ('MFSLT-first-pass', dict(use_bat=True, use_slm=True, first_pass_label=MFSLT)),
    ],
}
PREFIX_SUFFIX_N = (2, 5)
# BAT >= Uni - 1 puan, BAT-SLM >= BAT - 1 puan
TREND_TOLERANCE = 0.01


class ExperimentRunner:
    """Veri hacmi x tohum x varyant ızgarasında eğit + ExpRate ölç"""

    def __init__(self, mode, model_config=None, train_config=None, grammar_config=None,
                 noise=None, test_count=100):
        if mode not in EXPERIMENTS:
            raise ConfigError(f"bilinmeyen deney modu: {mode}")
        self.mode = mode
        self.model_config = model_config or ModelConfig()
        self.train_config = train_config or TrainConfig()
        self.grammar_config = grammar_config or GrammarConfig()
        self.noise = noise or NoiseConfig()
        self.test_count = test_count
        self.logger = logging.getLogger('ablation')

    def split(self, volume, seed):
        """volume + test_count örnek üret, sklearn ile train/test böl"""
        grammar = replace(self.grammar_config, seed=seed)
        corpus = gen_corpus(grammar, volume + self.test_count, self.noise)
        train_idx, test_idx = train_test_split(list(range(len(corpus))), test_size=self.test_count,
                                               random_state=seed, shuffle=True)
        return corpus.subset(sorted(train_idx)), corpus.subset(sorted(test_idx))

    def run_variant(self, name, updates, train_set, test_set, seed):
        vocabulary = Vocabulary.build(self.grammar_config.symbols)
        config = replace(self.model_config, vocab_size=len(vocabulary), seed=seed, **updates)
        model = BatRecognizer(config, vocabulary)
        Trainer(model, replace(self.train_config, seed=seed), eval_manifest=test_set).train(train_set)
        predictions, _ = predict_trees(model, test_set)
        golds = [sample.slt for sample in test_set]
        row = {'variant': name, 'exprate': exprate(predictions, golds)}
        if self.mode == 'prefix-suffix':
            for n in PREFIX_SUFFIX_N:
                row[f'prefix{n}'], row[f'suffix{n}'] = prefix_suffix_accuracy(predictions, golds, n)
        return row

    def run(self, volumes, seeds):
        rows = []
        for volume in volumes:
            for seed in seeds:
                train_set, test_set = self.split(volume, seed)
                for name, updates in EXPERIMENTS[self.mode]:
                    row = self.run_variant(name, updates, train_set, test_set, seed)
                    rows.append({'volume': volume, 'seed': seed, **row})
                    self.logger.info(f"{self.mode} hacim={volume} seed={seed} {name}: "
                                     f"ExpRate {row['exprate']:.4f}")
        columns = ['volume', 'variant', 'seed', 'exprate']
        if self.mode == 'prefix-suffix':
            columns += [f'{kind}{n}' for n in PREFIX_SUFFIX_N for kind in ('prefix', 'suffix')]
        return pd.DataFrame(rows, columns=columns)


def to_csv_text(frame):
    return frame.to_csv(index=False, lineterminator='\n')


def _mean_exprate(frame):
    return frame.groupby('variant')['exprate'].mean()


def _bidirectional_checks(frame):
    means = _mean_exprate(frame)
    rows = []
    for better, worse in (('BAT', 'Uni'), ('BAT-SLM', 'BAT')):
        gap = means[better] - means[worse]
        rows.append({'check': f'{better} >= {worse} - 1pt', 'passed': bool(gap >= -TREND_TOLERANCE),
                     'detail': f'{means[better]:.4f} vs {means[worse]:.4f} (fark {gap:+.4f})'})
    return rows


def _prefix_suffix_checks(frame):
    wins = 0
    runs = frame.groupby(['volume', 'seed'])
    for _, run in runs:
        by_variant = run.set_index('variant')
        l2r, r2l = by_variant.loc['L2R'], by_variant.loc['R2L']
        if r2l['suffix2'] > l2r['suffix2'] and l2r['prefix2'] > r2l['prefix2']:
            wins += 1
    required = math.ceil(2 * runs.ngroups / 3)
    return [{'check': 'R2L suffix2 > L2R ve L2R prefix2 > R2L', 'passed': wins >= required,
             'detail': f'{wins}/{runs.ngroups} koşu (gereken {required})'}]


def _config2_checks(frame):
    volumes = sorted(frame['volume'].unique())
    if len(volumes) < 2:
        return [{'check': 'config2 farkı hacimle büyür', 'passed': False,
                 'detail': 'en az iki veri hacmi gerekli'}]
    gaps = {}
    for volume in (volumes[0], volumes[-1]):
        means = _mean_exprate(frame[frame['volume'] == volume])
        gaps[volume] = means['baseline'] - means['config2']
    small, large = gaps[volumes[0]], gaps[volumes[-1]]
    return [{'check': 'config2 farkı hacimle büyür', 'passed': bool(large > small),
             'detail': f'{volumes[0]}: {small:+.4f}, {volumes[-1]}: {large:+.4f}'}]


def _uat_checks(frame):
    counts = frame.groupby(['volume', 'seed'])['variant'].nunique()
    complete = bool((counts == len(EXPERIMENTS['uat'])).all()) and bool(frame['exprate'].notna().all())
    means = _mean_exprate(frame)
    detail = ', '.join(f'{name} {means[name]:.4f}' for name, _ in EXPERIMENTS['uat'] if name in means)
    return [{'check': 'SLT ve MF-SLT ilk geçiş ayrı raporlandı', 'passed': complete, 'detail': detail}]


TREND_CHECKS = {
    'bidirectional': _bidirectional_checks,
    'prefix-suffix': _prefix_suffix_checks,
    'config2': _config2_checks,
    'uat': _uat_checks,
}


def trend_checks(mode, frame):
    """Deney tablosundan yön (büyüklük değil) kontrolleri; kapısı olmayan modlar boş tablo döner"""
    rows = TREND_CHECKS[mode](frame) if mode in TREND_CHECKS else []
    return pd.DataFrame(rows, columns=['check', 'passed', 'detail'])


def enforce_trends(mode, frame):
    """Başarısız kontrol varsa logla ve TrendGateFailed yükselt"""
    logger = logging.getLogger('ablation')
    checks = trend_checks(mode, frame)
    for check in checks.itertuples():
        level = logging.INFO if check.passed else logging.WARNING
        logger.log(level, f"{mode} eğilim kontrolü '{check.check}': "
                          f"{'geçti' if check.passed else 'kaldı'} ({check.detail})")
    failed = checks[~checks['passed'].astype(bool)]
    if len(failed):
        raise TrendGateFailed(f"{mode}: {len(failed)} eğilim kontrolü kaldı: " + "; ".join(failed['check']))
    return checks

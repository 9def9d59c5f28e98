import argparse
import os
import sys

from config.config_file import apply_overrides, read_key_values
from config.grammar_params import AtlasConfig, GrammarConfig, NoiseConfig, PRODUCTIONS
from config.model_params import ModelConfig, TrainConfig, field_names
from config.settings import Config
from data.dataset import load_dataset, read_pgm, save_dataset
from data.glyphs import GlyphAtlas
from data.grammar import gen_corpus
from evaluation.ablation import EXPERIMENTS, ExperimentRunner, enforce_trends, to_csv_text
from evaluation.evaluator import Evaluator, report_table, report_to_json
from models.model_loader import ModelLoader
from models.recognizer import BatRecognizer
from slt.latex import parse_latex
from slt.mirror import mirror_flip
from slt.tuples import dump_tuples, load_tuples
from slt.vocabulary import Vocabulary
from training.trainer import Trainer
from utils.exceptions import ConfigError, DatasetIoError, RecognitionError
from utils.helpers import parse_csv_list, parse_volume
from utils.logger import setup_logger


def _read_text(path):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        raise DatasetIoError(f"dosya okunamadı: {path} ({e})") from e


def _parse_weights(text):
    weights = dict(GrammarConfig().weights)
    for item in parse_csv_list(text):
        if '=' not in item:
            raise ConfigError(f"ağırlık 'ad=değer' biçiminde olmalı: {item!r}")
        key, value = item.split('=', 1)
        if key not in PRODUCTIONS:
            raise ConfigError(f"bilinmeyen üretim: {key}")
        try:
            weights[key] = float(value)
        except ValueError as e:
            raise ConfigError(f"ağırlık sayı olmalı: {item!r}") from e
    return weights


# --- komutlar ---

def cmd_parse(args, out):
    out.write(dump_tuples(parse_latex(args.latex)) + "\n")


def cmd_flip(args, out):
    if args.tuples:
        tree = load_tuples(_read_text(args.tuples))
    elif args.latex is not None:
        tree = parse_latex(args.latex)
    else:
        raise ConfigError("flip için LATEX ya da --tuples FILE gerekli")
    out.write(dump_tuples(mirror_flip(tree)) + "\n")


def cmd_lint(args, out):
    path = os.path.dirname(args.path) if os.path.isfile(args.path) else args.path
    manifest = load_dataset(path)
    out.write(f"ok\t{len(manifest)}\n")


def cmd_gen(args, out):
    grammar = GrammarConfig(seed=args.seed, max_depth=args.max_depth, max_chain=args.max_chain)
    if args.weights:
        grammar.weights = _parse_weights(args.weights)
    noise = NoiseConfig(salt_pepper_p=args.noise_p, jitter_px=args.jitter)
    atlas = GlyphAtlas.build(grammar.symbols, AtlasConfig(ambiguity_k=args.ambiguity_k))
    manifest = gen_corpus(grammar, args.count, noise, atlas)
    save_dataset(manifest, args.out)
    out.write(f"{len(manifest)}\t{args.out}\n")


def _train_configs(args):
    model_config, train_config = ModelConfig(), TrainConfig()
    if args.config:
        values = read_key_values(args.config)
        model_values, train_values = {}, {}
        for key, value in values.items():
            scope, _, name = key.rpartition('.')
            matched = False
            if scope in ('', 'model') and name in field_names(ModelConfig):
                model_values[name] = value
                matched = True
            if scope in ('', 'train') and name in field_names(TrainConfig):
                train_values[name] = value
                matched = True
            if not matched:
                raise ConfigError(f"bilinmeyen yapılandırma anahtarı: {key}")
        model_config = apply_overrides(model_config, model_values)
        train_config = apply_overrides(train_config, train_values)

    flags = {name: getattr(args, name) for name in
             ('epochs', 'batch_size', 'lr_peak', 'rho', 'eps', 'seed', 'eval_every', 'clip_norm')
             if getattr(args, name) is not None}
    train_config = apply_overrides(train_config, flags)
    return model_config, train_config


def cmd_train(args, out):
    model_config, train_config = _train_configs(args)
    manifest = load_dataset(args.data)
    eval_manifest = load_dataset(args.eval_data) if args.eval_data else None
    checkpoint = os.path.join(args.out, Config.CHECKPOINT_NAME)
    if args.resume and os.path.exists(checkpoint):
        trainer = Trainer.from_checkpoint(checkpoint, train_config, args.out, eval_manifest)
    else:
        symbols = list(GrammarConfig().symbols)
        for sample in manifest:
            symbols += [s for s in sample.slt.symbols() if s not in symbols]
        vocabulary = Vocabulary.build(symbols)
        model = BatRecognizer(model_config, vocabulary)
        trainer = Trainer(model, train_config, args.out, eval_manifest)
    log = trainer.train(manifest)
    out.write(log.to_frame().to_csv(index=False, lineterminator='\n'))


def cmd_eval(args, out):
    model, _, _ = ModelLoader().load_model(args.ckpt)
    report = Evaluator().evaluate(model, load_dataset(args.data))
    if args.format in ('json', 'both'):
        out.write(report_to_json(report) + "\n")
    if args.format in ('table', 'both'):
        out.write(report_table(report) + "\n")


def cmd_infer(args, out):
    model, _, _ = ModelLoader().load_model(args.ckpt)
    result = model.greedy_infer(read_pgm(args.image))
    out.write(f"latex\t{result.latex}\n")
    out.write(f"r2l\t{' '.join(result.r2l_tokens.tokens)}\n")
    out.write(f"final\t{' '.join(result.final_tokens.tokens)}\n")


def cmd_ablate(args, out):
    model_config = ModelConfig(hidden_dim=args.hidden_dim, embed_dim=args.hidden_dim)
    train_config = TrainConfig(epochs=args.epochs, batch_size=args.batch_size)
    runner = ExperimentRunner(args.mode, model_config, train_config, test_count=args.test_count)
    frame = runner.run(args.volumes, args.seeds)
    text = to_csv_text(frame)
    if args.out:
        with open(args.out, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    out.write(text)
    if args.gate:
        enforce_trends(args.mode, frame)


def _volume_list(text):
    try:
        return parse_csv_list(text, parse_volume)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"geçersiz veri hacmi listesi: {text!r}") from e


def _seed_list(text):
    try:
        return parse_csv_list(text, int)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"geçersiz tohum listesi: {text!r}") from e


def build_parser():
    parser = argparse.ArgumentParser(prog='main.py', description="Matematik ifadesi tanıma hattı",
                                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--log-level', default=Config.LOG_LEVEL, help="log seviyesi")
    common.add_argument('--log-file', default=None, help="isteğe bağlı log dosyası")
    sub = parser.add_subparsers(dest='command', required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text,
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        p.set_defaults(handler=handler)
        return p

    p = add('parse', cmd_parse, "LaTeX -> SLT tuple satırları")
    p.add_argument('latex', help="desteklenen alt kümede LaTeX ifadesi")

    p = add('flip', cmd_flip, "MF-SLT tuple satırları")
    p.add_argument('latex', nargs='?', default=None, help="LaTeX ifadesi (--tuples verilmezse)")
    p.add_argument('--tuples', default=None, help="tuple dosyası")

    p = add('lint', cmd_lint, "manifest doğrula")
    p.add_argument('path', help="veri dizini ya da manifest dosyası")

    grammar = GrammarConfig()
    p = add('gen', cmd_gen, "sentetik veri kümesi üret")
    p.add_argument('--seed', type=int, default=grammar.seed, help="üretim tohumu")
    p.add_argument('--count', type=int, required=True, help="örnek sayısı")
    p.add_argument('--out', required=True, help="çıktı dizini")
    p.add_argument('--max-depth', type=int, default=grammar.max_depth, help="en fazla iç içe derinlik")
    p.add_argument('--max-chain', type=int, default=grammar.max_chain, help="en uzun Forward zinciri")
    p.add_argument('--weights', default=None, help="üretim ağırlıkları, ör. atom=6,sup=1,chain_extend=1.5")
    p.add_argument('--noise-p', type=float, default=0.0, help="salt-pepper olasılığı")
    p.add_argument('--jitter', type=int, default=0, help="glif başına en fazla kayma (piksel)")
    p.add_argument('--ambiguity-k', type=int, default=AtlasConfig().ambiguity_k,
                   help="belirsiz glif çiftleri arasındaki en fazla piksel farkı")

    p = add('train', cmd_train, "modeli eğit (boş bırakılan bayraklar yapılandırmadan gelir)")
    p.add_argument('--data', required=True, help="eğitim veri dizini")
    p.add_argument('--config', default=None, help="key=value yapılandırma dosyası")
    p.add_argument('--out', required=True, help="checkpoint ve log dizini")
    p.add_argument('--eval-data', default=None, help="ara değerlendirme veri dizini")
    p.add_argument('--epochs', type=int, default=None, help="epoch sayısı")
    p.add_argument('--batch-size', type=int, default=None, help="batch boyutu")
    p.add_argument('--lr-peak', type=float, default=None, help="tepe öğrenme oranı")
    p.add_argument('--rho', type=float, default=None, help="Adadelta rho")
    p.add_argument('--eps', type=float, default=None, help="Adadelta epsilon")
    p.add_argument('--seed', type=int, default=None, help="karıştırma ve başlatma tohumu")
    p.add_argument('--eval-every', type=int, default=None, help="kaç epoch'ta bir değerlendirme")
    p.add_argument('--clip-norm', type=float, default=None, help="gradyan norm kırpma eşiği")
    p.add_argument('--resume', action='store_true', help="--out içindeki checkpoint'ten devam et")

    p = add('eval', cmd_eval, "checkpoint'i değerlendir")
    p.add_argument('--ckpt', required=True, help="checkpoint dosyası")
    p.add_argument('--data', required=True, help="test veri dizini")
    p.add_argument('--format', choices=['json', 'table', 'both'], default='both', help="rapor biçimi")

    p = add('infer', cmd_infer, "tek görüntüden LaTeX çıkar")
    p.add_argument('--ckpt', required=True, help="checkpoint dosyası")
    p.add_argument('--image', required=True, help="P5 PGM görüntü")

    p = add('ablate', cmd_ablate, "katkı deneyleri (CSV)")
    p.add_argument('--mode', choices=sorted(EXPERIMENTS), required=True, help="deney")
    p.add_argument('--volumes', type=_volume_list, default='1k,5k,20k', help="eğitim veri hacimleri")
    p.add_argument('--seeds', type=_seed_list, default='0', help="tohum listesi")
    p.add_argument('--test-count', type=int, default=500, help="test örneği sayısı")
    p.add_argument('--epochs', type=int, default=TrainConfig().epochs, help="epoch sayısı")
    p.add_argument('--batch-size', type=int, default=TrainConfig().batch_size, help="batch boyutu")
    p.add_argument('--hidden-dim', type=int, default=ModelConfig().hidden_dim, help="gizli durum boyutu")
    p.add_argument('--out', default=None, help="CSV dosyası")
    p.add_argument('--gate', action='store_true',
                   help="eğilim kontrollerinden biri kalırsa çıkış kodu 1 (bidirectional, prefix-suffix, config2, uat)")
    return parser


def main(argv=None, out=None):
    """Komutu çalıştır; çıkış kodu döner (0 başarı, 1 domain hatası, 2 kullanım hatası)"""
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    setup_logger('', args.log_file, args.log_level)
    try:
        args.handler(args, out)
    except RecognitionError as e:
        sys.stderr.write(f"{type(e).__name__}: {e}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

import logging
from dataclasses import dataclass, replace

import numpy as np

from config.model_params import MFSLT
from models.decoder import Decoder, R2LContext
from models.encoder import ConvEncoder
from numerics.parameters import ParameterSet
from numerics.tensor import Tensor, scale
from slt.latex import slt_to_latex
from slt.mirror import mirror_flip
from slt.sequence import BRACKETED_SLT, LATEX_SEQ, TokenSequence, delinearize, linearize
from slt.tree import L2R, R2L
from utils.exceptions import ConfigError, DecodeFailed, EvaluationError, InvalidTree

FORCING_MODES = ('symbols_given', 'relations_given', 'all')


@dataclass(frozen=True)
class InferenceResult:
    latex: str
    slt: object
    r2l_tokens: TokenSequence
    final_tokens: TokenSequence


class BatRecognizer:
    """Ortak kodlayıcı + R2L/L2R decoder dalları (BAT), isteğe bağlı SLM ikizleri"""

    def __init__(self, config, vocabulary):
        self.logger = logging.getLogger('recognizer')
        if config.vocab_size == 0:
            config = replace(config, vocab_size=len(vocabulary))
        if config.vocab_size != len(vocabulary):
            raise ConfigError(f"vocab_size {config.vocab_size} != sözlük boyutu {len(vocabulary)}")
        self.config = config.validate()
        self.vocabulary = vocabulary
        self.kind = config.target_kind

        rng = np.random.default_rng(config.seed)
        self.params = ParameterSet()
        self.encoder = ConvEncoder(self.params, 'encoder', config, rng)
        self.r2l = self.l2r = None
        if config.use_bat:
            self.r2l = Decoder(self.params, 'r2l', config, vocabulary, rng, with_ham=False)
            self.l2r = Decoder(self.params, 'l2r', config, vocabulary, rng, with_ham=config.interaction)
        elif config.uni_direction == R2L:
            self.r2l = Decoder(self.params, 'r2l', config, vocabulary, rng, with_ham=False)
        else:
            self.l2r = Decoder(self.params, 'l2r', config, vocabulary, rng, with_ham=False)
        self.logger.debug(f"model kuruldu: {self.params.count()} parametre")

    @property
    def final_direction(self):
        return L2R if self.l2r is not None else R2L

    def encode(self, image):
        return self.encoder.encode(image if isinstance(image, Tensor) else Tensor(image))

    # --- hedefler ---

    def target_sequences(self, slt_target):
        """Yön -> TokenSequence hedefleri"""
        if self.kind == LATEX_SEQ:
            forward = linearize(slt_target, LATEX_SEQ)
            backward = forward.reversed()
        else:
            forward = linearize(slt_target, BRACKETED_SLT)
            backward = linearize(mirror_flip(slt_target), BRACKETED_SLT)
        if self.config.use_bat and self.config.first_pass_label != MFSLT:
            backward = forward
        targets = {}
        if self.r2l is not None:
            targets[R2L] = backward
        if self.l2r is not None:
            targets[L2R] = forward
        return targets

    def target_ids(self, slt_target):
        return {direction: self.vocabulary.encode(seq) for direction, seq in self.target_sequences(slt_target).items()}

    # --- eğitim ---

    def _branch_loss(self, result):
        if result.ce_lm is None:
            return result.ce_main
        return scale(result.ce_main, self.config.lambda1) + scale(result.ce_lm, self.config.lambda2)

    def bat_forward(self, image, slt_target=None, targets=None):
        """Tek örnek kaybı; targets önceden hesaplanmış (dolgulu olabilir) id dizileri"""
        if targets is None:
            targets = self.target_ids(slt_target)
        feature_map = self.encode(image)
        diagnostics = {}
        loss = None
        context = None
        if self.r2l is not None:
            result = self.r2l.decode_sequence(feature_map, target=targets[R2L])
            diagnostics[R2L] = result
            loss = self._branch_loss(result)
            if self.l2r is not None and self.l2r.with_ham:
                context = R2LContext(result.context_rows(), self._to_sequence(result.tokens[:result.valid_steps]))
        if self.l2r is not None:
            result = self.l2r.decode_sequence(feature_map, target=targets[L2R], context=context)
            diagnostics[L2R] = result
            branch = self._branch_loss(result)
            loss = branch if loss is None else loss + branch
        return loss, diagnostics

    # --- çıkarım ---

    def _to_sequence(self, token_ids):
        ids = [self.vocabulary.sos_id] + [int(t) for t in token_ids]
        return self.vocabulary.decode(ids, self.kind)

    def tokens_to_tree(self, token_ids, direction):
        """Çözülen token'lardan (best effort) L2R ağacı kur"""
        sequence = self._to_sequence(token_ids)
        if direction == L2R:
            return delinearize(sequence, best_effort=True)
        if self.kind == LATEX_SEQ:
            return delinearize(sequence.reversed(), best_effort=True)
        tree = delinearize(sequence, best_effort=True, direction_tag=R2L)
        return tree if tree.is_empty else mirror_flip(tree)

    def _run(self, image, chooser=None):
        feature_map = self.encode(image)
        r2l_tokens = TokenSequence((), self.kind)
        context = None
        first = None
        if self.r2l is not None:
            first = self.r2l.decode_sequence(
                feature_map, chooser=chooser if self.l2r is None else None)
            r2l_tokens = self._to_sequence(first.tokens)
            if self.l2r is not None and self.l2r.with_ham:
                context = R2LContext(first.context_rows(), r2l_tokens)
        if self.l2r is None:
            return first, r2l_tokens
        final = self.l2r.decode_sequence(feature_map, context=context, chooser=chooser)
        return final, r2l_tokens

    def greedy_infer(self, image):
        """Greedy R2L geçişi, ardından HAM ile greedy L2R geçişi"""
        result, r2l_tokens = self._run(image)
        tree = self.tokens_to_tree(result.tokens, self.final_direction)
        if tree.is_empty:
            raise DecodeFailed("çözülen dizi hiç sembol içermiyor")
        try:
            latex = slt_to_latex(tree)
        except InvalidTree as e:
            self.logger.warning(f"çözülen ağaç LaTeX ile yazılamıyor: {e}")
            latex = ""
        if not self.config.use_bat:
            r2l_tokens = TokenSequence((), self.kind)
        return InferenceResult(latex=latex, slt=tree, r2l_tokens=r2l_tokens,
                               final_tokens=self._to_sequence(result.tokens))

    def forced_decode(self, image, slt_target, mode):
        """Alt görev zorlaması: ilk geçiş serbest, son geçişte verilen sınıf altın token'ı yazar"""
        if mode not in FORCING_MODES:
            raise EvaluationError(f"bilinmeyen zorlama modu: {mode}")
        gold = self.target_ids(slt_target)[self.final_direction][1:]
        eos = self.vocabulary.eos_id
        structural = self.vocabulary.structural_ids()
        symbols = self.vocabulary.symbol_ids()
        forced = set(structural.tolist()) if mode == 'relations_given' else set(symbols.tolist())
        free = symbols if mode == 'relations_given' else structural

        def chooser(t, logits):
            if t >= len(gold):
                return eos
            token = int(gold[t])
            if mode == 'all' or token in forced:
                return token
            return int(free[np.argmax(logits[free])])

        result, _ = self._run(image, chooser=chooser)
        return self.tokens_to_tree(result.tokens, self.final_direction)

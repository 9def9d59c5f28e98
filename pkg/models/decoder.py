import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

from config.model_params import ABLATION_CONFIG1, ABLATION_CONFIG2
from models.attention import CoverageAttention, HiddenStateAttention
from models.gru import GRUCell
from numerics.tensor import Tensor, embedding_lookup, masked_cross_entropy, maxout_pool2, stack
from slt.sequence import TokenSequence
from utils.exceptions import ContextMissing, SlmDisabled


@dataclass(frozen=True)
class DecoderState:
    h: Tensor
    h_hat: Tensor
    lm_h: Tensor
    lm_h_hat: Tensor
    cum_alpha: Tensor
    cum_beta: Optional[Tensor]
    y_prev: int


@dataclass(frozen=True)
class R2LContext:
    H_back: Tensor          # [L, n]
    tokens: TokenSequence


@dataclass
class DecodeResult:
    tokens: List[int]
    hidden: List[Tensor]
    ce_main: Optional[Tensor] = None
    ce_lm: Optional[Tensor] = None
    alphas: List[np.ndarray] = field(default_factory=list)
    betas: List[np.ndarray] = field(default_factory=list)
    valid_steps: int = 0

    @property
    def H(self):
        return stack(self.hidden)

    def context_rows(self):
        """Dolgu olmayan adımların gizli durumları [L, n]"""
        return stack(self.hidden[:self.valid_steps])


class Decoder:
    """Tek yönlü (R2L ya da L2R) GRU decoder dalı; SLM ikizi aynı ağırlıkları paylaşır"""

    def __init__(self, params, prefix, config, vocabulary, rng, with_ham=False):
        self.logger = logging.getLogger('decoder')
        self.params = params
        self.prefix = prefix
        self.config = config
        self.vocabulary = vocabulary
        self.with_ham = with_ham

        K, m, n = config.vocab_size, config.embed_dim, config.hidden_dim
        D, P = config.encoder_channels, config.maxout_proj_dim

        params.add_weight(f"{prefix}.E", (K, m), m, rng)
        self.gru1 = GRUCell(params, f"{prefix}.gru1", m, n, rng)
        self.attention = CoverageAttention(params, f"{prefix}.attn", n, D, config.attention_dim,
                                           config.coverage_filters, config.coverage_kernel, rng)
        self.gru2 = GRUCell(params, f"{prefix}.gru2", D, n, rng)
        self.ham = None
        if with_ham:
            self.ham = HiddenStateAttention(params, f"{prefix}.ham", n, config.attention_dim,
                                            config.coverage_filters, config.ham_kernel, rng)

        # Sınıflandırıcı (config1 yalnızca W_c·c kullanır)
        if config.ablation != ABLATION_CONFIG1:
            params.add_weight(f"{prefix}.W_h", (n, P), n, rng)
            params.add_weight(f"{prefix}.W_y", (m, P), m, rng)
        params.add_weight(f"{prefix}.W_c", (D, P), D, rng)
        if with_ham:
            params.add_weight(f"{prefix}.W_c_hidden", (n, P), n, rng)
        params.add_bias(f"{prefix}.b_p", (P,))
        params.add_weight(f"{prefix}.W_o", (P // 2, K), P // 2, rng)
        params.add_bias(f"{prefix}.b_o", (K,))

    def _p(self, name):
        return self.params[f"{self.prefix}.{name}"]

    def embed(self, token_id):
        return embedding_lookup(self._p('E'), int(token_id))

    def initial_state(self, feature_map, context=None):
        n = self.config.hidden_dim
        zeros = Tensor(np.zeros(n))
        cum_beta = None
        if context is not None:
            cum_beta = Tensor(np.zeros(context.H_back.shape[0]))
        return DecoderState(h=zeros, h_hat=zeros, lm_h=zeros, lm_h_hat=zeros,
                            cum_alpha=Tensor(np.zeros((feature_map.height, feature_map.width))),
                            cum_beta=cum_beta, y_prev=self.vocabulary.sos_id)

    def classify(self, h, c, y_embed, c_hidden=None):
        """logits = W_o · maxout(ön-aktivasyon) + b_o"""
        if self.config.ablation == ABLATION_CONFIG1:
            pre = c @ self._p('W_c') + self._p('b_p')
        else:
            pre = h @ self._p('W_h') + y_embed @ self._p('W_y') + self._p('b_p')
            if c is not None:
                pre = pre + c @ self._p('W_c')
            if c_hidden is not None:
                pre = pre + c_hidden @ self._p('W_c_hidden')
        return maxout_pool2(pre) @ self._p('W_o') + self._p('b_o')

    def decoder_step(self, state, y_prev, feature_map, keys=None, context=None):
        """Bir adım: GRU1 -> kapsama dikkati -> GRU2 -> (HAM) -> sınıflandırıcı"""
        y_embed = self.embed(y_prev)
        gru_input = y_embed
        if self.config.ablation == ABLATION_CONFIG2:
            gru_input = self.embed(self.vocabulary.const_id)

        h_hat = self.gru1(gru_input, state.h)
        c, alpha = self.attention.attend(h_hat, feature_map, state.cum_alpha, keys)
        h = self.gru2(c, h_hat)

        c_hidden = beta = None
        cum_beta = state.cum_beta
        if self.ham is not None:
            if context is None:
                raise ContextMissing(f"{self.prefix}: HAM için R2L bağlamı gerekli")
            query = state.lm_h_hat if self.config.use_slm else h_hat
            c_hidden, beta = self.ham.attend(query, context.H_back, state.cum_beta)
            cum_beta = state.cum_beta + beta

        logits = self.classify(h, c, y_embed, c_hidden)
        new_state = replace(state, h=h, h_hat=h_hat, cum_alpha=state.cum_alpha + alpha,
                            cum_beta=cum_beta, y_prev=int(y_prev))
        return new_state, logits, (alpha, beta)

    def slm_step(self, state, y_prev):
        """Görsel bağlamsız dil dalı: c_void = 0, ağırlıklar ana dal ile ortak"""
        if not self.config.use_slm:
            raise SlmDisabled("use_slm kapalıyken slm_step çağrılamaz")
        y_embed = self.embed(y_prev)
        lm_h_hat = self.gru1(y_embed, state.lm_h)
        c_void = Tensor(np.zeros(self.config.encoder_channels))
        lm_h = self.gru2(c_void, lm_h_hat)
        lm_logits = self.classify(lm_h, None, y_embed)
        return replace(state, lm_h=lm_h, lm_h_hat=lm_h_hat), lm_logits

    def decode_sequence(self, feature_map, target=None, context=None, chooser=None):
        """Hedef verilirse teacher forcing, verilmezse greedy (ya da chooser) çözümleme.

        target: SOS ... EOS (+ sondaki PAD'ler) id dizisi.
        chooser(t, logits) -> token id; verilmezse argmax.
        """
        if self.with_ham and context is None:
            raise ContextMissing(f"{self.prefix}: BAT L2R geçişi R2L bağlamı olmadan çalışamaz")
        keys = self.attention.keys(feature_map)
        state = self.initial_state(feature_map, context if self.with_ham else None)
        logits_seq, lm_logits_seq = [], []
        result = DecodeResult(tokens=[], hidden=[])

        def run_step(state, y_prev):
            if self.config.use_slm:
                state, lm_logits = self.slm_step(state, y_prev)
                lm_logits_seq.append(lm_logits)
            state, logits, (alpha, beta) = self.decoder_step(
                state, y_prev, feature_map, keys, context if self.with_ham else None)
            logits_seq.append(logits)
            result.hidden.append(state.h)
            result.alphas.append(alpha.data)
            if beta is not None:
                result.betas.append(beta.data)
            return state, logits

        if target is not None:
            target = np.asarray(target, dtype=np.int64)
            inputs, outputs = target[:-1], target[1:]
            mask = (outputs != self.vocabulary.pad_id).astype(np.float64)
            for y_prev in inputs:
                state, logits = run_step(state, y_prev)
                result.tokens.append(int(np.argmax(logits.data)))
            result.valid_steps = int(mask.sum())
            result.ce_main = masked_cross_entropy(stack(logits_seq), outputs, mask)
            if lm_logits_seq:
                result.ce_lm = masked_cross_entropy(stack(lm_logits_seq), outputs, mask)
            return result

        y_prev = self.vocabulary.sos_id
        eos = self.vocabulary.eos_id
        for t in range(self.config.max_decode_len):
            state, logits = run_step(state, y_prev)
            token = int(np.argmax(logits.data)) if chooser is None else int(chooser(t, logits.data))
            result.tokens.append(token)
            if token == eos:
                break
            y_prev = token
        else:
            self.logger.debug(f"{self.prefix}: EOS üretilmedi, {self.config.max_decode_len} adımda kesildi")
        result.valid_steps = len(result.tokens)
        return result

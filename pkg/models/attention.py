from numerics.tensor import conv1d, conv2d, reshape, softmax, tanh, transpose
from utils.exceptions import EmptyContext


class CoverageAttention:
    """A özellik haritası üzerinde kapsama (coverage) destekli Bahdanau dikkati"""

    def __init__(self, params, prefix, query_dim, feature_dim, attention_dim, filters, kernel, rng):
        self.params = params
        self.prefix = prefix
        params.add_weight(f"{prefix}.W_q", (query_dim, attention_dim), query_dim, rng)
        params.add_weight(f"{prefix}.U_a", (feature_dim, attention_dim), feature_dim, rng)
        params.add_weight(f"{prefix}.U_f", (filters, attention_dim), filters, rng)
        params.add_weight(f"{prefix}.Q", (filters, 1, kernel, kernel), kernel * kernel, rng)
        params.add_bias(f"{prefix}.Q_b", (filters,))
        params.add_bias(f"{prefix}.b", (attention_dim,))
        params.add_weight(f"{prefix}.nu", (attention_dim,), attention_dim, rng)

    def _p(self, name):
        return self.params[f"{self.prefix}.{name}"]

    def keys(self, feature_map):
        """U_a·a_i terimi; bir örnek boyunca sabittir"""
        return feature_map.flat @ self._p('U_a')

    def attend(self, query, feature_map, cum_alpha, keys=None):
        """(c [D], alpha [H', W']) döndür"""
        keys = self.keys(feature_map) if keys is None else keys
        height, width = feature_map.height, feature_map.width
        coverage = conv2d(reshape(cum_alpha, (1, height, width)), self._p('Q'), self._p('Q_b'))
        coverage = transpose(reshape(coverage, (coverage.shape[0], height * width)))
        energy = tanh(keys + (query @ self._p('W_q') + self._p('b')) + coverage @ self._p('U_f'))
        alpha = softmax(energy @ self._p('nu'), axis=0)
        context = alpha @ feature_map.flat
        return context, reshape(alpha, (height, width))


class HiddenStateAttention:
    """R2L gizli durumları (H_back) üzerinde 1-D kapsama destekli dikkat"""

    def __init__(self, params, prefix, hidden_dim, attention_dim, filters, kernel, rng):
        self.params = params
        self.prefix = prefix
        params.add_weight(f"{prefix}.W_q", (hidden_dim, attention_dim), hidden_dim, rng)
        params.add_weight(f"{prefix}.U_h", (hidden_dim, attention_dim), hidden_dim, rng)
        params.add_weight(f"{prefix}.U_f", (filters, attention_dim), filters, rng)
        params.add_weight(f"{prefix}.Q", (filters, 1, kernel), kernel, rng)
        params.add_bias(f"{prefix}.Q_b", (filters,))
        params.add_bias(f"{prefix}.b", (attention_dim,))
        params.add_weight(f"{prefix}.nu", (attention_dim,), attention_dim, rng)

    def _p(self, name):
        return self.params[f"{self.prefix}.{name}"]

    def attend(self, query, H_back, cum_beta):
        """(c_hidden [n], beta [L]) döndür"""
        length = H_back.shape[0]
        if length == 0:
            raise EmptyContext("HAM için R2L bağlamı boş (L=0)")
        coverage = conv1d(reshape(cum_beta, (1, length)), self._p('Q'), self._p('Q_b'))
        energy = tanh(H_back @ self._p('U_h') + (query @ self._p('W_q') + self._p('b'))
                      + transpose(coverage) @ self._p('U_f'))
        beta = softmax(energy @ self._p('nu'), axis=0)
        return beta @ H_back, beta

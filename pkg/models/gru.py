from numerics.tensor import sigmoid, tanh


class GRUCell:
    """Standart GRU hücresi; ağırlıklar paylaşılan ParameterSet'te tutulur"""

    def __init__(self, params, prefix, input_dim, hidden_dim, rng):
        self.params = params
        self.prefix = prefix
        for gate in ('z', 'r', 'n'):
            params.add_weight(f"{prefix}.W_{gate}", (input_dim, hidden_dim), input_dim, rng)
            params.add_weight(f"{prefix}.U_{gate}", (hidden_dim, hidden_dim), hidden_dim, rng)
            params.add_bias(f"{prefix}.b_{gate}", (hidden_dim,))

    def _p(self, name):
        return self.params[f"{self.prefix}.{name}"]

    def __call__(self, x, h):
        z = sigmoid(x @ self._p('W_z') + h @ self._p('U_z') + self._p('b_z'))
        r = sigmoid(x @ self._p('W_r') + h @ self._p('U_r') + self._p('b_r'))
        n = tanh(x @ self._p('W_n') + self._p('b_n') + r * (h @ self._p('U_n')))
        # h' = (1 - z) * n + z * h
        return n + z * (h - n)

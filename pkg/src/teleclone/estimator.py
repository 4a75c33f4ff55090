"""scikit-learn style wrapper mapping squeezing parameters to clone figures of merit."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .protocols import ProtocolSpec, run_protocol
from .states import InputSpec, ResourceSpec

OUTPUT_NAMES = ("fidelity", "q", "var_x", "var_p")


class TelecloningFidelity(TransformerMixin, BaseEstimator):
    """Clone fidelity as a function of resource squeezing (and optionally epsilon).

    The model has no learned parameters; ``fit`` only validates the
    configuration so the object composes with pipelines and grid searches.

    Parameters
    ----------
    protocol : {'irreversible', 'reversible', 'asymmetric'}
    resource : str
        Resource spec such as ``"tmsv"``, ``"ps:1,1"`` or ``"asym:0.5,0.05"``.
    input : str
        Input spec such as ``"coherent:0,0"`` or ``"squeezed:0.5"``.
    epsilon : float
        Ancilla squeezing used when ``X`` has a single column.
    num_clones : int
        Symmetric variants only.
    clone_index : int
        1-based clone reported by ``predict`` and ``transform``.
    ancilla : {'both', 'receiver'}
        Which reversible-scheme ancillas carry the epsilon squeezing.
    sender : {'irreversible', 'reversible'}
        Sender scheme of the asymmetric variant.

    Examples
    --------
    >>> import numpy as np
    >>> est = TelecloningFidelity().fit(np.zeros((1, 1)))
    >>> round(float(est.predict([[0.8814]])[0]), 4)
    0.6667
    """

    def __init__(
        self,
        protocol: str = "irreversible",
        resource: str = "tmsv",
        input: str = "coherent:0,0",
        epsilon: float = 0.0,
        num_clones: int = 2,
        clone_index: int = 1,
        ancilla: str = "both",
        sender: str = "irreversible",
    ):
        self.protocol = protocol
        self.resource = resource
        self.input = input
        self.epsilon = epsilon
        self.num_clones = num_clones
        self.clone_index = clone_index
        self.ancilla = ancilla
        self.sender = sender

    def _specs(self):
        if self.protocol == "asymmetric":
            p = ProtocolSpec("asymmetric", sender=self.sender)
        else:
            p = ProtocolSpec(self.protocol, self.num_clones, self.epsilon, self.ancilla)
        return p, ResourceSpec.parse(self.resource), InputSpec.parse(self.input)

    def fit(self, X=None, y=None):
        p, res, inp = self._specs()
        count = len(res.taus) if res.family == "asym" else p.num_clones
        if not 1 <= self.clone_index <= count:
            raise ValueError(f"clone_index must lie in [1, {count}]")
        self.protocol_, self.resource_, self.input_ = p, res, inp
        self.n_features_in_ = None if X is None else np.atleast_2d(np.asarray(X)).shape[1]
        return self

    def _rows(self, X) -> np.ndarray:
        if not hasattr(self, "protocol_"):
            self.fit()
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] not in (1, 2):
            raise ValueError("X needs columns (r,) or (r, epsilon)")
        if X.shape[1] == 2 and self.protocol_.variant == "asymmetric":
            raise ValueError("the asymmetric variant has no epsilon parameter")
        out = np.empty((X.shape[0], len(OUTPUT_NAMES)))
        k = self.clone_index - 1
        for i, row in enumerate(X):
            p = self.protocol_
            if X.shape[1] == 2:
                p = ProtocolSpec(p.variant, p.num_clones, float(row[1]), p.ancilla, p.sender)
            rep = run_protocol(self.resource_.with_r(row[0]), self.input_, p)
            out[i] = rep.fidelities[k], rep.q[k], *rep.variances[k]
        return out

    def transform(self, X) -> np.ndarray:
        """Columns ``fidelity, q, var_x, var_p`` for each row of ``X``."""
        return self._rows(X)

    def predict(self, X) -> np.ndarray:
        """Clone fidelity for each row of ``X``."""
        return self._rows(X)[:, 0]

    def get_feature_names_out(self, input_features=None):
        return np.asarray(OUTPUT_NAMES, dtype=object)

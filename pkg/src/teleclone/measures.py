"""Nonclassicality measure, fidelity bounds and closed-form entanglement references."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .phase_space import GaussianState, linear_form_stats

VACUUM_ZETA = 4.0


@dataclass(frozen=True)
class QReport:
    """Duan sum, calibrated measure ``q = 1 - zeta/4`` and the input's classical benchmark."""

    zeta: float
    q: float
    classical_threshold: float = 0.5


def q_from_moments(zeta: float, threshold: float = 0.5) -> QReport:
    return QReport(float(zeta), 1.0 - float(zeta) / VACUUM_ZETA, threshold)


def q_measure(state, h, c, threshold: float = 0.5) -> QReport:
    """Q between the sender combination ``h`` and the clone combination ``c``.

    Parameters
    ----------
    state : GaussianState or PolyGaussian
        Network state; for a PolyGaussian only its second moments enter.
    h, c : array of shape (N,)
        Mode coefficient vectors, as produced by ``protocols.network_modes``.
    threshold : float
        Classical fidelity benchmark recorded in the report.
    """
    if not isinstance(state, GaussianState):
        from .wigner_engine import second_moments

        state = GaussianState(*second_moments(state))
    h = np.asarray(h, dtype=float)
    c = np.asarray(c, dtype=float)
    if h.shape != (state.num_modes,) or c.shape != h.shape:
        raise ValueError(f"mode combinations must have length {state.num_modes}")
    _, var_x, _, var_p = linear_form_stats(state, h - c, h + c)
    return q_from_moments(var_x + var_p, threshold)


def prop1_bound(q: float) -> float:
    """Lower bound ``1/(2 - q)`` on the coherent-state clone fidelity.

    Exact when the clone noise is symmetric in x and p.
    """
    if q > 1:
        raise ValueError("q cannot exceed 1")
    return 1.0 / (2.0 - q)


def unit_bracket(q: float):
    """Unit-sensitive bracket ``(2/sqrt(7 - 2q), 2/sqrt(6 - 2q))``; diagnostic only."""
    return 2.0 / np.sqrt(7.0 - 2.0 * q), 2.0 / np.sqrt(6.0 - 2.0 * q)


def classical_threshold(inp=None) -> float:
    """Measure-and-prepare benchmark: 1/2 for coherent, 1/(2 cosh s) for squeezed inputs.

    The squeezed value is the fidelity of the zero-squeezing irreversible
    pipeline, which adds two vacuum units to each quadrature.
    """
    if inp is None or inp.kind == "coherent":
        return 0.5
    return 1.0 / (2.0 * np.cosh(inp.s))


def eln_nu_closed_form(r: float) -> float:
    c2, c4 = np.cosh(2 * r), np.cosh(4 * r)
    root = np.sqrt(2.0 * (np.sinh(r) - 3.0 * np.sinh(3 * r)) ** 2 * (9.0 * c2 + 7.0))
    return (3.0 + 4.0 * c2 + 9.0 * c4 - root) / 16.0


def eln_closed_form(r: float) -> float:
    """Reference closed form for the sender/clone log-negativity of the TMSV network.

    ``-log2 nu`` with ``nu = [3 + 4 cosh 2r + 9 cosh 4r
    - sqrt(2 (sinh r - 3 sinh 3r)^2 (9 cosh 2r + 7))] / 16``.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    return float(max(0.0, -np.log2(eln_nu_closed_form(r))))


def ggm_closed_form(r: float) -> float:
    """Genuine multimode entanglement ``1 - 2/(1 + cosh^2 r)`` of the TMSV network."""
    if r < 0:
        raise ValueError("r must be non-negative")
    return float(1.0 - 2.0 / (1.0 + np.cosh(r) ** 2))

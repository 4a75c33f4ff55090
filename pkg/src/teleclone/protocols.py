"""
Telecloning pipelines at unit gain.

Every protocol output is a fixed linear combination of network quadratures,
so the clone law is a linear pushforward of the network state. The symmetric
network orders its modes as

    (in, S, R, v_1, ..., v_{M-1}[, vS])

where ``v_k`` are the receiver-side ancillas and ``vS`` is the sender-side
ancilla of the reversible scheme. Clone k leaves as

    x_out = x_Ck + x_in - x_h,    p_out = p_Ck + p_in + p_h,

with ``h = S`` (irreversible) or ``h = (S + vS)/sqrt(2)`` (reversible). The
reversible anticlone is ``x = x_in - sqrt(2) x_vS``, ``p = -p_in - sqrt(2) p_vS``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .measures import classical_threshold, q_from_moments, q_measure
from .phase_space import (
    GaussianState,
    SymplecticMap,
    apply_symplectic,
    beam_splitter,
    gaussian_overlap,
    tensor,
    vacuum_state,
)
from .states import (
    InputSpec,
    ResourceSpec,
    asymmetric_resource,
    degaussify,
    input_state,
    squeezed_input,
)
from .wigner_engine import PolyGaussian, lift_gaussian, linear_pushforward, overlap, second_moments
from .wigner_engine import tensor as wtensor

VARIANTS = ("irreversible", "reversible", "asymmetric")
ANCILLA_TARGETS = ("both", "receiver")


@dataclass(frozen=True)
class ProtocolSpec:
    """Telecloning variant and its ancilla settings.

    Parameters
    ----------
    variant : {'irreversible', 'reversible', 'asymmetric'}
    num_clones : int
        M >= 2 for the symmetric variants; ignored by 'asymmetric', whose
        clone count is set by the resource.
    epsilon : float
        Squeezing of the ancillas, x quadrature reduced.
    ancilla : {'both', 'receiver'}
        Which ancillas carry the epsilon squeezing: every vacuum ancilla
        (default), or only the receiver-side ones so that ``vS`` of the
        reversible scheme stays in vacuum.
    sender : {'irreversible', 'reversible'}
        Sender-side scheme used by the 'asymmetric' variant.
    """

    variant: str = "irreversible"
    num_clones: int = 2
    epsilon: float = 0.0
    ancilla: str = "both"
    sender: str = "irreversible"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant != "asymmetric" and int(self.num_clones) < 2:
            raise ValueError("symmetric telecloning needs at least two clones")
        if not np.isfinite(self.epsilon) or self.epsilon < 0:
            raise ValueError("epsilon must be finite and non-negative")
        if self.ancilla not in ANCILLA_TARGETS:
            raise ValueError(f"ancilla must be one of {ANCILLA_TARGETS}")
        if self.sender not in ("irreversible", "reversible"):
            raise ValueError("sender must be 'irreversible' or 'reversible'")

    @property
    def reversible(self) -> bool:
        if self.variant == "asymmetric":
            return self.sender == "reversible"
        return self.variant == "reversible"

    @property
    def gain(self) -> float:
        return 1.0


@dataclass(frozen=True)
class CloneReport:
    """Per-clone results of one protocol run."""

    fidelities: tuple
    variances: tuple
    q: tuple
    zeta: tuple
    anticlone_fidelity: float | None = None
    herald_weight: float | None = None
    extras: dict = field(default_factory=dict)

    @property
    def num_clones(self) -> int:
        return len(self.fidelities)


@dataclass(frozen=True)
class NetworkModes:
    """Mode definitions as coefficient vectors over the network modes."""

    labels: tuple
    h: np.ndarray
    clones: tuple
    anticlone_branch: np.ndarray | None
    clone_outputs: tuple
    anticlone_output: tuple | None

    @property
    def num_modes(self) -> int:
        return len(self.labels)


def _clone_splitter_rows(num_clones: int) -> np.ndarray:
    """Rows expressing clone modes in terms of (R, v_1, ..., v_{M-1}).

    Left-deep chain: splitter k sends a 1/(M-k+1) share of the running mode
    to clone k through its first port and keeps the rest running.
    """
    m = num_clones
    smap = np.eye(2 * m)
    for k in range(1, m):
        tau = 1.0 / (m - k + 1)
        # running mode at index k - 1, ancilla v_k at index k; the first port
        # leaves as clone k and the second port carries the running mode on
        smap = beam_splitter(k - 1, k, tau, m).matrix @ smap
    return smap[0::2, 0::2]


def network_modes(p: ProtocolSpec) -> NetworkModes:
    """Coefficient vectors over (in, S, R, v_1..v_{M-1}[, vS]) for each mode."""
    if p.variant == "asymmetric":
        raise ValueError("asymmetric networks are built by asymmetric_network_modes")
    m = p.num_clones
    labels = ["in", "S", "R"] + [f"v{k}" for k in range(1, m)]
    if p.reversible:
        labels.append("vS")
    n = len(labels)
    rows = _clone_splitter_rows(m)
    clones = []
    for k in range(m):
        c = np.zeros(n)
        c[2:2 + m] = rows[k]
        clones.append(c)
    h = np.zeros(n)
    branch = None
    if p.reversible:
        h[1] = h[n - 1] = 1 / np.sqrt(2)
        branch = np.zeros(n)
        branch[1], branch[n - 1] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    else:
        h[1] = 1.0
    e_in = np.zeros(n)
    e_in[0] = 1.0
    outputs = tuple((c + e_in - h, c + e_in + h) for c in clones)
    anti = None
    if p.reversible:
        # x_aC + x_in - x_h and p_aC - p_in - p_h
        anti = (branch + e_in - h, branch - e_in - h)
    return NetworkModes(tuple(labels), h, tuple(clones), branch, outputs, anti)


def output_matrix(xcoeffs, pcoeffs) -> np.ndarray:
    n = len(xcoeffs)
    a = np.zeros((2, 2 * n))
    a[0, 0::2] = xcoeffs
    a[1, 1::2] = pcoeffs
    return a


def _ancilla_state(p: ProtocolSpec, squeezed: bool) -> GaussianState:
    if squeezed and p.epsilon:
        return squeezed_input(p.epsilon)
    return vacuum_state(1)


def _ancillas(p: ProtocolSpec) -> list:
    states = [_ancilla_state(p, True) for _ in range(p.num_clones - 1)]
    if p.reversible:
        states.append(_ancilla_state(p, p.ancilla == "both"))
    return states


def _network_gaussian(resource: GaussianState, inp: GaussianState, p: ProtocolSpec) -> GaussianState:
    if resource.num_modes != 2:
        raise ValueError("symmetric telecloning needs a two-mode resource")
    state = tensor(inp, resource)
    for anc in _ancillas(p):
        state = tensor(state, anc)
    return state


def _conjugate(state: GaussianState) -> GaussianState:
    flip = np.diag([1.0, -1.0])
    return GaussianState(flip @ state.mean, flip @ state.cov @ flip)


def clone_moments_gaussian(resource: GaussianState, inp: InputSpec, p: ProtocolSpec):
    """Quadrature variances ``(var_x, var_p)`` of clone 1."""
    modes = network_modes(p)
    net = _network_gaussian(resource, input_state(inp), p)
    clone = apply_symplectic(net, SymplecticMap(output_matrix(*modes.clone_outputs[0])))
    return float(clone.cov[0, 0]), float(clone.cov[1, 1])


def anticlone_fidelity(inp: InputSpec, p: ProtocolSpec) -> float:
    """Fidelity of the reversible anticlone with the phase-conjugated input.

    The anticlone involves only the input and the sender ancilla, so the
    resource is irrelevant and a vacuum placeholder is used.
    """
    if not p.reversible:
        raise ValueError("only the reversible scheme produces an anticlone")
    modes = network_modes(p)
    target = input_state(inp)
    net = _network_gaussian(vacuum_state(2), target, p)
    anti = apply_symplectic(net, SymplecticMap(output_matrix(*modes.anticlone_output)))
    return gaussian_overlap(_conjugate(target), anti)


def fidelity_gaussian(resource: GaussianState, inp: InputSpec, p: ProtocolSpec) -> CloneReport:
    """Clone fidelities via the covariance path, for a Gaussian resource."""
    modes = network_modes(p)
    target = input_state(inp)
    net = _network_gaussian(resource, target, p)
    fids, variances, qs, zetas = [], [], [], []
    for k, out in enumerate(modes.clone_outputs):
        clone = apply_symplectic(net, SymplecticMap(output_matrix(*out)))
        fids.append(gaussian_overlap(target, clone))
        variances.append((float(clone.cov[0, 0]), float(clone.cov[1, 1])))
        rep = q_measure(net, modes.h, modes.clones[k])
        qs.append(rep.q)
        zetas.append(rep.zeta)
    anti = anticlone_fidelity(inp, p) if p.reversible else None
    return CloneReport(tuple(fids), tuple(variances), tuple(qs), tuple(zetas), anti)


def teleclone_wigner(
    resource: PolyGaussian,
    inp: InputSpec,
    p: ProtocolSpec,
    herald_weight: float | None = None,
) -> CloneReport:
    """Clone fidelities via the Wigner path, for any two-mode resource distribution."""
    if resource.num_modes != 2:
        raise ValueError("symmetric telecloning needs a two-mode resource")
    modes = network_modes(p)
    target = input_state(inp)
    w_in = lift_gaussian(target)
    net = wtensor(w_in, resource)
    for anc in _ancillas(p):
        net = wtensor(net, lift_gaussian(anc))
    mean, cov = second_moments(net)
    net_moments = GaussianState(mean, cov)
    fids, variances, qs, zetas = [], [], [], []
    for k, out in enumerate(modes.clone_outputs):
        clone = linear_pushforward(net, output_matrix(*out))
        fids.append(overlap(w_in, clone))
        a = output_matrix(*out)
        ccov = a @ cov @ a.T
        variances.append((float(ccov[0, 0]), float(ccov[1, 1])))
        rep = q_measure(net_moments, modes.h, modes.clones[k])
        qs.append(rep.q)
        zetas.append(rep.zeta)
    anti = anticlone_fidelity(inp, p) if p.reversible else None
    return CloneReport(tuple(fids), tuple(variances), tuple(qs), tuple(zetas), anti, herald_weight)


def run_protocol(resource: ResourceSpec, inp: InputSpec, p: ProtocolSpec) -> CloneReport:
    """Dispatch to the covariance path (Gaussian resources) or the Wigner path."""
    if resource.family == "asym" or p.variant == "asymmetric":
        if resource.family != "asym" or p.variant != "asymmetric":
            raise ValueError("the asymmetric variant needs an asym resource and vice versa")
        return asymmetric_report(resource.r, resource.taus, inp, p)
    if resource.family == "tmsv":
        from .states import tmsv

        return fidelity_gaussian(tmsv(resource.r), inp, p)
    w, weight = degaussify(resource)
    return teleclone_wigner(w, inp, p, weight)


# asymmetric network


def _check_clone_index(taus, m: int) -> None:
    if not 1 <= m <= len(taus):
        raise ValueError(f"clone index {m} outside 1..{len(taus)}")


def asymmetric_clone_moments_sim(r: float, taus, m: int) -> dict:
    """Second moments of receiver ``m`` (1-based) and the sender from the explicit covariance."""
    _check_clone_index(taus, m)
    cov = asymmetric_resource(r, taus).cov
    n = len(taus)
    i, s = 2 * (m - 1), 2 * n
    return {
        "x_m2": cov[i, i],
        "x_s2": cov[s, s],
        "x_sm": cov[s, i],
        "p_m2": cov[i + 1, i + 1],
        "p_s2": cov[s + 1, s + 1],
        "p_sm": cov[s + 1, i + 1],
    }


def _even_content(taus, k: int) -> float:
    """Share of even-numbered input modes in the running mode entering splitter k.

    ``sum_{i odd <= k-1} tau_i prod_{j=i+1}^{k-1} (1 - tau_j)``, taus 1-based.
    """
    total = 0.0
    for i in range(1, k, 2):
        total += taus[i - 1] * np.prod([1.0 - taus[j - 1] for j in range(i + 1, k)])
    return total


def _moments_closed_p(r: float, taus, m: int) -> tuple:
    """p-quadrature moments; even-numbered inputs are the p-squeezed ones."""
    taus = list(taus)
    n = len(taus)
    s2 = np.sinh(2 * r)
    tm = taus[m - 1]
    e_m = _even_content(taus, m)
    tail = np.prod([np.sqrt(1.0 - taus[l - 1]) for l in range(m, n + 1)])
    if m % 2 == 0:
        var_m = np.exp(2 * r) - 2 * s2 * e_m * tm
        corr = 2 * s2 * np.sqrt(tm) * e_m * tail
    else:
        var_m = np.exp(-2 * r) + 2 * s2 * (1.0 - e_m) * tm
        corr = -2 * s2 * np.sqrt(tm) * (1.0 - e_m) * tail
    var_s = np.exp(2 * r) - 2 * s2 * _even_content(taus, n + 1)
    return var_m, var_s, corr


def asymmetric_clone_moments_closed(r: float, taus, m: int) -> dict:
    """Closed-form second moments of receiver ``m`` (1-based) and the sender.

    With ``E_k = sum_{i odd <= k-1} tau_i prod_{j=i+1}^{k-1} (1 - tau_j)`` and
    ``T_m = prod_{l=m}^{N} sqrt(1 - tau_l)``, the p quadratures satisfy

    - m even: ``<p_m^2> = e^{2r} - 2 sinh(2r) E_m tau_m``,
      ``<p_S p_m> = 2 sinh(2r) sqrt(tau_m) E_m T_m``;
    - m odd: ``<p_m^2> = e^{-2r} + 2 sinh(2r) (1 - E_m) tau_m``,
      ``<p_S p_m> = -2 sinh(2r) sqrt(tau_m) (1 - E_m) T_m``;
    - sender: ``<p_S^2> = e^{2r} - 2 sinh(2r) E_{N+1}``.

    The x quadratures follow from ``r -> -r``.
    """
    _check_clone_index(taus, m)
    for t in taus:
        if not 0.0 <= t <= 1.0:
            raise ValueError("transmissivities must lie in [0, 1]")
    pm, ps, pc = _moments_closed_p(r, taus, m)
    xm, xs, xc = _moments_closed_p(-r, taus, m)
    return {"x_m2": xm, "x_s2": xs, "x_sm": xc, "p_m2": pm, "p_s2": ps, "p_sm": pc}


def asymmetric_clone_moments_literal(r: float, taus, m: int) -> dict:
    """The reference closed forms transcribed term by term, for discrepancy reports.

    They are stated for even-numbered inputs squeezed in x and for the
    opposite receiver-port sign, so they are compared against the p
    quadratures of :func:`asymmetric_clone_moments_closed` with the
    correlator sign flipped. Known to disagree for odd ``m``.
    """
    _check_clone_index(taus, m)
    taus = list(taus)
    n = len(taus)
    s2 = np.sinh(2 * r)
    tm = taus[m - 1]
    e_m = _even_content(taus, m)
    if m % 2 == 0:
        var_m = np.exp(2 * r) - 2 * s2 * e_m * tm
        corr = -2 * s2 * np.sqrt(tm) * e_m * np.prod([np.sqrt(1 - taus[l - 1]) for l in range(m, n + 1)])
    else:
        var_m = np.exp(2 * r) + 2 * s2 * (1.0 - e_m) * tm
        corr = (1.0 - e_m) * np.prod([np.sqrt(taus[l - 1]) for l in range(m + 1, n + 1)])
        corr *= 2 * s2 * np.sqrt(1 - tm)
    var_s = np.exp(2 * r) - 2 * s2 * _even_content(taus, n + 1)
    return {"p_m2": var_m, "p_s2": var_s, "p_sm": -corr}


def _asym_forms(n_recv: int, m: int, reversible: bool):
    """x and p output coefficients over (receivers..., sender, in[, vS])."""
    n = n_recv + 2 + (1 if reversible else 0)
    e = np.eye(n)
    h = e[n_recv].copy()
    if reversible:
        h = (e[n_recv] + e[n - 1]) / np.sqrt(2)
    c = e[m - 1]
    x = c + e[n_recv + 1] - h
    p = c + e[n_recv + 1] + h
    return h, c, x, p


def _asym_network(r: float, taus, inp: GaussianState, reversible: bool) -> GaussianState:
    net = tensor(asymmetric_resource(r, taus), inp)
    if reversible:
        net = tensor(net, vacuum_state(1))
    return net


def asymmetric_fidelity(r: float, taus, p: ProtocolSpec, m: int, inp: InputSpec | None = None):
    """Fidelity and Q of clone ``m`` (1-based) from the explicit network covariance.

    Returns
    -------
    (fidelity, (var_x, var_p), QReport)
    """
    if p.variant != "asymmetric":
        raise ValueError("asymmetric_fidelity needs the asymmetric variant")
    _check_clone_index(taus, m)
    inp = inp or InputSpec()
    target = input_state(inp)
    net = _asym_network(r, taus, target, p.reversible)
    h, c, x, pp = _asym_forms(len(taus), m, p.reversible)
    clone = apply_symplectic(net, SymplecticMap(output_matrix(x, pp)))
    rep = q_measure(net, h, c)
    return gaussian_overlap(target, clone), (float(clone.cov[0, 0]), float(clone.cov[1, 1])), rep


def asymmetric_fidelity_closed(r: float, taus, p: ProtocolSpec, m: int, inp: InputSpec | None = None):
    """Same quantities as :func:`asymmetric_fidelity`, assembled from the closed-form moments."""
    if p.variant != "asymmetric":
        raise ValueError("asymmetric_fidelity_closed needs the asymmetric variant")
    mom = asymmetric_clone_moments_closed(r, taus, m)
    inp = inp or InputSpec()
    target = input_state(inp)
    vin_x, vin_p = target.cov[0, 0], target.cov[1, 1]
    xs2, ps2, xsm, psm = mom["x_s2"], mom["p_s2"], mom["x_sm"], mom["p_sm"]
    if p.reversible:
        xs2, ps2 = (xs2 + 1.0) / 2, (ps2 + 1.0) / 2
        xsm, psm = xsm / np.sqrt(2), psm / np.sqrt(2)
    var_x = mom["x_m2"] + vin_x + xs2 - 2 * xsm
    var_p = mom["p_m2"] + vin_p + ps2 + 2 * psm
    clone = GaussianState(target.mean, np.diag([var_x, var_p]))
    zeta = (mom["x_m2"] + xs2 - 2 * xsm) + (mom["p_m2"] + ps2 + 2 * psm)
    rep = q_from_moments(zeta, classical_threshold(inp))
    return gaussian_overlap(target, clone), (var_x, var_p), rep


def asymmetric_report(r: float, taus, inp: InputSpec, p: ProtocolSpec) -> CloneReport:
    fids, variances, qs, zetas = [], [], [], []
    for m in range(1, len(taus) + 1):
        f, v, rep = asymmetric_fidelity(r, taus, p, m, inp)
        fids.append(f)
        variances.append(v)
        qs.append(rep.q)
        zetas.append(rep.zeta)
    anti = anticlone_fidelity(inp, ProtocolSpec("reversible")) if p.reversible else None
    return CloneReport(tuple(fids), tuple(variances), tuple(qs), tuple(zetas), anti)


def reduced_sender_clone_state(r: float, p: ProtocolSpec | None = None) -> GaussianState:
    """Two-mode (S, C_1) state of the TMSV telecloning network before measurement."""
    from .states import tmsv

    p = p or ProtocolSpec("irreversible")
    modes = network_modes(p)
    net = _network_gaussian(tmsv(r), vacuum_state(1), p)
    n = modes.num_modes
    rows = np.zeros((4, 2 * n))
    s = np.zeros(n)
    s[1] = 1.0
    rows[:2] = output_matrix(s, s)
    rows[2:] = output_matrix(modes.clones[0], modes.clones[0])
    return apply_symplectic(net, SymplecticMap(rows))


__all__ = [
    "ProtocolSpec",
    "CloneReport",
    "NetworkModes",
    "network_modes",
    "clone_moments_gaussian",
    "fidelity_gaussian",
    "teleclone_wigner",
    "anticlone_fidelity",
    "run_protocol",
    "asymmetric_clone_moments_sim",
    "asymmetric_clone_moments_closed",
    "asymmetric_clone_moments_literal",
    "asymmetric_fidelity",
    "asymmetric_fidelity_closed",
    "asymmetric_report",
    "reduced_sender_clone_state",
]

"""
Truncated Fock-space oracle for pure multimode states.

Quadrature moments use x = a + a^dag and p = -i(a - a^dag) and are
Weyl-symmetrized, which is the ordering that phase-space moments of the Wigner
function reproduce.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

DEFAULT_CUTOFF = 40
TRUNCATION_TOL = 1e-6
GUARD_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FockState:
    """Pure state as a dense amplitude tensor, one axis per mode.

    Mixed states are not needed by the verification suite and are not
    represented.
    """

    amplitudes: np.ndarray

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0] - 1

    @property
    def num_modes(self) -> int:
        return self.amplitudes.ndim

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def fock_vacuum(num_modes: int, cutoff: int = DEFAULT_CUTOFF) -> FockState:
    amp = np.zeros((cutoff + 1,) * num_modes, dtype=complex)
    amp[(0,) * num_modes] = 1.0
    return FockState(amp)


def fock_tmsv(r: float, cutoff: int = DEFAULT_CUTOFF) -> FockState:
    """``sech r * sum_n tanh(r)^n |n, n>`` truncated at ``cutoff``."""
    if cutoff < 10:
        raise ValueError("cutoff must be at least 10")
    n = np.arange(cutoff + 1)
    diag = np.tanh(r) ** n / np.cosh(r)
    deficit = 1.0 - np.sum(diag**2)
    if deficit > TRUNCATION_TOL:
        raise ValueError(f"cutoff {cutoff} loses norm {deficit:.3g} at r={r}")
    amp = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amp[n, n] = diag
    return FockState(amp)


def _annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)


def _apply_on_axis(op: np.ndarray, amp: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(op, amp, axes=([1], [axis])), 0, axis)


def fock_ladder(state: FockState, mode: int, kind: str):
    """Apply ``a`` (``kind='subtract'``) or ``a^dag`` (``'add'``) to one mode.

    Returns
    -------
    (FockState, float)
        The normalized result and its squared norm relative to the input.
    """
    if kind not in ("subtract", "add"):
        raise ValueError("kind must be 'subtract' or 'add'")
    if not 0 <= mode < state.num_modes:
        raise IndexError(f"mode {mode} out of range")
    amp = state.amplitudes
    dim = amp.shape[mode]
    if kind == "add":
        top = np.take(amp, dim - 1, axis=mode)
        if np.sum(np.abs(top) ** 2) > GUARD_TOL:
            raise ValueError("creation operator would push amplitude past the cutoff")
    op = _annihilation(dim)
    if kind == "add":
        op = op.conj().T
    out = _apply_on_axis(op, amp, mode)
    weight = float(np.sum(np.abs(out) ** 2)) / state.norm()
    if weight <= 0.0:
        raise ValueError(f"{kind} on mode {mode} gives zero weight")
    return FockState(out / np.sqrt(np.sum(np.abs(out) ** 2))), weight


def _weyl_operator(nx: int, np_: int, dim: int) -> np.ndarray:
    """Weyl-symmetrized product of ``nx`` x's and ``np_`` p's."""
    a = _annihilation(dim)
    ad = a.conj().T
    x = a + ad
    p = -1j * (a - ad)
    n = nx + np_
    out = np.zeros((dim, dim), dtype=complex)
    for xs in combinations(range(n), nx):
        term = np.eye(dim, dtype=complex)
        for k in range(n):
            term = term @ (x if k in xs else p)
        out += term
    return out / comb(n, nx)


def fock_moment(state: FockState, exponents) -> float:
    """Weyl-ordered moment of ``prod_k x_k^a_k p_k^b_k``.

    ``exponents`` is ordered (x1, p1, x2, p2, ...). The state is zero-padded
    by the moment degree so the truncated operator matrices act exactly.
    """
    exps = [int(e) for e in exponents]
    if len(exps) != 2 * state.num_modes:
        raise ValueError("need one exponent per phase-space variable")
    deg = sum(exps)
    pad = [(0, deg)] * state.num_modes
    amp = np.pad(state.amplitudes, pad)
    dim = amp.shape[0]
    out = amp
    for mode in range(state.num_modes):
        nx, np_ = exps[2 * mode], exps[2 * mode + 1]
        if nx + np_:
            out = _apply_on_axis(_weyl_operator(nx, np_, dim), out, mode)
    val = np.vdot(amp, out) / np.vdot(amp, amp)
    return float(val.real)


def fock_overlap(a: FockState, b: FockState) -> float:
    """|<a|b>|^2 for normalized pure states."""
    if a.amplitudes.shape != b.amplitudes.shape:
        raise ValueError("states must share modes and cutoff")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2 / (a.norm() * b.norm()))


def fock_parity(state: FockState) -> float:
    """Expectation of the total photon-number parity (-1)^n."""
    grids = np.meshgrid(*[np.arange(d) for d in state.amplitudes.shape], indexing="ij")
    total = sum(grids)
    return float(np.sum(np.abs(state.amplitudes) ** 2 * (-1.0) ** total) / state.norm())

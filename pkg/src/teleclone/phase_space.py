"""
Gaussian states in phase space.

Quadratures are x = a + a^dag and p = -i(a - a^dag), so the vacuum has unit
variance in each quadrature and the commutator is [R_k, R_l] = 2i Omega_kl.
Phase-space vectors are ordered (x1, p1, x2, p2, ...). Mode indices are
zero-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SYMMETRY_TOL = 1e-12


def symplectic_form(num_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with blocks [[0, 1], [-1, 0]]."""
    return np.kron(np.eye(num_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second moments of an N-mode Gaussian state.

    Parameters
    ----------
    mean : array of shape (2N,)
    cov : array of shape (2N, 2N)
        Symmetrized covariance, ``cov_kl = <{dR_k, dR_l}>/2``; the vacuum has
        ``cov = I``.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.cov, dtype=float)
        if mean.size == 0 or mean.size % 2:
            raise ValueError("mean must have even, non-zero length")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"cov has shape {cov.shape}, expected {(mean.size, mean.size)}")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
            raise ValueError("cov is not symmetric")
        mean.setflags(write=False)
        cov = 0.5 * (cov + cov.T)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def num_modes(self) -> int:
        return self.mean.size // 2

    def is_physical(self, tol: float = 1e-9) -> bool:
        """Check the uncertainty relation ``cov + i Omega >= 0``."""
        herm = self.cov + 1j * symplectic_form(self.num_modes)
        return bool(np.min(np.linalg.eigvalsh(herm)) > -tol)

    def purity(self) -> float:
        return float(1.0 / np.sqrt(np.linalg.det(self.cov)))


@dataclass(frozen=True, eq=False)
class SymplecticMap:
    """Affine phase-space map ``xi -> matrix @ xi + shift``.

    ``matrix`` may be rectangular (2N' x 2N), in which case the map also
    discards the modes not reached by its rows.
    """

    matrix: np.ndarray
    shift: np.ndarray | None = None

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if m.shape[0] % 2 or m.shape[1] % 2:
            raise ValueError("matrix dimensions must be even")
        shift = np.zeros(m.shape[0]) if self.shift is None else np.asarray(self.shift, dtype=float)
        if shift.shape != (m.shape[0],):
            raise ValueError("shift length must match the number of output rows")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "shift", shift)

    def is_symplectic(self, tol: float = 1e-12) -> bool:
        m = self.matrix
        if m.shape[0] != m.shape[1]:
            return False
        omega = symplectic_form(m.shape[0] // 2)
        return bool(np.max(np.abs(m.T @ omega @ m - omega)) < tol)

    def then(self, other: SymplecticMap) -> SymplecticMap:
        """Composition: apply ``self`` first, then ``other``."""
        return SymplecticMap(other.matrix @ self.matrix, other.matrix @ self.shift + other.shift)


def _check_mode(mode: int, num_modes: int) -> None:
    if not 0 <= mode < num_modes:
        raise IndexError(f"mode {mode} out of range for {num_modes} modes")


def vacuum_state(num_modes: int) -> GaussianState:
    if num_modes < 1:
        raise ValueError("need at least one mode")
    return GaussianState(np.zeros(2 * num_modes), np.eye(2 * num_modes))


def identity_map(num_modes: int) -> SymplecticMap:
    return SymplecticMap(np.eye(2 * num_modes))


def squeezer(mode: int, r: float, num_modes: int = 1) -> SymplecticMap:
    """Single-mode squeezer; x variance scales by exp(-2r), p by exp(2r)."""
    _check_mode(mode, num_modes)
    if not np.isfinite(r):
        raise ValueError("squeezing must be finite")
    m = np.eye(2 * num_modes)
    m[2 * mode, 2 * mode] = np.exp(-r)
    m[2 * mode + 1, 2 * mode + 1] = np.exp(r)
    return SymplecticMap(m)


def beam_splitter(i: int, j: int, tau: float, num_modes: int = 2) -> SymplecticMap:
    """Real beam splitter of transmissivity ``tau`` on modes i and j.

    ``x_i' = sqrt(tau) x_i + sqrt(1-tau) x_j`` and
    ``x_j' = sqrt(1-tau) x_i - sqrt(tau) x_j``; the p quadratures transform
    the same way.
    """
    _check_mode(i, num_modes)
    _check_mode(j, num_modes)
    if i == j:
        raise ValueError("beam splitter needs two distinct modes")
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"transmissivity {tau} outside [0, 1]")
    t, s = np.sqrt(tau), np.sqrt(1.0 - tau)
    m = np.eye(2 * num_modes)
    for q in range(2):
        a, b = 2 * i + q, 2 * j + q
        m[a, a], m[a, b] = t, s
        m[b, a], m[b, b] = s, -t
    return SymplecticMap(m)


def apply_symplectic(state: GaussianState, smap: SymplecticMap) -> GaussianState:
    m = smap.matrix
    if m.shape[1] != state.mean.size:
        raise ValueError(f"map acts on {m.shape[1]} variables, state has {state.mean.size}")
    return GaussianState(m @ state.mean + smap.shift, m @ state.cov @ m.T)


def tensor(a: GaussianState, b: GaussianState) -> GaussianState:
    n, k = a.mean.size, b.mean.size
    cov = np.zeros((n + k, n + k))
    cov[:n, :n] = a.cov
    cov[n:, n:] = b.cov
    return GaussianState(np.concatenate([a.mean, b.mean]), cov)


def partial_trace(state: GaussianState, keep) -> GaussianState:
    """Reduced state on the modes listed in ``keep`` (in that order)."""
    keep = list(keep)
    if not keep:
        raise ValueError("keep must name at least one mode")
    for mode in keep:
        _check_mode(mode, state.num_modes)
    idx = np.array([[2 * k, 2 * k + 1] for k in keep]).ravel()
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)])


def displace(state: GaussianState, mode: int, dx: float, dp: float) -> GaussianState:
    _check_mode(mode, state.num_modes)
    mean = state.mean.copy()
    mean[2 * mode] += dx
    mean[2 * mode + 1] += dp
    return GaussianState(mean, state.cov)


def linear_form_stats(state: GaussianState, xcoeffs, pcoeffs):
    """Mean and variance of ``sum_i c_i x_i`` and ``sum_i d_i p_i``.

    Returns
    -------
    (mean_x, var_x, mean_p, var_p)
    """
    xcoeffs = np.asarray(xcoeffs, dtype=float)
    pcoeffs = np.asarray(pcoeffs, dtype=float)
    n = state.num_modes
    if xcoeffs.shape != (n,) or pcoeffs.shape != (n,):
        raise ValueError(f"coefficient vectors must have length {n}")
    u = np.zeros(2 * n)
    v = np.zeros(2 * n)
    u[0::2] = xcoeffs
    v[1::2] = pcoeffs
    return (
        float(u @ state.mean),
        float(u @ state.cov @ u),
        float(v @ state.mean),
        float(v @ state.cov @ v),
    )


def duan_zeta(state: GaussianState, i: int, j: int) -> float:
    """EPR variance sum Var(x_i - x_j) + Var(p_i + p_j); 4 for the vacuum."""
    _check_mode(i, state.num_modes)
    _check_mode(j, state.num_modes)
    if i == j:
        raise ValueError("duan_zeta needs two distinct modes")
    c = np.zeros(state.num_modes)
    d = np.zeros(state.num_modes)
    c[i], c[j] = 1.0, -1.0
    d[i], d[j] = 1.0, 1.0
    _, vx, _, vp = linear_form_stats(state, c, d)
    return vx + vp


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    n = cov.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ cov))
    return np.sort(ev)[::2]


def log_negativity(state: GaussianState) -> float:
    """Logarithmic negativity (base 2) of a two-mode Gaussian state."""
    if state.num_modes != 2:
        raise ValueError("log_negativity is defined here for two-mode states only")
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    nu = symplectic_eigenvalues(flip @ state.cov @ flip)[0]
    return max(0.0, float(-np.log2(nu)))


def gaussian_overlap(a: GaussianState, b: GaussianState) -> float:
    """Tr[rho_a rho_b] for two Gaussian states on the same number of modes."""
    if a.num_modes != b.num_modes:
        raise ValueError("states must have the same number of modes")
    total = a.cov + b.cov
    delta = a.mean - b.mean
    det = np.linalg.det(total)
    if det <= 0:
        raise np.linalg.LinAlgError("sum of covariances is singular")
    expo = -0.5 * delta @ np.linalg.solve(total, delta)
    return float(2.0**a.num_modes * np.exp(expo) / np.sqrt(det))

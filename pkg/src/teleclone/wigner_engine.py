"""
Wigner functions of the form scale * polynomial * Gaussian kernel.

A ``PolyGaussian`` represents

    W(xi) = scale * P(xi - mu) * G_gamma(xi - mu),

where ``G_gamma`` is the normalized Gaussian density with covariance
``gamma``. With vacuum variance 1 the vacuum is ``P = 1`` and ``gamma = I``,
that is ``W = exp(-(x^2 + p^2)/2) / (2 pi)``. The family is closed under
ladder operators, linear maps with marginalization, and tensor products, and
every integral reduces to Gaussian moments of polynomials.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .phase_space import GaussianState
from .polynomial import Polynomial, gaussian_moment

__all__ = [
    "PolyGaussian",
    "Polynomial",
    "gaussian_moment",
    "lift_gaussian",
    "trace",
    "normalize",
    "evaluate",
    "tensor",
    "second_moments",
    "linear_pushforward",
    "ladder_superop",
    "overlap",
    "raw_moment",
    "OVERLAP_PREFACTOR",
]

# Tr[rho sigma] = (4 pi)^N * integral of W_rho W_sigma in vacuum-1 units
OVERLAP_PREFACTOR = 4.0 * np.pi


@dataclass(frozen=True, eq=False)
class PolyGaussian:
    """Quasi-probability distribution ``scale * poly(xi - mu) * G_gamma(xi - mu)``.

    Parameters
    ----------
    mu : array of shape (2N,)
    gamma : array of shape (2N, 2N)
        Symmetric positive-definite kernel covariance.
    poly : Polynomial
        Polynomial in the 2N centred phase-space variables.
    scale : float
    """

    mu: np.ndarray
    gamma: np.ndarray
    poly: Polynomial
    scale: float = 1.0

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float).reshape(-1)
        gamma = np.asarray(self.gamma, dtype=float)
        if mu.size == 0 or mu.size % 2:
            raise ValueError("mu must have even, non-zero length")
        if gamma.shape != (mu.size, mu.size):
            raise ValueError("gamma shape does not match mu")
        if self.poly.nvars != mu.size:
            raise ValueError("polynomial variable count does not match mu")
        gamma = 0.5 * (gamma + gamma.T)
        mu.setflags(write=False)
        gamma.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "scale", float(self.scale))

    @property
    def num_modes(self) -> int:
        return self.mu.size // 2

    @property
    def nvars(self) -> int:
        return self.mu.size


def lift_gaussian(state: GaussianState) -> PolyGaussian:
    """Wigner function of a Gaussian state: constant polynomial, kernel = cov."""
    n = state.mean.size
    return PolyGaussian(state.mean, state.cov, Polynomial.constant(1.0, n))


def trace(w: PolyGaussian) -> float:
    """Full phase-space integral of ``w``."""
    return w.scale * w.poly.expectation(w.gamma)


def normalize(w: PolyGaussian):
    """Rescale to unit trace.

    Returns
    -------
    (PolyGaussian, float)
        The normalized distribution and the trace it was divided by.
    """
    t = trace(w)
    if not t > 0.0:
        raise ValueError(f"non-positive trace {t}; the construction is unphysical")
    return PolyGaussian(w.mu, w.gamma, w.poly, w.scale / t), t


def _gaussian_density(y: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    n = gamma.shape[0]
    sol = np.linalg.solve(gamma, y.T).T
    quad = np.einsum("ij,ij->i", y, sol)
    _, logdet = np.linalg.slogdet(gamma)
    return np.exp(-0.5 * quad - 0.5 * logdet - 0.5 * n * np.log(2 * np.pi))


def evaluate(w: PolyGaussian, point) -> np.ndarray | float:
    """Value of the quasi-probability at one point or an array of points."""
    pts = np.asarray(point, dtype=float)
    single = pts.ndim == 1
    y = np.atleast_2d(pts) - w.mu
    vals = w.scale * w.poly.evaluate(y) * _gaussian_density(y, w.gamma)
    return float(vals[0]) if single else vals


def tensor(a: PolyGaussian, b: PolyGaussian) -> PolyGaussian:
    n, k = a.nvars, b.nvars
    gamma = np.zeros((n + k, n + k))
    gamma[:n, :n] = a.gamma
    gamma[n:, n:] = b.gamma
    poly = a.poly.embed(n + k, np.arange(n)) * b.poly.embed(n + k, np.arange(n, n + k))
    return PolyGaussian(np.concatenate([a.mu, b.mu]), gamma, poly, a.scale * b.scale)


def second_moments(w: PolyGaussian):
    """Mean vector and covariance matrix of the quasi-distribution.

    Gaussian integration by parts gives ``E[y_i P] = (gamma grad H)_i`` and
    ``E[y_i y_j P] = gamma_ij H + (gamma Hess H gamma)_ij`` at the origin,
    where ``H`` is the Gaussian smoothing of ``P``. One smoothing pass
    therefore yields every first and second moment.
    """
    n = w.nvars
    smoothed = w.poly.smooth(w.gamma)
    t = smoothed.constant_term()
    if t == 0.0:
        raise ValueError("distribution has zero trace")
    grad = np.zeros(n)
    hess = np.zeros((n, n))
    for e, c in zip(smoothed.exps, smoothed.coeffs):
        deg = e.sum()
        if deg == 1:
            grad[np.argmax(e)] = c
        elif deg == 2:
            idx = np.flatnonzero(e)
            if idx.size == 1:
                hess[idx[0], idx[0]] = 2.0 * c
            else:
                hess[idx[0], idx[1]] = hess[idx[1], idx[0]] = c
    g = w.gamma
    m1 = g @ grad / t
    m2 = g + g @ hess @ g / t
    cov = m2 - np.outer(m1, m1)
    return w.mu + m1, 0.5 * (cov + cov.T)


def raw_moment(w: PolyGaussian, exponents) -> float:
    """Phase-space moment ``integral of prod_i xi_i**k_i W(xi)``."""
    exps = np.asarray(exponents, dtype=np.int64).reshape(1, -1)
    if exps.shape[1] != w.nvars:
        raise ValueError("need one exponent per phase-space variable")
    mono = Polynomial(exps, [1.0], w.nvars).shift(w.mu)
    return w.scale * (w.poly * mono).expectation(w.gamma)


def _conditional_push(w: PolyGaussian, a: np.ndarray, b: np.ndarray) -> PolyGaussian:
    """Law of ``eta = a xi + b`` by Gaussian conditioning on ``a y = z``."""
    g = w.gamma
    gz = a @ g @ a.T
    gain = np.linalg.solve(gz, a @ g).T  # gamma a^T gz^{-1}
    gcond = g - gain @ a @ g
    act = w.poly.active_vars()
    if act.size == 0:
        poly = Polynomial.constant(w.poly.constant_term(), a.shape[0])
    else:
        sub = w.poly.restrict(act)
        smoothed = sub.smooth(gcond[np.ix_(act, act)])
        poly = smoothed.substitute(gain[act])
    return PolyGaussian(a @ w.mu + b, gz, poly, w.scale)


def linear_pushforward(w: PolyGaussian, a, b=None, *, completion=None) -> PolyGaussian:
    """Distribution of ``eta = a @ xi + b``.

    Parameters
    ----------
    w : PolyGaussian
    a : array of shape (2M, 2N)
        Full row rank.
    b : array of shape (2M,), optional
    completion : array of shape (2N - 2M, 2N), optional
        Rows completing ``a`` to an invertible matrix. When given, the state
        is pulled back through the completed map and the complementary
        coordinates are integrated out explicitly. When omitted the
        completion orthogonal to ``a`` in the kernel metric is used
        implicitly, which reduces to a single Gaussian conditioning step. The
        result does not depend on the choice.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    n = w.nvars
    if a.shape[1] != n:
        raise ValueError(f"map acts on {a.shape[1]} variables, state has {n}")
    if a.shape[0] % 2:
        raise ValueError("map must produce an even number of phase variables")
    if np.linalg.matrix_rank(a) < a.shape[0]:
        raise ValueError("linear map is rank deficient")
    b = np.zeros(a.shape[0]) if b is None else np.asarray(b, dtype=float)
    if completion is None:
        return _conditional_push(w, a, b)
    comp = np.atleast_2d(np.asarray(completion, dtype=float))
    full = np.vstack([a, comp])
    if full.shape != (n, n) or np.linalg.matrix_rank(full) < n:
        raise ValueError("completion does not make the map invertible")
    # pull back: zeta = full @ y with y = xi - mu; P(y) = P(full^{-1} zeta)
    inv = np.linalg.inv(full)
    pulled = PolyGaussian(
        np.concatenate([a @ w.mu + b, comp @ w.mu]),
        full @ w.gamma @ full.T,
        w.poly.substitute(inv),
        w.scale,
    )
    keep = np.zeros((a.shape[0], n))
    keep[:, : a.shape[0]] = np.eye(a.shape[0])
    return _conditional_push(pulled, keep, np.zeros(a.shape[0]))


def ladder_superop(w: PolyGaussian, mode: int, kind: str):
    """Apply ``rho -> a rho a^dag`` (``kind='subtract'``) or ``a^dag rho a`` (``'add'``).

    In vacuum-1 units the Wigner images are

        a rho a^dag  <->  [(x + d_x)^2 + (p + d_p)^2] W / 4,
        a^dag rho a  <->  [(x - d_x)^2 + (p - d_p)^2] W / 4,

    and on ``P G`` the derivative acts as ``d_i (P G) = (d_i P - (gamma^{-1} y)_i P) G``,
    so the result stays in the family with the same kernel.

    Returns
    -------
    (PolyGaussian, float)
        The unnormalized image and its trace.
    """
    if kind not in ("subtract", "add"):
        raise ValueError("kind must be 'subtract' or 'add'")
    if not 0 <= mode < w.num_modes:
        raise IndexError(f"mode {mode} out of range for {w.num_modes} modes")
    sign = 1.0 if kind == "subtract" else -1.0
    prec = np.linalg.inv(w.gamma)
    n = w.nvars

    def shifted(poly: Polynomial, i: int) -> Polynomial:
        # (xi_i +/- d_i) acting on poly * G, expressed as new poly * G
        form = -sign * prec[i]
        form = form.copy()
        form[i] += 1.0
        return poly.mul_linear(form, w.mu[i]) + sign * poly.diff(i)

    total = Polynomial.zero(n)
    for i in (2 * mode, 2 * mode + 1):
        total = total + shifted(shifted(w.poly, i), i)
    out = PolyGaussian(w.mu, w.gamma, total, 0.25 * w.scale)
    weight = trace(out)
    if not weight > 1e-14:
        raise ValueError(f"{kind} on mode {mode} gives zero weight")
    return out, weight


def overlap(w1: PolyGaussian, w2: PolyGaussian, *, prefactor: float = OVERLAP_PREFACTOR) -> float:
    """Tr[rho_1 rho_2] = prefactor^N * integral of W_1 W_2.

    The product of the two kernels is a Gaussian with covariance
    ``(g1^{-1} + g2^{-1})^{-1}`` times ``G_{g1 + g2}(mu1 - mu2)``, so the
    integral is a Gaussian expectation of ``P_1 P_2`` shifted to the product
    mean.
    """
    if w1.nvars != w2.nvars:
        raise ValueError("distributions must have the same number of modes")
    g1, g2 = w1.gamma, w2.gamma
    gsum = g1 + g2
    delta = w1.mu - w2.mu
    # product mean: mu1 + g1 gsum^{-1} (mu2 - mu1)
    mstar = w1.mu - g1 @ np.linalg.solve(gsum, delta)
    gstar = g1 @ np.linalg.solve(gsum, g2)
    gstar = 0.5 * (gstar + gstar.T)
    prod = w1.poly.shift(mstar - w1.mu) * w2.poly.shift(mstar - w2.mu)
    integral = prod.expectation(gstar) * _gaussian_density(delta[None, :], gsum)[0]
    return float(prefactor**w1.num_modes * w1.scale * w2.scale * integral)

"""Sparse real polynomials with vectorized arithmetic, plus Gaussian moments."""
from __future__ import annotations

import math

import numpy as np

MAX_DEGREE = 64


def _combine(exps: np.ndarray, coeffs: np.ndarray):
    """Merge duplicate monomials and drop exact zeros; rows come back sorted."""
    if exps.shape[0] == 0:
        return exps, coeffs
    n = exps.shape[1]
    if n == 0:
        return exps[:1], np.array([coeffs.sum()])
    base = int(exps.max()) + 1
    if n * math.log2(max(base, 2)) < 62:
        keys = exps @ (base ** np.arange(n - 1, -1, -1, dtype=np.int64))
        _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
        uniq = exps[first]
    else:
        uniq, inv = np.unique(exps, axis=0, return_inverse=True)
    summed = np.bincount(inv.ravel(), weights=coeffs, minlength=uniq.shape[0])
    keep = summed != 0.0
    return uniq[keep], summed[keep]


class Polynomial:
    """Real polynomial in ``nvars`` variables, stored as exponent rows and coefficients."""

    __slots__ = ("exps", "coeffs", "nvars")

    def __init__(self, exps, coeffs, nvars: int | None = None, *, canonical: bool = False):
        coeffs = np.asarray(coeffs, dtype=float).reshape(-1)
        exps = np.asarray(exps, dtype=np.int64)
        if nvars is None:
            nvars = exps.shape[1]
        exps = exps.reshape(-1, nvars)
        if exps.shape[0] != coeffs.shape[0]:
            raise ValueError("one coefficient per monomial required")
        if exps.size and exps.min() < 0:
            raise ValueError("negative exponent")
        if not canonical:
            exps, coeffs = _combine(exps, coeffs)
        if exps.shape[0] and exps.sum(axis=1).max() > MAX_DEGREE:
            raise OverflowError(f"polynomial degree exceeds the limit of {MAX_DEGREE}")
        self.exps = exps
        self.coeffs = coeffs
        self.nvars = nvars

    # construction helpers

    @classmethod
    def zero(cls, nvars: int) -> Polynomial:
        return cls(np.zeros((0, nvars), dtype=np.int64), np.zeros(0), nvars, canonical=True)

    @classmethod
    def constant(cls, value: float, nvars: int) -> Polynomial:
        return cls(np.zeros((1, nvars), dtype=np.int64), [value], nvars)

    @classmethod
    def variable(cls, index: int, nvars: int) -> Polynomial:
        e = np.zeros((1, nvars), dtype=np.int64)
        e[0, index] = 1
        return cls(e, [1.0], nvars)

    @classmethod
    def linear(cls, coeffs, const: float = 0.0) -> Polynomial:
        coeffs = np.asarray(coeffs, dtype=float)
        n = coeffs.size
        exps = np.vstack([np.zeros((1, n), dtype=np.int64), np.eye(n, dtype=np.int64)])
        return cls(exps, np.concatenate([[const], coeffs]), n)

    @classmethod
    def from_dict(cls, terms: dict, nvars: int) -> Polynomial:
        if not terms:
            return cls.zero(nvars)
        return cls(np.array(list(terms.keys())), np.array(list(terms.values())), nvars)

    def to_dict(self) -> dict:
        return {tuple(int(k) for k in e): float(c) for e, c in zip(self.exps, self.coeffs)}

    # basic properties

    def __len__(self) -> int:
        return self.coeffs.size

    @property
    def degree(self) -> int:
        return int(self.exps.sum(axis=1).max()) if len(self) else 0

    def is_zero(self) -> bool:
        return len(self) == 0

    def is_constant(self) -> bool:
        return len(self) == 0 or (len(self) == 1 and not self.exps.any())

    def constant_term(self) -> float:
        if len(self) and not self.exps[0].any():
            return float(self.coeffs[0])
        return 0.0

    def active_vars(self) -> np.ndarray:
        return np.flatnonzero(self.exps.any(axis=0)) if len(self) else np.zeros(0, dtype=int)

    def __repr__(self) -> str:
        return f"Polynomial(nvars={self.nvars}, terms={len(self)}, degree={self.degree})"

    # arithmetic

    def _check(self, other: Polynomial) -> None:
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return self + Polynomial.constant(float(other), self.nvars)
        self._check(other)
        return Polynomial(
            np.vstack([self.exps, other.exps]),
            np.concatenate([self.coeffs, other.coeffs]),
            self.nvars,
        )

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.exps, -self.coeffs, self.nvars, canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            other = float(other)
            if other == 0.0:
                return Polynomial.zero(self.nvars)
            return Polynomial(self.exps, self.coeffs * other, self.nvars, canonical=True)
        self._check(other)
        if len(self) == 0 or len(other) == 0:
            return Polynomial.zero(self.nvars)
        if len(self) < len(other):
            small, big = self, other
        else:
            small, big = other, self
        # chunk over the smaller factor to bound the outer-product size
        step = max(1, 4_000_000 // max(1, len(big) * max(1, self.nvars)))
        exps, coeffs = [], []
        for start in range(0, len(small), step):
            e = small.exps[start:start + step]
            c = small.coeffs[start:start + step]
            ee = (e[:, None, :] + big.exps[None, :, :]).reshape(-1, self.nvars)
            cc = np.outer(c, big.coeffs).ravel()
            ee, cc = _combine(ee, cc)
            exps.append(ee)
            coeffs.append(cc)
        return Polynomial(np.vstack(exps), np.concatenate(coeffs), self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        out = Polynomial.constant(1.0, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, index: int) -> Polynomial:
        k = self.exps[:, index]
        mask = k > 0
        exps = self.exps[mask].copy()
        exps[:, index] -= 1
        return Polynomial(exps, self.coeffs[mask] * k[mask], self.nvars)

    def mul_var(self, index: int) -> Polynomial:
        exps = self.exps.copy()
        exps[:, index] += 1
        return Polynomial(exps, self.coeffs, self.nvars, canonical=True)

    def mul_linear(self, coeffs, const: float = 0.0) -> Polynomial:
        """Multiply by ``const + sum_i coeffs[i] * y_i``."""
        coeffs = np.asarray(coeffs, dtype=float)
        parts_e = [self.exps] if const != 0.0 else []
        parts_c = [self.coeffs * const] if const != 0.0 else []
        for i in np.flatnonzero(coeffs):
            e = self.exps.copy()
            e[:, i] += 1
            parts_e.append(e)
            parts_c.append(self.coeffs * coeffs[i])
        if not parts_e:
            return Polynomial.zero(self.nvars)
        return Polynomial(np.vstack(parts_e), np.concatenate(parts_c), self.nvars)

    def prune(self, tol: float) -> Polynomial:
        keep = np.abs(self.coeffs) > tol
        return Polynomial(self.exps[keep], self.coeffs[keep], self.nvars, canonical=True)

    # variable bookkeeping

    def embed(self, nvars: int, positions) -> Polynomial:
        """Re-express in ``nvars`` variables, variable i moving to ``positions[i]``."""
        positions = np.asarray(positions, dtype=int)
        exps = np.zeros((len(self), nvars), dtype=np.int64)
        exps[:, positions] = self.exps
        return Polynomial(exps, self.coeffs, nvars)

    def restrict(self, variables) -> Polynomial:
        """Keep only the listed variables; the others must not appear."""
        variables = np.asarray(variables, dtype=int)
        others = np.setdiff1d(np.arange(self.nvars), variables)
        if len(self) and others.size and self.exps[:, others].any():
            raise ValueError("polynomial depends on dropped variables")
        return Polynomial(self.exps[:, variables], self.coeffs, variables.size)

    # evaluation and transformation

    def evaluate(self, points) -> np.ndarray | float:
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[1] != self.nvars:
            raise ValueError(f"points must have {self.nvars} coordinates")
        out = np.zeros(pts.shape[0])
        if len(self):
            maxe = self.exps.max(axis=0)
            step = max(1, 2_000_000 // len(self))
            for start in range(0, pts.shape[0], step):
                chunk = pts[start:start + step]
                acc = np.ones((chunk.shape[0], len(self)))
                for v in range(self.nvars):
                    if maxe[v] == 0:
                        continue
                    table = chunk[:, v:v + 1] ** np.arange(maxe[v] + 1)
                    acc *= table[:, self.exps[:, v]]
                out[start:start + step] = acc @ self.coeffs
        return float(out[0]) if single else out

    def smooth(self, cov) -> Polynomial:
        """Gaussian smoothing ``y -> E[P(y + u)]`` with ``u ~ N(0, cov)``.

        Computed exactly as ``exp(0.5 * d^T cov d) P``; the series stops after
        ``degree // 2`` terms.
        """
        cov = np.asarray(cov, dtype=float)
        act = self.active_vars()
        if act.size == 0:
            return self
        sub = self.restrict(act)
        c = cov[np.ix_(act, act)]
        pairs = [
            (i, j, (0.5 if i == j else 1.0) * c[i, j])
            for i in range(act.size)
            for j in range(i, act.size)
            if c[i, j] != 0.0
        ]
        total = sub
        term = sub
        for k in range(1, sub.degree // 2 + 1):
            pieces_e, pieces_c = [], []
            for i, j, w in pairs:
                ki = term.exps[:, i]
                if i == j:
                    mask = ki >= 2
                    factor = ki * (ki - 1)
                else:
                    kj = term.exps[:, j]
                    mask = (ki > 0) & (kj > 0)
                    factor = ki * kj
                if not mask.any():
                    continue
                e = term.exps[mask].copy()
                e[:, i] -= 1
                e[:, j] -= 1
                pieces_e.append(e)
                pieces_c.append(term.coeffs[mask] * factor[mask] * (w / k))
            if not pieces_e:
                break
            term = Polynomial(np.vstack(pieces_e), np.concatenate(pieces_c), sub.nvars)
            total = total + term
        return total.embed(self.nvars, act)

    def expectation(self, cov, mean=None) -> float:
        """E[P(y)] for ``y ~ N(mean, cov)``."""
        smoothed = self.smooth(cov)
        if mean is None or not np.any(mean):
            return smoothed.constant_term()
        return float(smoothed.evaluate(np.asarray(mean, dtype=float)))

    def substitute(self, matrix, shift=None) -> Polynomial:
        """Return the polynomial ``z -> P(matrix @ z + shift)``.

        ``matrix`` has shape (nvars, m); the result is a polynomial in m
        variables.
        """
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        if matrix.shape[0] != self.nvars:
            raise ValueError("substitution matrix must have one row per variable")
        m = matrix.shape[1]
        shift = np.zeros(self.nvars) if shift is None else np.asarray(shift, dtype=float)
        n = self.nvars
        # work in the joint space (y, z); y columns are eliminated one at a time
        joint = Polynomial(
            np.hstack([self.exps, np.zeros((len(self), m), dtype=np.int64)]),
            self.coeffs,
            n + m,
            canonical=True,
        )
        for i in self.active_vars():
            form = Polynomial.linear(np.concatenate([np.zeros(n), matrix[i]]), shift[i])
            ki = joint.exps[:, i]
            pieces = []
            power = Polynomial.constant(1.0, n + m)
            for k in range(int(ki.max()) + 1):
                if k:
                    power = power * form
                mask = ki == k
                if not mask.any():
                    continue
                e = joint.exps[mask].copy()
                e[:, i] = 0
                group = Polynomial(e, joint.coeffs[mask], n + m, canonical=True)
                pieces.append(group if k == 0 else group * power)
            joint = pieces[0]
            for p in pieces[1:]:
                joint = joint + p
        return Polynomial(joint.exps[:, n:], joint.coeffs, m)

    def shift(self, offset) -> Polynomial:
        """Return ``y -> P(y + offset)``."""
        offset = np.asarray(offset, dtype=float)
        if not offset.any():
            return self
        return self.substitute(np.eye(self.nvars), offset)


def gaussian_moment(gamma, exponents, *, max_degree: int = MAX_DEGREE) -> float:
    """E[prod_i y_i**k_i] for ``y ~ N(0, gamma)`` via the Isserlis recursion.

    Uses ``E[y_i f(y)] = sum_j gamma_ij E[d_j f(y)]`` with memoization over
    exponent tuples, so the cost is polynomial in the degree rather than the
    double-factorial count of pairings.
    """
    gamma = np.asarray(gamma, dtype=float)
    k = tuple(int(v) for v in exponents)
    if len(k) != gamma.shape[0]:
        raise ValueError("exponent vector length must match the covariance")
    if any(v < 0 for v in k):
        raise ValueError("negative exponent")
    if sum(k) > max_degree:
        raise OverflowError(f"moment degree {sum(k)} exceeds the limit of {max_degree}")
    memo: dict = {}

    def rec(e: tuple) -> float:
        total = sum(e)
        if total == 0:
            return 1.0
        if total % 2:
            return 0.0
        if e in memo:
            return memo[e]
        i = next(idx for idx, v in enumerate(e) if v)
        base = list(e)
        base[i] -= 1
        acc = 0.0
        for j, kj in enumerate(base):
            if kj == 0 or gamma[i, j] == 0.0:
                continue
            nxt = list(base)
            nxt[j] -= 1
            acc += gamma[i, j] * kj * rec(tuple(nxt))
        memo[e] = acc
        return acc

    return rec(k)

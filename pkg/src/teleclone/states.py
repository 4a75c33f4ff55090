"""Input and resource states: coherent, squeezed, TMSV, PS/PA-n,m and the asymmetric chain."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .phase_space import (
    GaussianState,
    apply_symplectic,
    beam_splitter,
    squeezer,
    vacuum_state,
)
from .wigner_engine import PolyGaussian, ladder_superop, lift_gaussian, normalize

RESOURCE_FAMILIES = ("tmsv", "ps", "pa", "asym")


@dataclass(frozen=True)
class ResourceSpec:
    """Entangled resource description.

    Parameters
    ----------
    family : {'tmsv', 'ps', 'pa', 'asym'}
    r : float
        Squeezing amplitude, non-negative.
    photons : tuple of int
        ``(n1, n2)`` photons subtracted or added on the sender (S) and
        receiver (R) modes; ps/pa only.
    taus : tuple of float
        Splitter transmissivities; asym only.
    """

    family: str = "tmsv"
    r: float = 0.0
    photons: tuple = (0, 0)
    taus: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.family not in RESOURCE_FAMILIES:
            raise ValueError(f"unknown resource family {self.family!r}")
        if not np.isfinite(self.r) or self.r < 0:
            raise ValueError("squeezing r must be finite and non-negative")
        n1, n2 = (int(v) for v in self.photons)
        object.__setattr__(self, "photons", (n1, n2))
        if self.family in ("ps", "pa"):
            if n1 < 0 or n2 < 0 or n1 + n2 == 0:
                raise ValueError("ps/pa need non-negative photon numbers, not both zero")
        elif n1 or n2:
            raise ValueError(f"{self.family} takes no photon numbers")
        taus = tuple(float(t) for t in self.taus)
        object.__setattr__(self, "taus", taus)
        if self.family == "asym":
            if not taus:
                raise ValueError("asym needs at least one transmissivity")
            if any(not 0.0 <= t <= 1.0 for t in taus):
                raise ValueError("transmissivities must lie in [0, 1]")
        elif taus:
            raise ValueError(f"{self.family} takes no transmissivities")

    def with_r(self, r: float) -> ResourceSpec:
        return replace(self, r=float(r))

    @property
    def gaussian(self) -> bool:
        return self.family in ("tmsv", "asym")

    def label(self) -> str:
        if self.family in ("ps", "pa"):
            return f"{self.family}:{self.photons[0]},{self.photons[1]}"
        if self.family == "asym":
            return "asym:" + ",".join(f"{t:g}" for t in self.taus)
        return self.family

    @classmethod
    def parse(cls, text: str, r: float = 0.0) -> ResourceSpec:
        """Parse ``tmsv``, ``ps:1,1``, ``pa:1,0`` or ``asym:0.5,0.05,...``."""
        head, _, tail = text.strip().lower().partition(":")
        try:
            if head == "tmsv" and not tail:
                return cls("tmsv", r)
            if head in ("ps", "pa"):
                n = tuple(int(v) for v in tail.split(","))
                if len(n) != 2:
                    raise ValueError
                return cls(head, r, n)
            if head == "asym":
                return cls("asym", r, taus=tuple(float(v) for v in tail.split(",")))
        except ValueError as exc:
            raise ValueError(f"cannot parse resource {text!r}: {exc}") from None
        raise ValueError(f"cannot parse resource {text!r}")


@dataclass(frozen=True)
class InputSpec:
    """State to be cloned.

    Parameters
    ----------
    kind : {'coherent', 'squeezed'}
    alpha : complex
        Displacement; the mean is ``(2 Re alpha, 2 Im alpha)``.
    s : float
        Squeezing of the input, squeezed kind only.
    axis : {'x', 'p'}
        Quadrature whose variance is reduced.
    """

    kind: str = "coherent"
    alpha: complex = 0j
    s: float = 0.0
    axis: str = "x"

    def __post_init__(self):
        if self.kind not in ("coherent", "squeezed"):
            raise ValueError(f"unknown input kind {self.kind!r}")
        if self.axis not in ("x", "p"):
            raise ValueError("axis must be 'x' or 'p'")
        if not np.isfinite(self.s) or self.s < 0:
            raise ValueError("input squeezing must be finite and non-negative")
        if self.kind == "coherent" and self.s:
            raise ValueError("coherent input takes no squeezing")
        if not np.isfinite(complex(self.alpha)):
            raise ValueError("alpha must be finite")
        object.__setattr__(self, "alpha", complex(self.alpha))

    def label(self) -> str:
        a = self.alpha
        if self.kind == "coherent":
            return f"coherent:{a.real:g},{a.imag:g}"
        tail = f",{a.real:g},{a.imag:g}" if a else ""
        return f"squeezed:{self.s:g}{tail}" + ("" if self.axis == "x" else ":p")

    @classmethod
    def parse(cls, text: str) -> InputSpec:
        """Parse ``coherent:re,im`` or ``squeezed:s[,re,im]`` (append ``:p`` for p-squeezing)."""
        parts = text.strip().lower().split(":")
        head = parts[0]
        try:
            vals = [float(v) for v in parts[1].split(",")] if len(parts) > 1 and parts[1] else []
            axis = parts[2] if len(parts) > 2 else "x"
            if len(parts) > 3:
                raise ValueError("too many fields")
            if head == "coherent" and len(parts) <= 2:
                if len(vals) not in (0, 2):
                    raise ValueError("expected re,im")
                return cls("coherent", complex(*vals) if vals else 0j)
            if head == "squeezed":
                if len(vals) not in (1, 3):
                    raise ValueError("expected s[,re,im]")
                alpha = complex(vals[1], vals[2]) if len(vals) == 3 else 0j
                return cls("squeezed", alpha, vals[0], axis)
        except ValueError as exc:
            raise ValueError(f"cannot parse input {text!r}: {exc}") from None
        raise ValueError(f"cannot parse input {text!r}")


def tmsv(r: float) -> GaussianState:
    """Two-mode squeezed vacuum with x-correlated, p-anticorrelated modes."""
    if r < 0:
        raise ValueError("r must be non-negative")
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    cov = np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])
    return GaussianState(np.zeros(4), cov)


def coherent(alpha: complex) -> GaussianState:
    alpha = complex(alpha)
    return GaussianState(np.array([2 * alpha.real, 2 * alpha.imag]), np.eye(2))


def squeezed_input(s: float, alpha: complex = 0j, axis: str = "x") -> GaussianState:
    """Displaced squeezed vacuum with the ``axis`` quadrature variance ``exp(-2s)``."""
    if s < 0:
        raise ValueError("s must be non-negative")
    lo, hi = np.exp(-2 * s), np.exp(2 * s)
    cov = np.diag([lo, hi] if axis == "x" else [hi, lo])
    alpha = complex(alpha)
    return GaussianState(np.array([2 * alpha.real, 2 * alpha.imag]), cov)


def input_state(spec: InputSpec) -> GaussianState:
    if spec.kind == "coherent":
        return coherent(spec.alpha)
    return squeezed_input(spec.s, spec.alpha, spec.axis)


@lru_cache(maxsize=256)
def _degaussify_cached(family: str, photons: tuple, r: float):
    w = lift_gaussian(tmsv(r))
    kind = "subtract" if family == "ps" else "add"
    weight = 1.0
    for mode, count in enumerate(photons):
        for _ in range(count):
            w, step = ladder_superop(w, mode, kind)
            w, _ = normalize(w)
            weight *= step
    return w, weight


def degaussify(spec: ResourceSpec):
    """Photon-subtracted or -added TMSV.

    ``photons = (n1, n2)`` operations act on the sender mode S (mode 0) and
    the receiver mode R (mode 1).

    Returns
    -------
    (PolyGaussian, float)
        Normalized Wigner function and the product of per-step weights,
        ``|| a^n1 b^n2 |psi> ||^2`` for subtraction.
    """
    if spec.family not in ("ps", "pa"):
        raise ValueError("degaussify needs a ps or pa resource")
    return _degaussify_cached(spec.family, spec.photons, float(spec.r))


def asymmetric_resource(r: float, taus) -> GaussianState:
    """N+1-mode chain resource for N receivers.

    Modes are squeezed alternately (x for modes 1, 3, ..., p for 2, 4, ...,
    counting from one). Splitter k mixes the incoming mode k+1 with the
    running mode; its first port carries the running mode onward and its
    second port becomes receiver k. The running mode after the last splitter
    is the sender's mode N+1.
    """
    taus = [float(t) for t in taus]
    if not taus:
        raise ValueError("need at least one transmissivity")
    if any(not 0.0 <= t <= 1.0 for t in taus):
        raise ValueError("transmissivities must lie in [0, 1]")
    n = len(taus) + 1
    state = vacuum_state(n)
    for k in range(n):
        state = apply_symplectic(state, squeezer(k, r if k % 2 == 0 else -r, n))
    for k, tau in enumerate(taus, start=1):
        state = apply_symplectic(state, beam_splitter(k, k - 1, tau, n))
    return state


def resource_state(spec: ResourceSpec):
    """Gaussian state for tmsv/asym, normalized PolyGaussian for ps/pa."""
    if spec.family == "tmsv":
        return tmsv(spec.r)
    if spec.family == "asym":
        return asymmetric_resource(spec.r, spec.taus)
    return degaussify(spec)[0]


def as_polygaussian(state) -> PolyGaussian:
    return state if isinstance(state, PolyGaussian) else lift_gaussian(state)

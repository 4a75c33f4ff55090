"""
Monte-Carlo phase-space integration by importance sampling from the kernel.

Samples come in fixed-size shards, each with its own counter-based stream
seeded from ``(seed, shard index)``, so estimates do not depend on how shards
are distributed over workers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from ..wigner_engine import OVERLAP_PREFACTOR, PolyGaussian, evaluate

RNG_ALGORITHM = "numpy.random.Philox"
DEFAULT_SAMPLES = 1_000_000
SHARD_SIZE = 1 << 16


@dataclass(frozen=True)
class MCResult:
    estimate: float
    std_error: float
    samples: int
    seed: int
    algorithm: str = RNG_ALGORITHM


def _shard_rng(seed: int, shard: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, shard])))


def _shard_sums(w: PolyGaussian, other, amap, count: int, seed: int, shard: int):
    rng = _shard_rng(seed, shard)
    chol = np.linalg.cholesky(w.gamma)
    y = rng.standard_normal((count, w.nvars)) @ chol.T
    vals = w.scale * w.poly.evaluate(y)
    if other is not None:
        pts = y + w.mu if amap is None else (y + w.mu) @ amap.T
        vals = vals * OVERLAP_PREFACTOR**other.num_modes * evaluate(other, pts)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite integrand value")
    return float(vals.sum()), float(np.sum(vals**2))


def mc_integral(
    w: PolyGaussian,
    other: PolyGaussian | None = None,
    map_matrix=None,
    *,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    workers: int = 1,
) -> MCResult:
    """Estimate ``trace(w)``, or ``overlap(w, other)`` when ``other`` is given.

    With ``map_matrix`` A the estimate is ``overlap(pushforward(w, A), other)``
    computed without forming the pushforward, as
    ``(4 pi)^M * integral of W(xi) W_other(A xi)``.

    Parameters
    ----------
    w : PolyGaussian
        Its kernel is the sampling density.
    other : PolyGaussian, optional
    map_matrix : array of shape (2M, 2N), optional
    samples : int
        At least 1000.
    seed : int
    workers : int
        Parallel jobs; the estimate is identical for any value.

    Returns
    -------
    MCResult
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    amap = None if map_matrix is None else np.atleast_2d(np.asarray(map_matrix, dtype=float))
    if other is not None:
        width = w.nvars if amap is None else amap.shape[0]
        if other.nvars != width or (amap is not None and amap.shape[1] != w.nvars):
            raise ValueError("distributions and map dimensions do not agree")
    counts = [SHARD_SIZE] * (samples // SHARD_SIZE)
    if samples % SHARD_SIZE:
        counts.append(samples % SHARD_SIZE)
    jobs = (delayed(_shard_sums)(w, other, amap, c, seed, i) for i, c in enumerate(counts))
    sums = Parallel(n_jobs=workers)(jobs) if workers > 1 else [job[0](*job[1]) for job in jobs]
    total = sum(s for s, _ in sums)
    total_sq = sum(q for _, q in sums)
    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0)
    return MCResult(mean, float(np.sqrt(var / samples)), samples, seed)

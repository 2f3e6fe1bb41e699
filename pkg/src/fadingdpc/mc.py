"""Seeded, block-structured Monte Carlo estimation over a fading ensemble.

Samples are generated in blocks. Block ``b`` draws from its own stream,
derived from ``(master_seed, b)``, so an estimate depends only on the seed,
the block size and the sample count, never on how blocks are scheduled.
Per-block sums are combined in block order with exact (``math.fsum``)
summation, so serial and parallel runs agree bit for bit.

Functionals are vectorised: they receive a stack of channel matrices of
shape ``(B, N, M)`` and return one value (or one square matrix) per matrix.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ConfigurationError, NumericalError
from .fading import FadingSpec, sample_channels

DEFAULT_SEED = 42
DEFAULT_SAMPLES = 100_000
DEFAULT_BLOCK = 10_000
MAX_CONDITION = 1e12

Functional = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int = DEFAULT_SEED
    block_size: int = DEFAULT_BLOCK

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ConfigurationError("master_seed must be a 64-bit unsigned integer")
        if self.block_size < 1:
            raise ConfigurationError("block_size must be positive")

    def stream(self, block_index: int) -> np.random.Generator:
        """Independent generator for one block (Philox, keyed by seed and block)."""
        ss = np.random.SeedSequence(int(self.master_seed), spawn_key=(int(block_index),))
        return np.random.Generator(np.random.Philox(ss))

    def schedule(self, n: int) -> list[tuple[int, int]]:
        """``(start, size)`` for each block covering ``n`` samples; the last may be short."""
        return [(start, min(self.block_size, n - start)) for start in range(0, n, self.block_size)]


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo mean with its standard error."""

    mean: Union[float, np.ndarray]
    std_error: Union[float, np.ndarray]
    n_samples: int

    def __post_init__(self):
        if self.n_samples < 1:
            raise ConfigurationError("an estimate needs at least one sample")
        if np.any(np.asarray(self.std_error) < 0):
            raise ConfigurationError("std_error must be non-negative")

    def __float__(self):
        return float(self.mean)


def channel_bank(spec: FadingSpec, n: int, seed: SeedSpec = SeedSpec()) -> np.ndarray:
    """All ``n`` channel draws of the seed schedule, shape ``(n, N, M)``."""
    if n < 1:
        raise ConfigurationError("sample count must be at least 1")
    blocks = [sample_channels(spec, size, seed.stream(b)) for b, (_, size) in enumerate(seed.schedule(n))]
    return np.concatenate(blocks, axis=0)


def _block_stats(f: Functional, spec: FadingSpec, seed: SeedSpec, b: int, start: int, size: int):
    H = sample_channels(spec, size, seed.stream(b))
    raw = np.asarray(f(H))
    v = _as_real(raw)
    if v.shape[0] != size:
        raise ConfigurationError(f"functional returned {v.shape[0]} values for {size} samples")
    bad = ~np.isfinite(v.reshape(size, -1)).all(axis=1)
    if bad.any():
        idx = start + int(np.flatnonzero(bad)[0])
        raise NumericalError(f"functional returned a non-finite value at sample {idx}")
    s = np.sum(v, axis=0)
    mean = s / size
    m2 = np.sum((v - mean) ** 2, axis=0)
    return s, mean, m2, np.iscomplexobj(raw)


def _as_real(v) -> np.ndarray:
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return np.stack([v.real, v.imag], axis=-1)
    return v.astype(float)


def _fsum_columns(stack: np.ndarray) -> np.ndarray:
    flat = stack.reshape(stack.shape[0], -1)
    return np.array([math.fsum(col) for col in flat.T]).reshape(stack.shape[1:])


def _estimate(f: Functional, spec: FadingSpec, n: int, seed: SeedSpec, workers: int) -> Estimate:
    if n < 1:
        raise ConfigurationError("sample count must be at least 1")
    if isinstance(seed, (int, np.integer)):
        seed = SeedSpec(int(seed))
    if not spec.is_stochastic:
        # every draw equals the fixed matrix; the mean is the single evaluation
        v = np.asarray(f(spec.fixed[None, ...]))[0]
        if not np.all(np.isfinite(v)):
            raise NumericalError("functional returned a non-finite value at sample 0")
        if v.ndim == 0:
            return Estimate(float(v.real) if np.iscomplexobj(v) else float(v), 0.0, n)
        return Estimate(v, np.zeros(v.shape), n)

    sched = seed.schedule(n)
    jobs = [(b, start, size) for b, (start, size) in enumerate(sched)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(lambda j: _block_stats(f, spec, seed, *j), jobs))
    else:
        stats = [_block_stats(f, spec, seed, *j) for j in jobs]

    sizes = np.array([size for _, _, size in jobs], dtype=float)
    sums = np.stack([st[0] for st in stats])
    means = np.stack([st[1] for st in stats])
    m2s = np.stack([st[2] for st in stats])
    is_complex = any(st[3] for st in stats)
    mean = _fsum_columns(sums) / n
    # Chan et al. pairwise combination of centred second moments, in block order
    spread = sizes.reshape((-1,) + (1,) * (means.ndim - 1)) * (means - mean) ** 2
    m2 = _fsum_columns(m2s) + _fsum_columns(spread)
    var = m2 / (n - 1) if n > 1 else np.zeros_like(m2)
    se = np.sqrt(np.maximum(var, 0.0) / n)
    if is_complex:
        mean = mean[..., 0] + 1j * mean[..., 1]
        se = np.hypot(se[..., 0], se[..., 1])
    if mean.ndim == 0:
        return Estimate(float(mean), float(se), n)
    return Estimate(mean, se, n)


def mc_scalar(f: Functional, spec: FadingSpec, n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec(),
              workers: int = 1) -> Estimate:
    """Estimate ``E[f(H)]`` for a real-valued functional.

    Args:
        f: vectorised functional mapping ``(B, N, M)`` channels to ``(B,)`` reals.
        spec: the fading ensemble.
        n: number of samples.
        seed: seed schedule.
        workers: threads used to evaluate blocks; does not affect the result.

    Returns:
        Estimate with ``std_error = stdev / sqrt(n)``.
    """
    return _estimate(f, spec, n, seed, workers)


def mc_matrix(f: Functional, spec: FadingSpec, n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec(),
              workers: int = 1) -> Estimate:
    """Elementwise estimate of ``E[f(H)]`` for a square-matrix-valued functional."""
    est = _estimate(f, spec, n, seed, workers)
    mean = np.asarray(est.mean)
    if mean.ndim != 2 or mean.shape[0] != mean.shape[1]:
        raise ConfigurationError(f"matrix functional must return square matrices, got shape {mean.shape}")
    return est


def hermitian_inverse(A: np.ndarray, max_condition: float = MAX_CONDITION) -> np.ndarray:
    """Inverse of a Hermitian positive-definite matrix (or stack) via eigh.

    Raises :class:`NumericalError` when any matrix is not positive definite or
    its condition number exceeds ``max_condition``.
    """
    lam, V = np.linalg.eigh(A)
    lo, hi = lam[..., 0], lam[..., -1]
    if np.any(lo <= 0):
        raise NumericalError("matrix to invert is not positive definite")
    cond = hi / lo
    if np.any(cond > max_condition):
        raise NumericalError(f"matrix condition number {np.max(cond):.3e} exceeds {max_condition:.0e}")
    inv = (V / lam[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))
    return 0.5 * (inv + np.conj(np.swapaxes(inv, -1, -2)))

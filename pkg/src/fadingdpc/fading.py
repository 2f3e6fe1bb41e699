"""Fading-channel ensembles and spectral helpers.

Three ensembles are supported, each normalised to unit average power per
entry:

* ``rayleigh_iid``: i.i.d. circularly-symmetric complex Gaussian entries.
* ``nakagami``: Nakagami-m amplitude with uniform phase; single transmit
  antenna, i.i.d. across receive antennas.
* ``deterministic``: a fixed matrix returned on every draw.

Samplers take an explicit :class:`numpy.random.Generator` so that callers
control reproducibility and can derive independent streams per block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError, NumericalError

KINDS = ("rayleigh_iid", "nakagami", "deterministic")

# Gram eigenvalues above -EIG_CLAMP_TOL (relative to the spectral scale) are round-off.
EIG_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class FadingSpec:
    """Channel-distribution descriptor for an ``N x M`` channel."""

    kind: str
    M: int
    N: int
    m: Optional[float] = None
    fixed: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown fading kind {self.kind!r}; expected one of {KINDS}")
        if int(self.M) != self.M or int(self.N) != self.N or self.M < 1 or self.N < 1:
            raise ConfigurationError(f"antenna counts must be positive integers, got M={self.M}, N={self.N}")
        if self.kind == "nakagami":
            if self.m is None or not np.isfinite(self.m) or self.m <= 0:
                raise ConfigurationError(f"nakagami fading needs a shape m > 0, got {self.m}")
            if self.M != 1:
                raise ConfigurationError("nakagami fading is defined for a single transmit antenna (M = 1)")
        elif self.m is not None:
            raise ConfigurationError(f"shape m is only meaningful for nakagami fading, not {self.kind}")
        if self.kind == "deterministic":
            if self.fixed is None:
                raise ConfigurationError("deterministic fading needs a fixed matrix")
            fixed = np.array(self.fixed, dtype=complex)
            if fixed.ndim != 2 or fixed.shape != (self.N, self.M):
                raise ConfigurationError(f"fixed matrix has shape {fixed.shape}, expected {(self.N, self.M)}")
            if not np.all(np.isfinite(fixed)):
                raise ConfigurationError("fixed matrix has non-finite entries")
            fixed.setflags(write=False)
            object.__setattr__(self, "fixed", fixed)
        elif self.fixed is not None:
            raise ConfigurationError(f"a fixed matrix is only meaningful for deterministic fading, not {self.kind}")

    @classmethod
    def rayleigh(cls, M: int = 1, N: int = 1) -> "FadingSpec":
        return cls("rayleigh_iid", M, N)

    @classmethod
    def nakagami(cls, m: float, N: int = 1) -> "FadingSpec":
        return cls("nakagami", 1, N, m=m)

    @classmethod
    def deterministic(cls, fixed) -> "FadingSpec":
        fixed = np.atleast_2d(np.asarray(fixed, dtype=complex))
        return cls("deterministic", fixed.shape[1], fixed.shape[0], fixed=fixed)

    @property
    def is_stochastic(self) -> bool:
        return self.kind != "deterministic"

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "M": self.M, "N": self.N}
        if self.m is not None:
            out["m"] = self.m
        if self.fixed is not None:
            out["fixed_real"] = self.fixed.real.tolist()
            out["fixed_imag"] = self.fixed.imag.tolist()
        return out


def sample_channels(spec: FadingSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` independent channel matrices, shape ``(n, N, M)``."""
    shape = (n, spec.N, spec.M)
    if spec.kind == "deterministic":
        return np.broadcast_to(spec.fixed, shape).copy()
    if spec.kind == "rayleigh_iid":
        g = rng.standard_normal((2,) + shape)
        return (g[0] + 1j * g[1]) * np.sqrt(0.5)
    # Nakagami-m: |h|^2 ~ Gamma(m, 1/m) has unit mean.
    power = rng.gamma(spec.m, 1.0 / spec.m, size=shape)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=shape)
    return np.sqrt(power) * np.exp(1j * phase)


def sample_channel(spec: FadingSpec, rng: np.random.Generator) -> np.ndarray:
    """Draw one ``N x M`` channel matrix from ``spec``."""
    return sample_channels(spec, 1, rng)[0]


def real_equivalent(H: np.ndarray) -> np.ndarray:
    """Real ``2N x 2M`` block form ``[[Re H, -Im H], [Im H, Re H]]``.

    Works on a single matrix or on a stack with leading batch axes.
    """
    H = np.asarray(H)
    if not np.all(np.isfinite(H)):
        raise NumericalError("channel matrix has non-finite entries")
    re, im = np.real(H).astype(float), np.imag(H).astype(float)
    top = np.concatenate([re, -im], axis=-1)
    bottom = np.concatenate([im, re], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def gram(H: np.ndarray) -> np.ndarray:
    """``H^H H`` for a matrix or a stack of matrices."""
    H = np.asarray(H)
    return np.conj(np.swapaxes(H, -1, -2)) @ H


def gram_eigenvalues(H: np.ndarray) -> np.ndarray:
    """Eigenvalues of ``H^H H`` (ascending), clamped at zero.

    Small negative eigenvalues produced by round-off are set to zero; a
    clearly negative eigenvalue means the input was not a valid channel and
    raises :class:`NumericalError`.
    """
    H = np.asarray(H)
    if not np.all(np.isfinite(H)):
        raise NumericalError("channel matrix has non-finite entries")
    try:
        lam = np.linalg.eigvalsh(gram(H))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigen-solver failed: {exc}") from exc
    scale = np.maximum(1.0, np.max(np.abs(lam), axis=-1, keepdims=True))
    if np.any(lam < -EIG_CLAMP_TOL * scale):
        raise NumericalError(f"Gram matrix has a negative eigenvalue {lam.min():.3e}")
    return np.maximum(lam, 0.0)

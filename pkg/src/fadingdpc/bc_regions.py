"""Two-user broadcast-channel rate regions for lattice superposition coding.

User 1 decodes its own codeword treating user 2's as noise; user 2 sees user
1's codeword as dirt known at the transmitter. ``alpha`` is the fraction of
power given to user 1.

Modes:

* ``thm3``: user 1 quasi-static (deterministic ``G``), user 2 ergodic.
* ``thm4``: both users ergodic and independent.
* ``dpc_csit``: white-input dirty-paper coding with non-causal CSIT, where
  the interference at receiver 2 is removed completely.
* ``time_share``: the chord between the single-user maxima.

All points of one sweep share the same channel draws per user (same seed),
so comparisons across modes and across ``alpha`` are made sample set by
sample set. At ``alpha`` in ``{0, 1}`` the non-zero coordinate is computed by
the single-user routine of :mod:`fadingdpc.bounds` so that endpoints agree
with it exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bounds import PowerConfig, lattice_inner, outer_bound
from .errors import ConfigurationError
from .fading import FadingSpec
from .mc import DEFAULT_SAMPLES, Estimate, SeedSpec, hermitian_inverse, mc_matrix, mc_scalar

MODES = ("thm3", "thm4", "dpc_csit", "time_share")


@dataclass(frozen=True)
class BcConfig:
    M: int
    N1: int
    N2: int
    Px: float
    Pw1: float
    Pw2: float
    user1: FadingSpec
    user2: FadingSpec
    alpha_grid: Sequence[float] = field(default=(0.0, 0.25, 0.5, 0.75, 1.0))
    corrected_thm4: bool = True

    def __post_init__(self):
        if (self.user1.N, self.user1.M) != (self.N1, self.M):
            raise ConfigurationError(f"user 1 spec is {self.user1.N}x{self.user1.M}, expected {self.N1}x{self.M}")
        if (self.user2.N, self.user2.M) != (self.N2, self.M):
            raise ConfigurationError(f"user 2 spec is {self.user2.N}x{self.user2.M}, expected {self.N2}x{self.M}")
        if self.Px < 0 or self.Pw1 <= 0 or self.Pw2 <= 0:
            raise ConfigurationError("need Px >= 0 and positive noise powers")
        grid = tuple(float(a) for a in self.alpha_grid)
        if not grid or any(not 0.0 <= a <= 1.0 for a in grid) or list(grid) != sorted(grid):
            raise ConfigurationError("alpha grid must be non-empty, sorted and within [0, 1]")
        object.__setattr__(self, "alpha_grid", grid)

    def user1_cfg(self, Px: float) -> PowerConfig:
        return PowerConfig(Px, 0.0, self.Pw1, self.M, self.N1)

    def user2_cfg(self, Px: float) -> PowerConfig:
        return PowerConfig(Px, 0.0, self.Pw2, self.M, self.N2)


@dataclass(frozen=True)
class RegionPoint:
    alpha: float
    R1: float
    R2: float
    R1_se: float = 0.0
    R2_se: float = 0.0

    def __post_init__(self):
        if self.R1 < 0 or self.R2 < 0:
            raise ConfigurationError("region rates must be non-negative")


@dataclass(frozen=True)
class RegionCurve:
    mode: str
    points: tuple

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown region mode {self.mode!r}")
        if not self.points:
            raise ConfigurationError("a region curve needs at least one point")

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points])


def phi(H, alpha: float, bc: BcConfig) -> np.ndarray:
    """Interference-plus-noise covariance ``(1-alpha) Px/M H H^H + Pw1 I`` at receiver 1."""
    if not 0.0 <= alpha <= 1.0:
        raise ConfigurationError(f"alpha must lie in [0, 1], got {alpha}")
    H = np.asarray(H, dtype=complex)
    N1 = H.shape[-2]
    return (1 - alpha) * bc.Px / bc.M * H @ np.conj(np.swapaxes(H, -1, -2)) + bc.Pw1 * np.eye(N1)


def _user1_gain(alpha: float, bc: BcConfig, extra_noise_scale: float = 1.0):
    """Per-sample ``(alpha Px/M) * scale * H^H Phi^-1 H``."""
    def f(H):
        Phi = phi(H, alpha, bc)
        K = np.conj(np.swapaxes(H, -1, -2)) @ np.linalg.solve(Phi, H)
        K = 0.5 * (K + np.conj(np.swapaxes(K, -1, -2)))
        return alpha * bc.Px / bc.M * extra_noise_scale * K
    return f


def _log2det_eye_plus(K: np.ndarray) -> np.ndarray:
    lam = np.linalg.eigvalsh(K)
    return np.sum(np.log2(1.0 + np.maximum(lam, 0.0)), axis=-1)


def _user2_lattice(alpha: float, bc: BcConfig, n: int, seed: SeedSpec) -> Estimate:
    """``(-log2 det(E[(I + Px/(M Pw2) H^H H)^-1] / (1-alpha)))^+``."""
    if alpha >= 1.0:
        return Estimate(0.0, 0.0, n)
    base = lattice_inner(bc.user2_cfg(bc.Px), bc.user2, n, seed)
    if alpha == 0.0:
        return base
    # undo the clamp: the dirt-free lattice rate is never negative, so base.mean is the raw value
    value = base.mean + bc.M * math.log2(1.0 - alpha)
    return Estimate(max(value, 0.0), base.std_error, n)


def thm3_point(alpha: float, bc: BcConfig, n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec()) -> RegionPoint:
    """Lattice rates with a quasi-static user-1 channel ``G``."""
    if bc.user1.is_stochastic:
        raise ConfigurationError("thm3 needs a deterministic user-1 channel; use thm4 for ergodic users")
    r2 = _user2_lattice(alpha, bc, n, seed)
    if alpha == 0.0:
        r1 = 0.0
    elif alpha == 1.0:
        r1 = outer_bound(bc.user1_cfg(bc.Px), bc.user1, n, seed).mean
    else:
        r1 = float(_log2det_eye_plus(_user1_gain(alpha, bc)(bc.user1.fixed[None])[0]))
    return RegionPoint(alpha, r1, r2.mean, 0.0, r2.std_error)


def thm4_point(alpha: float, bc: BcConfig, n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec()) -> RegionPoint:
    """Lattice rates with both users ergodic.

    ``R1 = (-log2 det E[(I + (alpha Px/M) H1^H Phi^-1 H1)^-1])^+``. With
    ``corrected_thm4=False`` the gain carries an extra ``1/Pw1`` factor.
    """
    r2 = _user2_lattice(alpha, bc, n, seed)
    if alpha == 0.0:
        return RegionPoint(alpha, 0.0, r2.mean, 0.0, r2.std_error)
    scale = 1.0 if bc.corrected_thm4 else 1.0 / bc.Pw1
    if alpha == 1.0 and bc.corrected_thm4:
        r1 = lattice_inner(bc.user1_cfg(bc.Px), bc.user1, n, seed)
        return RegionPoint(alpha, r1.mean, r2.mean, r1.std_error, r2.std_error)
    gain = _user1_gain(alpha, bc, scale)

    def inv(H):
        return hermitian_inverse(np.eye(bc.M) + gain(H))

    E = mc_matrix(inv, bc.user1, n, seed)
    Emean = np.asarray(E.mean)
    lam = np.linalg.eigvalsh(Emean)
    value = -float(np.sum(np.log2(lam)))
    se = 0.0
    if bc.user1.is_stochastic:
        Einv = np.linalg.inv(Emean)
        lin = mc_scalar(lambda H: np.real(np.einsum("ij,bji->b", Einv, inv(H))), bc.user1, n, seed)
        se = math.log2(math.e) * lin.std_error
    return RegionPoint(alpha, max(value, 0.0), r2.mean, se, r2.std_error)


def dpc_csit_point(alpha: float, bc: BcConfig, n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec()) -> RegionPoint:
    """White-input DPC with CSIT: receiver 2 sees no interference."""
    r2 = outer_bound(bc.user2_cfg((1.0 - alpha) * bc.Px), bc.user2, n, seed)
    if alpha == 0.0:
        return RegionPoint(alpha, 0.0, r2.mean, 0.0, r2.std_error)
    if alpha == 1.0:
        r1 = outer_bound(bc.user1_cfg(bc.Px), bc.user1, n, seed)
    else:
        gain = _user1_gain(alpha, bc)
        # a deterministic user 1 collapses to the single plug-in value
        r1 = mc_scalar(lambda H: _log2det_eye_plus(gain(H)), bc.user1, n, seed)
    return RegionPoint(alpha, r1.mean, r2.mean, r1.std_error, r2.std_error)


def time_share_curve(bc: BcConfig, n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec()) -> RegionCurve:
    """Chord from ``(0, R2_max)`` to ``(R1_max, 0)`` sampled on the alpha grid.

    The endpoints are the lattice single-user rates (thm3 when user 1 is
    deterministic, thm4 otherwise).
    """
    point = thm4_point if bc.user1.is_stochastic else thm3_point
    r1_max = point(1.0, bc, n, seed)
    r2_max = point(0.0, bc, n, seed)
    pts = tuple(RegionPoint(a, a * r1_max.R1, (1.0 - a) * r2_max.R2, a * r1_max.R1_se, (1.0 - a) * r2_max.R2_se)
                for a in bc.alpha_grid)
    return RegionCurve("time_share", pts)


def sweep_region(mode: str, bc: BcConfig, n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec()) -> RegionCurve:
    """One region point per alpha of the grid, all on the same channel draws."""
    if mode not in MODES:
        raise ConfigurationError(f"unknown region mode {mode!r}; expected one of {MODES}")
    if mode == "time_share":
        return time_share_curve(bc, n, seed)
    fn = {"thm3": thm3_point, "thm4": thm4_point, "dpc_csit": dpc_csit_point}[mode]
    return RegionCurve(mode, tuple(fn(a, bc, n, seed) for a in bc.alpha_grid))

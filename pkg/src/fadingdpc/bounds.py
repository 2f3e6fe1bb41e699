"""Capacity outer bound, dirty-paper and lattice inner bounds, and gap bounds.

All rates are in bits per complex channel use. Monte Carlo quantities are
returned as :class:`~fadingdpc.mc.Estimate`; closed forms as floats.

Evaluations that share ``(spec, n, seed)`` see the same channel draws, so
comparisons between them (e.g. ``lattice_inner <= dpc_inner <= outer_bound``)
hold sample set by sample set, not just in expectation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConfigurationError, NumericalError, PreconditionError
from .fading import FadingSpec, gram, gram_eigenvalues
from .mc import DEFAULT_SAMPLES, Estimate, SeedSpec, hermitian_inverse, mc_matrix, mc_scalar

LOG2E = math.log2(math.e)

# relative std error of E[(H^H H)^-1] above which the moment is treated as divergent
INVERSE_MOMENT_MAX_REL_SE = 0.1


@dataclass(frozen=True)
class PowerConfig:
    """Signal, dirt and noise powers (linear) with antenna counts.

    ``Ps`` is the variance of each dirt element and ``Pw`` the noise variance
    per receive antenna.
    """

    Px: float
    Ps: float
    Pw: float
    M: int = 1
    N: int = 1

    def __post_init__(self):
        for name in ("Px", "Ps", "Pw"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ConfigurationError(f"{name} must be finite and non-negative, got {v}")
        if self.Pw <= 0:
            raise ConfigurationError("noise power Pw must be positive")
        if self.M < 1 or self.N < 1:
            raise ConfigurationError("antenna counts must be at least 1")

    @property
    def rho(self) -> float:
        """SNR per transmit antenna, ``Px / (M Pw)``."""
        return self.Px / (self.M * self.Pw)

    @property
    def dirt_factor(self) -> float:
        """``Px / (Px + M Ps)``; 1 without dirt."""
        if self.Px == 0:
            return 0.0 if self.Ps > 0 else 1.0
        return self.Px / (self.Px + self.M * self.Ps)

    def check(self, spec: FadingSpec) -> None:
        if (spec.N, spec.M) != (self.N, self.M):
            raise ConfigurationError(
                f"fading spec is {spec.N}x{spec.M} but power config has N={self.N}, M={self.M}")


def _log2det_shifted(c: float, rho: float):
    """Per-sample ``log2 det(c I + rho H^H H)`` as a vectorised functional."""
    def f(H):
        lam = gram_eigenvalues(H)
        return np.sum(np.log2(c + rho * lam), axis=-1)
    return f


def _shifted_inverse(c: float, rho: float):
    """Per-sample ``(c I + rho H^H H)^-1``."""
    def f(H):
        M = H.shape[-1]
        return hermitian_inverse(c * np.eye(M) + rho * gram(H))
    return f


def _log2det_hermitian(A: np.ndarray) -> float:
    lam = np.linalg.eigvalsh(A)
    if np.any(lam <= 0):
        return -math.inf
    return float(np.sum(np.log2(lam)))


def _clamped(est: Estimate) -> Estimate:
    return Estimate(max(est.mean, 0.0), est.std_error, est.n_samples)


def _neg_log2det_of_mean(mat_fn, spec: FadingSpec, n: int, seed: SeedSpec, workers: int = 1) -> Estimate:
    """``-log2 det E[X(H)]`` with a delta-method standard error.

    The linearisation ``-log2(e) tr(E^-1 X_k)`` is evaluated per sample on the
    same draws; its standard error is the error of the plug-in estimate.
    """
    mean = mc_matrix(mat_fn, spec, n, seed, workers)
    E = np.asarray(mean.mean)
    value = -_log2det_hermitian(E)
    if not math.isfinite(value):
        return Estimate(value, 0.0, n)
    if not spec.is_stochastic:
        return Estimate(value, 0.0, n)
    Einv = np.linalg.inv(E)
    lin = mc_scalar(lambda H: np.real(np.einsum("ij,bji->b", Einv, mat_fn(H))), spec, n, seed, workers)
    return Estimate(value, LOG2E * lin.std_error, n)


def outer_bound(cfg: PowerConfig, spec: FadingSpec, n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec(),
                workers: int = 1) -> Estimate:
    """Dirt-free ergodic capacity ``E[log2 det(I + rho H^H H)]``."""
    cfg.check(spec)
    if cfg.Px == 0:
        return Estimate(0.0, 0.0, n)
    return mc_scalar(_log2det_shifted(1.0, cfg.rho), spec, n, seed, workers)


def dpc_inner(cfg: PowerConfig, spec: FadingSpec, n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec(),
              workers: int = 1) -> Estimate:
    """Dirty-paper-coding rate ``(E[log2 det(c I + rho H^H H)])^+`` with ``c = Px/(Px + M Ps)``.

    The clamp is applied to the estimated mean. ``Px = 0`` gives 0.
    """
    cfg.check(spec)
    if cfg.Px == 0:
        return Estimate(0.0, 0.0, n)
    return _clamped(mc_scalar(_log2det_shifted(cfg.dirt_factor, cfg.rho), spec, n, seed, workers))


def lattice_inner(cfg: PowerConfig, spec: FadingSpec, n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec(),
                  workers: int = 1) -> Estimate:
    """Lattice coding rate ``(-log2 det E[(c I + rho H^H H)^-1])^+``.

    For a deterministic channel the expectation is trivial and the value is
    computed exactly as ``log2 det(c I + rho H^H H)``.
    """
    cfg.check(spec)
    if cfg.Px == 0:
        return Estimate(0.0, 0.0, n)
    c, rho = cfg.dirt_factor, cfg.rho
    if not spec.is_stochastic:
        return _clamped(mc_scalar(_log2det_shifted(c, rho), spec, n, seed))
    est = _neg_log2det_of_mean(_shifted_inverse(c, rho), spec, n, seed, workers)
    if not math.isfinite(est.mean):
        return Estimate(0.0, 0.0, n)
    return _clamped(est)


def gap_dpc_corollary1(cfg: PowerConfig) -> float:
    """Worst-case gap between the outer bound and the DPC rate: ``M`` bits."""
    return float(cfg.M)


def gap_general(cfg: PowerConfig, spec: FadingSpec, n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec(),
                allow_low_snr: bool = False, workers: int = 1) -> Estimate:
    """Gap bound ``log2 det((I + E[H^H H]) E[(H^H H)^-1])`` for ``N >= M``, ``rho >= 1``.

    Both moments are estimated on the same draws. ``allow_low_snr`` evaluates
    the expression at ``rho < 1`` with a warning instead of raising.

    Raises:
        PreconditionError: ``N < M`` or ``rho < 1`` without ``allow_low_snr``.
        NumericalError: the inverse moment does not appear to converge.
    """
    cfg.check(spec)
    if cfg.N < cfg.M:
        raise PreconditionError(f"gap bound needs N >= M, got N={cfg.N}, M={cfg.M}")
    if cfg.rho < 1:
        if not allow_low_snr:
            raise PreconditionError(f"gap bound needs rho >= 1, got {cfg.rho:.4g}")
        warnings.warn(f"evaluating the gap bound at rho={cfg.rho:.4g} < 1, outside its stated range",
                      stacklevel=2)
    M = cfg.M
    gram_fn = gram
    inv_fn = _shifted_inverse(0.0, 1.0)
    first = mc_matrix(gram_fn, spec, n, seed, workers)
    second = mc_matrix(inv_fn, spec, n, seed, workers)
    diag = np.real(np.diag(second.mean))
    rel = np.diag(second.std_error) / diag
    if spec.is_stochastic and np.any(rel > INVERSE_MOMENT_MAX_REL_SE):
        raise NumericalError(f"E[(H^H H)^-1] does not converge (relative std error {rel.max():.3f})")
    A = np.eye(M) + np.asarray(first.mean)
    B = np.asarray(second.mean)
    sign, logdet = np.linalg.slogdet(A @ B)
    value = float(logdet) * LOG2E
    if not spec.is_stochastic:
        return Estimate(value, 0.0, n)
    Ainv, Binv = np.linalg.inv(A), np.linalg.inv(B)
    lin = mc_scalar(lambda H: np.real(np.einsum("ij,bji->b", Ainv, gram_fn(H))
                                      + np.einsum("ij,bji->b", Binv, inv_fn(H))), spec, n, seed, workers)
    return Estimate(value, LOG2E * lin.std_error, n)


def gap_rayleigh_mimo(M: int, N: int) -> float:
    """Rayleigh gap bound ``M log2(1 + (M+1)/(N-M))`` for ``N > M``."""
    if not N > M >= 1:
        raise PreconditionError(f"Rayleigh gap bound needs N > M >= 1, got M={M}, N={N}")
    return M * math.log2(1.0 + (M + 1) / (N - M))


def gap_nakagami(m: float) -> float:
    """Scalar Nakagami-m gap bound ``1 + log2(1 + 1/(m-1))`` for ``m > 1``."""
    if not m > 1:
        raise PreconditionError(f"Nakagami gap bound needs m > 1, got {m}")
    return 1.0 + math.log2(1.0 + 1.0 / (m - 1.0))


def kappa(cfg: PowerConfig) -> float:
    return max(cfg.Px / cfg.Pw, cfg.Ps / cfg.Pw, 1.0)


def gap_rayleigh_scalar(cfg: PowerConfig) -> float:
    """Scalar Rayleigh gap bound ``1.48 + log2(log2(1 + kappa))``."""
    if cfg.M != 1 or cfg.N != 1:
        raise PreconditionError("scalar Rayleigh gap bound needs M = N = 1")
    return 1.48 + math.log2(math.log2(1.0 + kappa(cfg)))


def high_snr_scalar_gap(cfg: PowerConfig, spec: FadingSpec, n: int = DEFAULT_SAMPLES,
                        seed: SeedSpec = SeedSpec()) -> Estimate:
    """``E[log2(1 + Pw / (|h|^2 Px))]``, which vanishes as ``Px`` grows."""
    if cfg.M != 1 or cfg.N != 1:
        raise PreconditionError("the high-SNR scalar gap needs M = N = 1")
    cfg.check(spec)
    snr = cfg.Px / cfg.Pw
    if snr <= 0:
        raise PreconditionError("the high-SNR scalar gap needs Px > 0")
    with np.errstate(divide="ignore"):
        return mc_scalar(lambda H: np.log2(1.0 + 1.0 / (np.abs(H[:, 0, 0]) ** 2 * snr)), spec, n, seed)


def wishart_inverse_mean(M: int, N: int) -> np.ndarray:
    """``E[(H^H H)^-1] = I_M / (N - M)`` for an i.i.d. ``CN(0,1)`` ``N x M`` matrix."""
    if not N > M >= 1:
        raise PreconditionError(f"inverse Wishart mean needs N > M >= 1, got M={M}, N={N}")
    return np.eye(M) / (N - M)


def nakagami_inverse_moment(m: float) -> float:
    """``E[1/|h|^2] = 1 + 1/(m-1)`` for unit-power Nakagami-m, ``m > 1``."""
    if not m > 1:
        raise PreconditionError(f"E[1/|h|^2] diverges for m <= 1, got m={m}")
    return 1.0 + 1.0 / (m - 1.0)


def e1_bar(z: float, scaled: bool = False) -> float:
    """Exponential integral ``int_z^inf e^-t / t dt`` by adaptive quadrature.

    With ``scaled=True`` returns ``e^z`` times the integral, which stays
    representable for large ``z``.
    """
    if not z > 0:
        raise PreconditionError(f"exponential integral needs z > 0, got {z}")
    # substitute t = z + u so the e^-z factor comes out exactly
    val, _ = integrate.quad(lambda u: math.exp(-u) / (z + u), 0.0, math.inf, epsabs=0.0, epsrel=1e-12,
                            limit=200)
    return val if scaled else math.exp(-z) * val


def e1_bound(z: float, scaled: bool = False) -> float:
    """Upper bound ``(e^-z / log2 e) log2(1 + 1/z)`` on :func:`e1_bar`."""
    if not z > 0:
        raise PreconditionError(f"exponential-integral bound needs z > 0, got {z}")
    val = math.log2(1.0 + 1.0 / z) / LOG2E
    return val if scaled else math.exp(-z) * val

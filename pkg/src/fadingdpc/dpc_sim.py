"""End-to-end simulation of the nested-lattice dirty-paper transceiver.

A complex frame of ``n_sym`` channel uses carries two independent real
codewords, one on the in-phase and one on the quadrature components, each of
dimension ``M * n_sym``. The channel is handled through its real equivalent,
so every per-use quantity is a real ``2M`` (transmit) or ``2N`` (receive)
vector. Per real dimension the signal power is ``Px/(2M)``, the dirt power
``Ps/2`` and the noise power ``Pw/2``.

Transmitter: ``x = [t - s - d] mod coarse``.
Receiver: ``y' = U_i^T y_i + d`` with the per-use equaliser ``U_i``, then
``t_hat = [Q_fine(y')] mod coarse``. The decoder never sees the channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import PowerConfig
from .errors import ConfigurationError, InputError
from .fading import FadingSpec, real_equivalent, sample_channels
from .lattice import NestedLatticeCode, code_rate, second_moment
from .mc import DEFAULT_SAMPLES, Estimate, SeedSpec, hermitian_inverse, mc_matrix

POWER_RTOL = 0.01
FRAMES_PER_BLOCK = 64


@dataclass(frozen=True)
class DpcConfig:
    cfg: PowerConfig
    spec: FadingSpec
    code: NestedLatticeCode
    n_sym: int
    epsilon: float = 0.1
    costa: bool = False

    def __post_init__(self):
        self.cfg.check(self.spec)
        if self.n_sym < 1:
            raise ConfigurationError("n_sym must be at least 1")
        if not self.epsilon > 0:
            raise ConfigurationError("epsilon must be positive")
        if self.code.n != self.cfg.M * self.n_sym:
            raise ConfigurationError(
                f"code dimension {self.code.n} != M * n_sym = {self.cfg.M * self.n_sym}")
        target = self.per_dim_signal_power
        sm = second_moment(self.code.coarse, np.random.default_rng(0))
        if abs(sm - target) > POWER_RTOL * target:
            raise ConfigurationError(
                f"coarse second moment {sm:.6g} is not within 1% of the per-dimension power {target:.6g}")
        if self.costa:
            fixed = self.spec.fixed
            if fixed is None or fixed.shape[0] != fixed.shape[1] or not np.allclose(fixed, np.eye(len(fixed))):
                raise ConfigurationError("Costa scaling is only defined for the identity channel")

    @property
    def per_dim_signal_power(self) -> float:
        return self.cfg.Px / (2 * self.cfg.M)

    @property
    def rate_bits(self) -> float:
        """Bits per complex channel use carried by the two codewords."""
        return 2 * self.cfg.M * code_rate(self.code)

    @property
    def costa_scale(self) -> float:
        s = self.cfg.Px / self.cfg.M
        return s / (s + self.cfg.Pw)


@dataclass
class Frame:
    """One simulated frame; per-use arrays have a leading ``n_sym`` axis.

    ``t``, ``d``, ``lam`` hold the two real codeword branches stacked per use
    as ``(n_sym, 2M)``: columns ``[:M]`` in-phase, ``[M:]`` quadrature.
    """

    t: np.ndarray
    s: np.ndarray
    d: np.ndarray
    x: np.ndarray
    lam: np.ndarray
    H_seq: np.ndarray
    w: np.ndarray
    y: np.ndarray


@dataclass(frozen=True)
class TrialResult:
    decoded: np.ndarray
    correct: bool
    z_norm_sq: float
    branch_errors: tuple


def mu(cfg: PowerConfig) -> float:
    """Per-antenna signal-plus-dirt power ``Px/M + Ps``."""
    return cfg.Px / cfg.M + cfg.Ps


def encode(t, s, d, code: NestedLatticeCode) -> np.ndarray:
    """``x = [t - s - d] mod coarse``; ``t`` must be a codeword."""
    t = np.asarray(t, dtype=float)
    ok = code.fine.contains(t) & np.all(np.abs(code.coarse.mod(t) - t) <= 1e-9 * code.coarse.period, axis=-1)
    if not np.all(ok):
        raise InputError("t is not a codeword of the nested lattice code")
    return code.coarse.mod(t - np.asarray(s) - np.asarray(d))


def equalizer(H, cfg: PowerConfig) -> np.ndarray:
    """Per-use equaliser ``mu (mu H H^T + Pw I)^-1 H`` with ``mu = Px/M + Ps``.

    ``H`` is real (a real-equivalent channel or a real test channel), ``N x M``
    or a stack of them; the equaliser is applied as ``U^T y``.
    """
    H = np.asarray(H, dtype=float)
    m = mu(cfg)
    Nr = H.shape[-2]
    A = m * H @ np.swapaxes(H, -1, -2) + cfg.Pw * np.eye(Nr)
    return m * np.linalg.solve(A, H)


def equalize_strip(y, U_seq, d) -> np.ndarray:
    """``y' = U_i^T y_i + d_i`` for every channel use."""
    U_seq = np.asarray(U_seq, dtype=float)
    return np.einsum("...nm,...n->...m", U_seq, np.asarray(y, dtype=float)) + np.asarray(d, dtype=float)


def effective_noise(x, s, w, H_seq, cfg: PowerConfig) -> np.ndarray:
    """Effective noise after equalisation and dither removal.

    ``z_i = -(I + (mu/Pw) H_i^T H_i)^-1 (x_i + s_i) + mu H_i^T (mu H_i H_i^T + Pw I)^-1 w_i``.
    """
    H = np.asarray(H_seq, dtype=float)
    m = mu(cfg)
    Mr = H.shape[-1]
    HtH = np.swapaxes(H, -1, -2) @ H
    A = np.linalg.solve(np.eye(Mr) + (m / cfg.Pw) * HtH, (np.asarray(x) + np.asarray(s))[..., None])[..., 0]
    Bw = np.einsum("...nm,...n->...m", equalizer(H, cfg), np.asarray(w, dtype=float))
    return -A + Bw


def decode(y_prime, code: NestedLatticeCode) -> np.ndarray:
    """Euclidean lattice decoding: nearest fine point, reduced mod the coarse lattice."""
    y_prime = np.asarray(y_prime, dtype=float)
    if not np.all(np.isfinite(y_prime)):
        raise InputError("received vector has non-finite entries")
    return code.coarse.mod(code.fine.quantize(y_prime))


def decision_radius_sq(cfg: PowerConfig, spec: FadingSpec, epsilon: float, n_sym: int = 1,
                       n: int = DEFAULT_SAMPLES, seed: SeedSpec = SeedSpec()) -> float:
    """Squared radius ``(1+eps) n_sym tr E[(I/mu + H^H H/Pw)^-1]`` of the decision sphere.

    This is the radius for the full frame (both real branches); each branch's
    sphere has half of it.
    """
    if not epsilon >= 0:
        raise ConfigurationError("epsilon must be non-negative")
    cfg.check(spec)
    m = mu(cfg)
    if m == 0:
        return 0.0

    def f(H):
        M = H.shape[-1]
        return hermitian_inverse(np.eye(M) / m + np.conj(np.swapaxes(H, -1, -2)) @ H / cfg.Pw)

    est: Estimate = mc_matrix(f, spec, n, seed)
    return float((1.0 + epsilon) * n_sym * np.real(np.trace(est.mean)))


def random_codewords(code: NestedLatticeCode, rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniformly drawn codewords, shape ``(size, n)``."""
    fine = code.fine
    per_axis = int(round(code.coarse.period / fine.period))
    pts = fine.period * rng.integers(0, per_axis, size=(size, fine.n)).astype(float)
    if fine.kind == "construction_a":
        pts = pts + fine._reps[rng.integers(0, len(fine._reps), size=size)]
    return code.coarse.mod(pts)


def _stack(a_R: np.ndarray, a_I: np.ndarray, n_sym: int, M: int) -> np.ndarray:
    lead = a_R.shape[:-1]
    return np.concatenate([a_R.reshape(lead + (n_sym, M)), a_I.reshape(lead + (n_sym, M))], axis=-1)


def _branches(a: np.ndarray, n_sym: int, M: int):
    lead = a.shape[:-2]
    return a[..., :M].reshape(lead + (n_sym * M,)), a[..., M:].reshape(lead + (n_sym * M,))


def simulate_frames(dpc: DpcConfig, rng: np.random.Generator, n_frames: int) -> Frame:
    """Draw ``n_frames`` frames through the channel (leading axis = frame)."""
    cfg, code, n_sym, M, N = dpc.cfg, dpc.code, dpc.n_sym, dpc.cfg.M, dpc.cfg.N
    t = _stack(random_codewords(code, rng, n_frames), random_codewords(code, rng, n_frames), n_sym, M)
    d = _stack(*(code.coarse.mod(rng.uniform(0, code.coarse.period, (n_frames, code.n))) for _ in range(2)),
               n_sym, M)
    s = rng.standard_normal((n_frames, n_sym, 2 * M)) * math.sqrt(cfg.Ps / 2)
    w = rng.standard_normal((n_frames, n_sym, 2 * N)) * math.sqrt(cfg.Pw / 2)
    H = sample_channels(dpc.spec, n_frames * n_sym, rng).reshape(n_frames, n_sym, N, M)
    Ht = real_equivalent(H)
    b = dpc.costa_scale if dpc.costa else 1.0
    x = _stack(*(code.coarse.mod(v) for v in _branches(t - b * s - d, n_sym, M)), n_sym, M)
    lam = x - t + b * s + d
    y = np.einsum("...nm,...m->...n", Ht, x + s) + w
    return Frame(t=t, s=s, d=d, x=x, lam=lam, H_seq=Ht, w=w, y=y)


def receive(frame: Frame, dpc: DpcConfig) -> np.ndarray:
    """Equalise and strip the dither: ``y'`` per use, shape ``(..., n_sym, 2M)``."""
    if dpc.costa:
        U = dpc.costa_scale * np.broadcast_to(np.eye(frame.H_seq.shape[-1]), frame.H_seq.shape)
    else:
        U = equalizer(frame.H_seq, dpc.cfg)
    return equalize_strip(frame.y, U, frame.d)


def run_frame_block(dpc: DpcConfig, rng: np.random.Generator, n_frames: int) -> dict:
    frame = simulate_frames(dpc, rng, n_frames)
    yp = receive(frame, dpc)
    z = yp - frame.t - frame.lam
    n_sym, M = dpc.n_sym, dpc.cfg.M
    errs = []
    for yb, tb in zip(_branches(yp, n_sym, M), _branches(frame.t, n_sym, M)):
        dec = decode(yb, dpc.code)
        errs.append(~dpc.code.coarse.contains(dec - tb, atol=1e-6))
    identity_err = 0.0
    if not dpc.costa:
        z_ref = effective_noise(frame.x, frame.s, frame.w, frame.H_seq, dpc.cfg)
        identity_err = float(np.max(np.abs(z - z_ref)))
    return {
        "err_R": errs[0], "err_I": errs[1],
        "z_norm_sq": np.sum(z**2, axis=(-1, -2)),
        "identity_err": identity_err,
    }


def _run(dpc: DpcConfig, n_trials: int, seed: SeedSpec) -> dict:
    if n_trials < 1:
        raise ConfigurationError("n_trials must be at least 1")
    sched = SeedSpec(seed.master_seed, FRAMES_PER_BLOCK).schedule(n_trials)
    parts = [run_frame_block(dpc, seed.stream(b), size) for b, (_, size) in enumerate(sched)]
    return {
        "err_R": np.concatenate([p["err_R"] for p in parts]),
        "err_I": np.concatenate([p["err_I"] for p in parts]),
        "z_norm_sq": np.concatenate([p["z_norm_sq"] for p in parts]),
        "identity_err": max(p["identity_err"] for p in parts),
    }


def run_trials(dpc: DpcConfig, n_trials: int, seed: SeedSpec = SeedSpec()) -> dict:
    """Frame error rates over ``n_trials`` independent frames.

    Returns:
        dict with ``ser`` (either branch wrong), ``ser_R``, ``ser_I``,
        ``mean_z_norm`` (mean of ``||z||^2`` per real dimension),
        ``identity_err`` (max deviation between the received-signal route and
        the closed-form effective noise) and ``n_trials``.
    """
    r = _run(dpc, n_trials, seed)
    frame_err = r["err_R"] | r["err_I"]
    dims = 2 * dpc.cfg.M * dpc.n_sym
    return {
        "ser": float(np.mean(frame_err)),
        "ser_R": float(np.mean(r["err_R"])),
        "ser_I": float(np.mean(r["err_I"])),
        "mean_z_norm": float(np.mean(r["z_norm_sq"]) / dims),
        "identity_err": r["identity_err"],
        "n_trials": n_trials,
    }


def noise_concentration(dpc: DpcConfig, n_trials: int, seed: SeedSpec = SeedSpec(),
                        n_mc: int = DEFAULT_SAMPLES) -> float:
    """Fraction of frames whose ``||z||^2`` leaves the decision sphere."""
    radius = decision_radius_sq(dpc.cfg, dpc.spec, dpc.epsilon, dpc.n_sym, n_mc, seed)
    r = _run(dpc, n_trials, seed)
    return float(np.mean(r["z_norm_sq"] > radius))


def single_trial(dpc: DpcConfig, rng: np.random.Generator) -> TrialResult:
    """One frame with its decoded codeword pair (stacked per use)."""
    frame = simulate_frames(dpc, rng, 1)
    yp = receive(frame, dpc)[0]
    n_sym, M = dpc.n_sym, dpc.cfg.M
    decs = [decode(b, dpc.code) for b in _branches(yp, n_sym, M)]
    truth = _branches(frame.t[0], n_sym, M)
    errs = tuple(not bool(dpc.code.coarse.contains(a - b, atol=1e-6)) for a, b in zip(decs, truth))
    z = yp - frame.t[0] - frame.lam[0]
    return TrialResult(decoded=_stack(decs[0], decs[1], n_sym, M), correct=not any(errs),
                       z_norm_sq=float(np.sum(z**2)), branch_errors=errs)


def summarize(dpc: DpcConfig, n_trials: int, seed: SeedSpec = SeedSpec(), n_mc: int = DEFAULT_SAMPLES) -> dict:
    """:func:`run_trials` statistics plus the decision radius and the fraction
    of frames outside it, all from one set of frames."""
    r = _run(dpc, n_trials, seed)
    radius = decision_radius_sq(dpc.cfg, dpc.spec, dpc.epsilon, dpc.n_sym, n_mc, seed)
    dims = 2 * dpc.cfg.M * dpc.n_sym
    return {
        "ser": float(np.mean(r["err_R"] | r["err_I"])),
        "mean_z_norm": float(np.mean(r["z_norm_sq"]) / dims),
        "radius_sq": radius,
        "concentration_prob": float(np.mean(r["z_norm_sq"] > radius)),
        "identity_err": r["identity_err"],
    }

"""Lattice arithmetic: quantisation, modulo reduction, dithers and nested codes.

Two lattice families are supported:

* ``scaled_integer``: ``q Z^n``. Quantisation is per-coordinate rounding with
  half-open cells ``[-q/2, q/2)``.
* ``construction_a``: ``scale (C + p Z^n)`` where ``C`` is the row span of a
  ``k x n`` generator over ``Z_p``. Quantisation is an exact search over the
  ``p^k`` coset representatives, each rounded per coordinate; ties between
  cosets go to the lexicographically smallest lattice point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError, InputError, ResourceError

KINDS = ("scaled_integer", "construction_a")
DEFAULT_CODEBOOK_CAP = 2**20
DEFAULT_COSET_CAP = 2**16
_TIE_RTOL = 1e-12
_CHUNK_ELEMS = 2**22


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(math.isqrt(p)) + 1))


def rank_mod_p(G: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over ``Z_p`` by Gaussian elimination."""
    A = np.array(G, dtype=np.int64) % p
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if A[r, c]), None)
        if pivot is None:
            continue
        A[[rank, pivot]] = A[[pivot, rank]]
        A[rank] = (A[rank] * pow(int(A[rank, c]), -1, p)) % p
        for r in range(rows):
            if r != rank and A[r, c]:
                A[r] = (A[r] - A[r, c] * A[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank


@dataclass(frozen=True)
class Lattice:
    """A lattice in ``R^n``; build with :meth:`integer` or :meth:`construction_a`."""

    kind: str
    n: int
    q: float = 1.0
    p: Optional[int] = None
    G: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    scale: float = 1.0
    coset_cap: int = DEFAULT_COSET_CAP

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown lattice kind {self.kind!r}")
        if self.n < 1:
            raise ConfigurationError("lattice dimension must be at least 1")
        if self.kind == "scaled_integer":
            if not self.q > 0:
                raise ConfigurationError(f"scale q must be positive, got {self.q}")
            return
        if self.p is None or not _is_prime(int(self.p)):
            raise ConfigurationError(f"construction A needs a prime modulus, got {self.p}")
        if not self.scale > 0:
            raise ConfigurationError(f"scale must be positive, got {self.scale}")
        G = np.atleast_2d(np.array(self.G, dtype=np.int64)) % self.p
        k, n = G.shape
        if n != self.n or not 1 <= k <= n:
            raise ConfigurationError(f"generator has shape {G.shape}; need k x n with 1 <= k <= n={self.n}")
        if rank_mod_p(G, self.p) != k:
            raise ConfigurationError("generator is not full rank mod p")
        if self.p**k > self.coset_cap:
            raise ResourceError(f"p^k = {self.p ** k} coset representatives exceed the cap {self.coset_cap}")
        G.setflags(write=False)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "_reps", self._coset_representatives())

    @classmethod
    def integer(cls, q: float, n: int) -> "Lattice":
        return cls("scaled_integer", n, q=q)

    @classmethod
    def construction_a(cls, p: int, G, scale: float = 1.0, coset_cap: int = DEFAULT_COSET_CAP) -> "Lattice":
        G = np.atleast_2d(np.asarray(G, dtype=np.int64))
        return cls("construction_a", G.shape[1], p=int(p), G=G, scale=scale, coset_cap=coset_cap)

    @property
    def k(self) -> Optional[int]:
        return None if self.G is None else self.G.shape[0]

    @property
    def period(self) -> float:
        """Side of the cubic sublattice ``period * Z^n`` contained in this lattice."""
        return self.q if self.kind == "scaled_integer" else self.scale * self.p

    @property
    def log2_volume(self) -> float:
        """``log2`` of the fundamental-region volume (finite for any dimension)."""
        if self.kind == "scaled_integer":
            return self.n * math.log2(self.q)
        return self.n * math.log2(self.scale) + (self.n - self.k) * math.log2(self.p)

    @property
    def volume(self) -> float:
        """Volume of the fundamental Voronoi region."""
        return 2.0**self.log2_volume

    def scaled(self, factor: float) -> "Lattice":
        """The lattice ``factor * self``."""
        if self.kind == "scaled_integer":
            return Lattice.integer(self.q * factor, self.n)
        return Lattice.construction_a(self.p, self.G, self.scale * factor, self.coset_cap)

    def generators(self) -> np.ndarray:
        """A spanning set of lattice vectors (rows)."""
        if self.kind == "scaled_integer":
            return self.q * np.eye(self.n)
        return self.scale * np.vstack([self.G.astype(float), self.p * np.eye(self.n)])

    def _coset_representatives(self) -> np.ndarray:
        msgs = np.array(list(itertools.product(range(self.p), repeat=self.k)), dtype=np.int64)
        words = (msgs @ self.G) % self.p
        order = np.lexsort(words.T[::-1])
        return self.scale * words[order].astype(float)

    def _check_dim(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if s.shape[-1] != self.n:
            raise InputError(f"vector has dimension {s.shape[-1]}, lattice has {self.n}")
        return s

    def quantize(self, s) -> np.ndarray:
        """Nearest lattice point to ``s`` (last axis is the lattice dimension)."""
        s = self._check_dim(s)
        if self.kind == "scaled_integer":
            return self.q * np.floor(s / self.q + 0.5)
        flat = s.reshape(-1, self.n)
        out = np.empty_like(flat)
        reps = self._reps
        step = max(1, _CHUNK_ELEMS // (len(reps) * self.n))
        for i in range(0, len(flat), step):
            out[i:i + step] = self._nearest_construction_a(flat[i:i + step], reps)
        return out.reshape(s.shape)

    def _nearest_construction_a(self, s: np.ndarray, reps: np.ndarray) -> np.ndarray:
        P = self.period
        r = s[:, None, :] - reps[None, :, :]
        cand = reps[None, :, :] + P * np.floor(r / P + 0.5)
        dist = np.sum((s[:, None, :] - cand) ** 2, axis=-1)
        best = np.argmin(dist, axis=1)
        out = cand[np.arange(len(s)), best]
        dmin = dist[np.arange(len(s)), best]
        tied = dist <= dmin[:, None] * (1 + _TIE_RTOL) + 1e-300
        for row in np.flatnonzero(tied.sum(axis=1) > 1):
            pts = cand[row, tied[row]]
            out[row] = pts[np.lexsort(pts.T[::-1])[0]]
        return out

    def mod(self, s) -> np.ndarray:
        """``s - quantize(s)``, the reduction of ``s`` into the fundamental region."""
        s = self._check_dim(s)
        if self.kind == "scaled_integer":
            return s - self.q * np.floor(s / self.q + 0.5)
        return s - self.quantize(s)

    def contains(self, s, atol: float = 1e-9) -> np.ndarray:
        s = self._check_dim(s)
        return np.all(np.abs(self.quantize(s) - s) <= atol * max(1.0, self.period), axis=-1)


def quantize(lat: Lattice, s) -> np.ndarray:
    return lat.quantize(s)


def mod_lattice(lat: Lattice, s) -> np.ndarray:
    return lat.mod(s)


def sample_dither(lat: Lattice, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """Uniform draw(s) over the fundamental Voronoi region.

    For construction A, a uniform point on the cube ``[0, period)^n`` (a
    fundamental region of a sublattice) is reduced mod the lattice, which is
    uniform on the Voronoi region.
    """
    shape = (lat.n,) if size is None else (size, lat.n)
    if lat.kind == "scaled_integer":
        return rng.uniform(-lat.q / 2, lat.q / 2, size=shape)
    return lat.mod(rng.uniform(0.0, lat.period, size=shape))


def second_moment(lat: Lattice, rng: Optional[np.random.Generator] = None, n_samples: int = 200_000) -> float:
    """Second moment per dimension of the Voronoi region.

    Closed form ``q^2/12`` for ``q Z^n``; Monte Carlo over uniform dithers for
    construction A, which needs ``rng``.
    """
    if lat.kind == "scaled_integer":
        return lat.q**2 / 12.0
    if rng is None:
        raise ConfigurationError("the Monte Carlo second moment needs a seeded generator")
    d = sample_dither(lat, rng, n_samples)
    return float(np.mean(np.sum(d**2, axis=1)) / lat.n)


def normalized_second_moment(lat: Lattice, rng: Optional[np.random.Generator] = None,
                             n_samples: int = 200_000) -> float:
    """``second_moment / volume^(2/n)``; ``1/12`` for every cubic lattice."""
    if lat.kind == "scaled_integer":
        return 1.0 / 12.0
    return second_moment(lat, rng, n_samples) / lat.volume ** (2.0 / lat.n)


@dataclass(frozen=True)
class NestedLatticeCode:
    """A coarse lattice nested in a fine lattice; codewords are fine points in the coarse cell."""

    coarse: Lattice
    fine: Lattice

    def __post_init__(self):
        if self.coarse.n != self.fine.n:
            raise ConfigurationError(f"dimension mismatch: coarse {self.coarse.n}, fine {self.fine.n}")
        if not np.all(self.fine.contains(self.coarse.generators())):
            raise ConfigurationError("coarse lattice is not a sublattice of the fine lattice")

    @property
    def n(self) -> int:
        return self.coarse.n

    @property
    def log2_size(self) -> float:
        return self.coarse.log2_volume - self.fine.log2_volume

    @property
    def size(self) -> int:
        """Number of codewords, ``Vol(V) / Vol(V_1)``."""
        if self.log2_size > 1000:
            raise ResourceError(f"codebook has 2^{self.log2_size:.1f} points")
        return int(round(2.0**self.log2_size))

    @classmethod
    def cubic(cls, q: float, levels: int, n: int) -> "NestedLatticeCode":
        """``q Z^n`` inside ``(q/levels) Z^n``: a per-coordinate PAM code."""
        return cls(Lattice.integer(q, n), Lattice.integer(q / levels, n))

    @classmethod
    def self_similar(cls, fine: Lattice, b: int) -> "NestedLatticeCode":
        """Coarse lattice ``2^b`` times the fine one; rate ``b`` bits per dimension."""
        return cls(fine.scaled(2.0**b), fine)

    @classmethod
    def construction_a_over_cubic(cls, p: int, G, q: float, multiple: int = 1) -> "NestedLatticeCode":
        """Construction-A fine lattice inside the cubic coarse lattice ``q Z^n``.

        The fine lattice is scaled so that ``multiple`` periods of it span ``q``.
        """
        fine = Lattice.construction_a(p, G, scale=q / (p * multiple))
        return cls(Lattice.integer(q, fine.n), fine)


def code_rate(code: NestedLatticeCode) -> float:
    """Bits per real dimension, ``(1/n) log2(Vol(V) / Vol(V_1))``."""
    return code.log2_size / code.n


def enumerate_codebook(code: NestedLatticeCode, cap: int = DEFAULT_CODEBOOK_CAP) -> np.ndarray:
    """All fine-lattice points in the coarse Voronoi region, shape ``(size, n)``.

    Fine points are listed over the cube ``[0, P)^n``, ``P`` being the coarse
    lattice's cubic period, then reduced mod the coarse lattice and
    de-duplicated.
    """
    if code.log2_size > math.log2(cap) + 1e-9:
        raise ResourceError(f"codebook has {code.size} points, above the cap {cap}")
    P = code.coarse.period
    fine = code.fine
    per_axis = P / fine.period
    if abs(per_axis - round(per_axis)) > 1e-9 * per_axis:
        raise ConfigurationError("coarse cubic period is not a multiple of the fine one")
    per_axis = int(round(per_axis))
    reps = np.zeros((1, fine.n)) if fine.kind == "scaled_integer" else fine._reps
    n_raw = len(reps) * per_axis**fine.n
    if n_raw > 16 * cap:
        raise ResourceError(f"enumeration needs {n_raw} candidate points, above 16 x cap")
    grid = np.array(list(itertools.product(range(per_axis), repeat=fine.n)), dtype=float) * fine.period
    pts = (reps[:, None, :] + grid[None, :, :]).reshape(-1, fine.n)
    red = code.coarse.mod(pts)
    keys = np.round(red / fine.period * 1e6).astype(np.int64)
    _, idx = np.unique(keys, axis=0, return_index=True)
    book = red[np.sort(idx)]
    order = np.lexsort(book.T[::-1])
    book = book[order]
    if len(book) != code.size:
        raise ConfigurationError(f"enumerated {len(book)} codewords, expected {code.size}")
    return book

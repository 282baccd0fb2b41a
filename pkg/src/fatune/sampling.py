"""Seeded random streams and the three unit-hypercube samplers (MC, Sobol QMC, LHS).

All samplers return an (n, d) float64 matrix with every entry in [0, 1).
Determinism contract: the same (seed, tags, n, d, kind, scramble) always
produces a bit-identical point set.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy.special import ndtri

_MASK64 = (1 << 64) - 1

# Bit depth of the Sobol integer lattice; 52 keeps every point exactly
# representable as a float64.
SOBOL_MAX_BITS = 52
_SOBOL_SCALE = 2.0 ** -SOBOL_MAX_BITS


class SamplerKind(Enum):
    """The three tuning-sample generators."""

    MC = "MC"
    QMC = "QMC"
    LHS = "LHS"

    @classmethod
    def parse(cls, text: str) -> "SamplerKind":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown sampler kind: {text!r}") from None


def _entropy_words(seed: int, tags: tuple) -> list[int]:
    """Stable 256-bit entropy from (seed, tags), independent of platform hash()."""
    h = hashlib.blake2b(digest_size=32)
    h.update(seed.to_bytes(8, "little"))
    for tag in tags:
        h.update(str(tag).encode("utf-8"))
        h.update(b"\x1f")
    digest = h.digest()
    return [int.from_bytes(digest[i : i + 8], "little") for i in range(0, 32, 8)]


class RandomStream:
    """Deterministic PCG64-backed random stream with hash-derived substreams.

    Streams are single-owner objects: parallel workers must each derive their
    own substream instead of sharing one. Two streams built from the same
    (seed, tags) emit identical sequences.
    """

    __slots__ = ("seed", "tags", "_rng")

    def __init__(self, seed: int, tags: tuple = ()):
        self.seed = int(seed) & _MASK64
        self.tags = tuple(tags)
        entropy = _entropy_words(self.seed, self.tags)
        self._rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

    def substream(self, *tags) -> "RandomStream":
        """Independent child stream keyed by (seed, existing tags, new tags)."""
        return RandomStream(self.seed, self.tags + tags)

    def uniform(self, size=None):
        """Uniform variates in [0, 1)."""
        return self._rng.random(size)

    def integers(self, high: int, size=None):
        """Uniform integers in [0, high)."""
        return self._rng.integers(0, high, size=size, dtype=np.uint64)

    def permutation(self, n: int) -> np.ndarray:
        return self._rng.permutation(n)

    def normal(self, size=None):
        """Standard normal variates via the inverse CDF of one uniform each.

        The half-ulp offset keeps the argument strictly inside (0, 1) without
        a rejection loop.
        """
        u = self._rng.random(size)
        z = ndtri(u + 2.0 ** -54)
        return float(z) if size is None else z

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, tags={self.tags!r})"


def standard_normal(stream: RandomStream) -> float:
    """One standard normal draw from the stream."""
    return stream.normal()


@dataclass(frozen=True)
class ParameterRanges:
    """Closed-open tuning ranges for the three firefly control parameters."""

    theta_range: tuple[float, float] = (0.9, 1.0)
    beta_range: tuple[float, float] = (0.0, 1.0)
    gamma_range: tuple[float, float] = (0.1, 2.5)

    def __post_init__(self):
        for name in ("theta_range", "beta_range", "gamma_range"):
            low, high = getattr(self, name)
            if not (low < high):
                raise ValueError(f"{name}: low must be < high, got ({low}, {high})")

    def as_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lows = np.array([self.theta_range[0], self.beta_range[0], self.gamma_range[0]])
        highs = np.array([self.theta_range[1], self.beta_range[1], self.gamma_range[1]])
        return lows, highs


@dataclass(frozen=True)
class ParameterSample:
    """One sampled (theta, beta, gamma) setting for the firefly algorithm."""

    theta: float
    beta: float
    gamma: float


def draw_mc(n: int, d: int, stream: RandomStream) -> np.ndarray:
    """n x d independent uniforms in [0, 1)."""
    _check_counts(n, d)
    return stream.uniform((n, d))


def draw_lhs(n: int, d: int, stream: RandomStream) -> np.ndarray:
    """Latin hypercube sample: one point per equal-width stratum per dimension.

    Each dimension independently draws a permutation pi of {0..n-1} and places
    sample i at (pi(i) + u) / n with u uniform in [0, 1).
    """
    _check_counts(n, d)
    points = np.empty((n, d))
    for j in range(d):
        perm = stream.permutation(n)
        u = stream.uniform(n)
        points[:, j] = (perm + u) / n
    return points


def draw_sobol(n: int, d: int, stream: RandomStream | None = None, scramble: bool = True) -> np.ndarray:
    """First n points of the d-dimensional Sobol sequence.

    With scramble on, each dimension gets a random lower-triangular linear
    scramble of its direction numbers plus a random digital (XOR) shift, both
    drawn from the stream; the scrambled output stays in [0, 1). Unscrambled
    output keeps the natural first point at the origin.
    """
    _check_counts(n, d)
    if scramble and stream is None:
        raise ValueError("scrambled Sobol draws need a stream")
    engine = _SobolEngine(d, scramble=scramble, stream=stream)
    return engine.points(n)


def draw(kind: SamplerKind, n: int, d: int, stream: RandomStream, scramble: bool = True) -> np.ndarray:
    """Dispatch to the sampler for `kind` (scramble only affects QMC)."""
    if kind is SamplerKind.MC:
        return draw_mc(n, d, stream)
    if kind is SamplerKind.QMC:
        return draw_sobol(n, d, stream, scramble=scramble)
    if kind is SamplerKind.LHS:
        return draw_lhs(n, d, stream)
    raise ValueError(f"unknown sampler kind: {kind!r}")


def scale_to_ranges(points: np.ndarray, ranges: ParameterRanges) -> list[ParameterSample]:
    """Affinely map rows of a 3-column unit point set onto the parameter ranges."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"expected an (n, 3) point set, got shape {pts.shape}")
    lows, highs = ranges.as_bounds()
    scaled = lows + pts * (highs - lows)
    # u < 1 can still round to exactly `high`; keep the image half-open
    scaled = np.minimum(scaled, np.nextafter(highs, lows))
    return [ParameterSample(theta=float(r[0]), beta=float(r[1]), gamma=float(r[2])) for r in scaled]


def _check_counts(n: int, d: int):
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")


@lru_cache(maxsize=1)
def _direction_table() -> tuple:
    """Rows (degree, coefficient mask, initial direction integers), dims 2 and up."""
    text = resources.files("fatune").joinpath("data/sobol_directions.txt").read_text()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [int(p) for p in line.split()]
        degree, mask, minit = parts[0], parts[1], tuple(parts[2:])
        if len(minit) != degree:
            raise ValueError(f"malformed direction-number row: {line!r}")
        rows.append((degree, mask, minit))
    return tuple(rows)


def sobol_max_dimension() -> int:
    """Highest dimension the bundled direction-number table supports."""
    return len(_direction_table()) + 1


class _SobolEngine:
    """Gray-code Sobol generator over a 52-bit integer lattice."""

    def __init__(self, d: int, scramble: bool = False, stream: RandomStream | None = None):
        max_d = sobol_max_dimension()
        if d > max_d:
            raise ValueError(f"unsupported dimension {d}: direction-number table covers up to {max_d}")
        self.d = d
        self._directions = [_build_directions(dim) for dim in range(1, d + 1)]
        self._shift = [0] * d
        if scramble:
            for j in range(d):
                self._directions[j] = _linear_scramble(self._directions[j], stream)
                self._shift[j] = int(stream.integers(1 << SOBOL_MAX_BITS))

    def points(self, n: int) -> np.ndarray:
        out = np.empty((n, self.d))
        state = [0] * self.d
        for j in range(self.d):
            out[0, j] = (state[j] ^ self._shift[j]) * _SOBOL_SCALE
        for i in range(1, n):
            prev = i - 1
            c = ((~prev) & (prev + 1)).bit_length()  # lowest zero bit of i-1, 1-based
            for j in range(self.d):
                state[j] ^= self._directions[j][c - 1]
                out[i, j] = (state[j] ^ self._shift[j]) * _SOBOL_SCALE
        return out


def _build_directions(dim: int) -> list[int]:
    """Direction integers V_1..V_maxbits for one dimension (1-based)."""
    if dim == 1:
        return [1 << (SOBOL_MAX_BITS - k) for k in range(1, SOBOL_MAX_BITS + 1)]
    degree, mask, minit = _direction_table()[dim - 2]
    m = list(minit)
    for k in range(degree, SOBOL_MAX_BITS):
        new = m[k - degree] ^ (m[k - degree] << degree)
        for i in range(1, degree):
            if (mask >> (degree - 1 - i)) & 1:
                new ^= m[k - i] << i
        m.append(new)
    return [m[k] << (SOBOL_MAX_BITS - k - 1) for k in range(SOBOL_MAX_BITS)]


def _linear_scramble(directions: list[int], stream: RandomStream) -> list[int]:
    """Apply a random unit-lower-triangular GF(2) matrix to each direction integer.

    Row r of the matrix owns output bit r (most significant bit first); its
    diagonal entry is fixed at 1 so the map is invertible and measure preserving.
    """
    rows = []
    for r in range(1, SOBOL_MAX_BITS + 1):
        below = int(stream.integers(1 << (r - 1))) if r > 1 else 0
        rows.append((below << (SOBOL_MAX_BITS - r + 1)) | (1 << (SOBOL_MAX_BITS - r)))
    scrambled = []
    for v in directions:
        w = 0
        for r, row in enumerate(rows, start=1):
            if (row & v).bit_count() & 1:
                w |= 1 << (SOBOL_MAX_BITS - r)
        scrambled.append(w)
    return scrambled

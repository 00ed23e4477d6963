"""Smooth radial bumps and dyadic Littlewood-Paley partitions on the transform side.

All profiles here are transform-side multipliers: the block ``phi_j *_k f``
is the inverse transform of ``g_j * F_k(f)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BumpProfile",
    "DyadicPartition",
    "class_a_tilde_margin",
    "make_bump",
    "normalize_dyadic",
    "to_n_indexed",
]

COVERAGE_TOL = 1e-12


@dataclass(frozen=True)
class BumpProfile:
    """exp(-kappa / ((r-a)(b-r))) rescaled to peak 1, zero outside (a, b)."""

    a: float
    b: float
    kappa: float = 1.0

    def __post_init__(self):
        if not 0 < self.a < self.b:
            raise ValueError(f"bump needs 0 < a < b, got a={self.a}, b={self.b}")
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        half = 0.5 * (self.b - self.a)
        inside = (r > self.a) & (r < self.b)
        prod = np.where(inside, (r - self.a) * (self.b - r), 1.0)
        out = np.where(inside, np.exp(self.kappa / half**2 - self.kappa / prod), 0.0)
        return float(out) if out.ndim == 0 else out


def make_bump(a: float, b: float, kappa: float = 1.0) -> BumpProfile:
    """Smooth bump with exact support [a, b]."""
    if a >= b:
        raise ValueError(f"make_bump requires a < b, got ({a}, {b})")
    return BumpProfile(float(a), float(b), float(kappa))


def _dyadic_sum(g, r):
    # S(r) = sum_j g(2^-j r); only |log2 r - j| < 2 can contribute for support in [1/2, 2]
    r = np.asarray(r, dtype=float)
    base = np.floor(np.log2(np.where(r > 0, r, 1.0)))
    total = np.zeros_like(r)
    for shift in (-2, -1, 0, 1, 2):
        total = total + g(np.ldexp(r, -(base + shift).astype(int)))
    return np.where(r > 0, total, 0.0)


@dataclass(frozen=True)
class DyadicPartition:
    """Profiles g_j(r) = g(2^-j r) of a dyadic partition of unity.

    ``indexing`` is ``"Z"`` (j_min <= j <= j_max) or ``"N"`` (0 <= j <= j_max,
    with g_0 the low-pass sum of all non-positive scales).
    """

    seed: BumpProfile
    j_min: int = -12
    j_max: int = 12
    indexing: str = "Z"

    def __post_init__(self):
        if self.seed.support != (0.5, 2.0):
            raise ValueError("partition seed must be supported in [1/2, 2]")
        if self.indexing not in ("Z", "N"):
            raise ValueError("indexing must be 'Z' or 'N'")
        if self.j_min > self.j_max:
            raise ValueError("j_min must not exceed j_max")
        if self.indexing == "N" and self.j_min != 0:
            raise ValueError("N-indexed partitions start at j = 0")

    @property
    def indices(self) -> range:
        return range(self.j_min, self.j_max + 1)

    def base(self, r):
        """Normalized profile g(r) / S(r) with support [1/2, 2]."""
        r = np.asarray(r, dtype=float)
        s = _dyadic_sum(self.seed, r)
        g = self.seed(r)
        return np.where(g > 0, g / np.where(s > 0, s, 1.0), 0.0)

    def __call__(self, j: int, r):
        r = np.asarray(r, dtype=float)
        if self.indexing == "N" and j == 0:
            low = np.where(r <= 1.0, 1.0, 1.0 - self.base(0.5 * r))
            return np.where(r > 2.0, 0.0, low)
        return self.base(np.ldexp(r, -j))

    def support(self, j: int) -> tuple[float, float]:
        if self.indexing == "N" and j == 0:
            return (0.0, 2.0)
        return (2.0 ** (j - 1), 2.0 ** (j + 1))

    def total(self, r):
        """Sum of all profiles in the index range."""
        r = np.asarray(r, dtype=float)
        return sum(self(j, r) for j in self.indices)


def normalize_dyadic(g: BumpProfile, j_min: int = -12, j_max: int = 12) -> DyadicPartition:
    """Turn a bump on [1/2, 2] into a Z-indexed dyadic partition of unity.

    Raises ValueError if the dyadic sum of ``g`` vanishes anywhere on one
    octave (a gap in coverage).
    """
    if g.support != (0.5, 2.0):
        raise ValueError("normalize_dyadic needs a bump supported in [1/2, 2]")
    r = np.linspace(1.0, 2.0, 4097)
    if np.min(_dyadic_sum(g, r)) < COVERAGE_TOL:
        raise ValueError("dyadic sum of the bump vanishes: coverage gap")
    return DyadicPartition(g, j_min, j_max, "Z")


def to_n_indexed(p: DyadicPartition) -> DyadicPartition:
    """Regroup all scales j <= 0 into a single low-pass profile g_0."""
    if p.indexing != "Z":
        raise ValueError("partition is already N-indexed")
    return DyadicPartition(p.seed, 0, p.j_max, "N")


def class_a_tilde_margin(g: BumpProfile, delta: float = 0.05, samples: int = 4001) -> float:
    """min of g(r) / r^2 over the interior annulus [1 + delta, 2 - delta]."""
    if not 0 < delta < 0.5:
        raise ValueError("delta must be in (0, 1/2)")
    r = np.linspace(1.0 + delta, 2.0 - delta, samples)
    return float(np.min(np.asarray(g(r)) / r**2))

"""Test-function families used by the validation harness and the CLI.

Physical families (Gaussians and relatives) are sampled on the physical
side; spectral families (dyadic bumps and the slow-decay profile) are
defined by their transforms.  Parity applies to rank-one functions: the odd
part of a spectral family is stored as the coefficient of i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dunkl_core import GridFunction
from .measure import QuadratureRule, WeightedMeasure, default_rule
from .littlewood_paley import make_bump

__all__ = [
    "FAMILIES",
    "FunctionSpec",
    "build",
    "gaussian",
    "slow_decay",
    "smooth_cutoff",
    "spectral_bump",
    "spectral_sum",
]

PARITIES = ("even", "odd", "mixed")
FAMILIES = ("gaussian", "shifted_gaussian", "hermite", "spectral_bump", "spectral_sum",
            "spectral_moment", "slow_decay", "zero")
TAPER_START = 0.8


@dataclass(frozen=True)
class FunctionSpec:
    """A named family with parameters and a rank-one parity."""

    family: str
    params: dict = field(default_factory=dict)
    parity: str = "even"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")

    def label(self) -> str:
        inner = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        return f"{self.family}({inner})[{self.parity}]"


def _parts(even, odd, parity):
    if parity == "even":
        return even, np.zeros_like(even)
    if parity == "odd":
        return np.zeros_like(odd), odd
    return even, 0.5 * odd


def smooth_cutoff(r, start: float, stop: float):
    """C-infinity step: 1 for r <= start, 0 for r >= stop."""
    r = np.asarray(r, dtype=float)
    t = np.clip((r - start) / (stop - start), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        left = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
        right = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
    return left / (left + right)


def gaussian(scale: float = 1.0, shift: float = 0.0):
    """x -> exp(-(x - shift)^2 / (2 scale^2)) as a callable on the real line."""
    if not scale > 0:
        raise ValueError("scale must be positive")
    return lambda x: np.exp(-((np.asarray(x) - shift) ** 2) / (2.0 * scale**2))


def _bump_kappa(seed: int) -> float:
    # seed 0 is the reference shape; other seeds draw a steepness in [1, 3]
    if seed == 0:
        return 2.0
    return float(np.random.default_rng(seed).uniform(1.0, 3.0))


def spectral_bump(j: int, seed: int = 0):
    """Spectral profile r -> b(2^-j r) with b a bump on [1/2, 2]."""
    b = make_bump(0.5, 2.0, _bump_kappa(int(seed)))
    return lambda r: b(np.ldexp(np.asarray(r, dtype=float), -int(j)))


def spectral_sum(terms):
    """Sum of spectral bumps; ``terms`` holds (j, seed, coefficient) triples."""
    pieces = [(spectral_bump(j, seed), c) for j, seed, c in terms]
    return lambda r: sum(c * p(r) for p, c in pieces)


def slow_decay(a: float, b: float, r_max: float):
    """(1 + r^2)^(-a/2) (1 + log(1 + r))^(-b), cut off smoothly before r_max."""
    start = TAPER_START * r_max

    def profile(r):
        r = np.asarray(r, dtype=float)
        core = (1.0 + r**2) ** (-0.5 * a) * (1.0 + np.log1p(r)) ** (-b)
        return core * smooth_cutoff(r, start, r_max)

    return profile


def _spectral_profile(spec: FunctionSpec, r_max: float):
    p = spec.params
    fam = spec.family
    if fam == "spectral_bump":
        return spectral_bump(int(p.get("j", 0)), int(p.get("seed", 0)))
    if fam == "spectral_sum":
        return spectral_sum(p["terms"])
    if fam == "spectral_moment":
        k = int(p.get("power", 2))
        return lambda r: np.asarray(r, dtype=float) ** (2 * k) * np.exp(-0.5 * np.asarray(r) ** 2)
    return slow_decay(float(p.get("a", 2.0)), float(p.get("b", 0.0)), r_max)


def build(spec: FunctionSpec, measure: WeightedMeasure,
          grid: QuadratureRule | None = None) -> GridFunction:
    """Sample a FunctionSpec on the grid (physical or spectral side by family)."""
    grid = grid or default_rule(measure)
    mode = "rank_one" if measure.dim == 1 else "radial"
    r = grid.nodes
    p = dict(spec.params)
    fam = spec.family
    if fam == "zero":
        return GridFunction.zeros(measure, grid, mode)
    if fam in ("gaussian", "shifted_gaussian", "hermite"):
        scale = float(p.get("scale", 1.0))
        if fam == "shifted_gaussian":
            fn = gaussian(scale, float(p.get("shift", 1.0)))
            if mode == "radial":
                raise ValueError("shifted_gaussian is not radial")
            return GridFunction.from_callable(fn, measure, grid, mode)
        g = gaussian(scale)(r)
        if fam == "hermite":
            g = g * (r / scale) ** 2
        even, odd = _parts(g, g * r / scale, spec.parity)
        if mode == "radial":
            return GridFunction(mode, "physical", grid, g, None, measure)
        return GridFunction(mode, "physical", grid, even, odd, measure)
    profile = _spectral_profile(spec, grid.r_max)
    prof = profile(r)
    if mode == "radial":
        return GridFunction(mode, "spectral", grid, prof, None, measure,
                            exact_spectrum=lambda x: (profile(x), None))
    even, odd = _parts(prof, prof, spec.parity)

    def exact(x):
        v = profile(x)
        return _parts(v, v, spec.parity)

    return GridFunction(mode, "spectral", grid, even, odd, measure, exact_spectrum=exact)

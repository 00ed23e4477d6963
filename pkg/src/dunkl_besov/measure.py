"""Weighted measure w_k(x) dx, composite Gauss-Legendre radial rules and L^p_k norms.

Radial integrals use the reduction

    int_{R^d} f(x) w_k(x) dx = surface_c * int_0^inf F(r) r^(2 gamma + d - 1) dr,

with ``surface_c = c_k^{-1} / (2^(gamma + d/2 - 1) Gamma(gamma + d/2))``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.special import roots_jacobi

from .specfun import gamma_fn, log_gamma_fn

__all__ = [
    "QuadratureRule",
    "TruncationWarning",
    "WeightedMeasure",
    "default_rule",
    "lp_norm",
    "radial_integral",
    "sphere_area",
]

DEFAULT_R_MAX = 40.0
DEFAULT_PANELS = 64
DEFAULT_ORDER = 16
DEFAULT_R_FIRST = 0.25
TRUNCATION_TOL = 1e-12


class TruncationWarning(UserWarning):
    """The integrand is not negligible at the truncation radius."""


def sphere_area(dim: int) -> float:
    """Surface area of S^(dim-1); 2 for dim = 1 (the two points +-1)."""
    return 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0)


@dataclass(frozen=True)
class WeightedMeasure:
    """Rank-one or radial Dunkl measure.

    ``gamma`` is the index sum of the multiplicities, ``dim`` the dimension.
    In dimension one (W = Z_2) everything is determined by gamma.  For
    radial computations in higher dimension the integral of w_k over the
    unit sphere depends on the root system; by default it is taken equal to
    the Euclidean area of S^(d-1), which reproduces both k = 0 and d = 1,
    and can be overridden with ``sphere_integral``.
    """

    gamma: float
    dim: int = 1
    sphere_integral: float | None = None

    def __post_init__(self):
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim}")
        if self.sphere_integral is not None and not self.sphere_integral > 0:
            raise ValueError("sphere_integral must be positive")

    @classmethod
    def rank_one(cls, alpha: float) -> "WeightedMeasure":
        """Measure |x|^(2 alpha + 1) dx on R, i.e. gamma = alpha + 1/2."""
        if not alpha >= -0.5:
            raise ValueError(f"alpha must be >= -1/2, got {alpha}")
        return cls(gamma=alpha + 0.5, dim=1)

    @property
    def alpha(self) -> float:
        """Bessel order gamma + d/2 - 1 of the radial kernel."""
        return self.gamma + self.dim / 2.0 - 1.0

    @property
    def nu(self) -> float:
        """Radial exponent 2 gamma + d - 1."""
        return 2.0 * self.gamma + self.dim - 1.0

    @property
    def homogeneity(self) -> float:
        """2 (gamma + d/2): the scaling degree of w_k(x) dx."""
        return 2.0 * self.gamma + self.dim

    @cached_property
    def gaussian_moment(self) -> float:
        """int_0^inf e^(-r^2/2) r^nu dr = 2^(gamma+d/2-1) Gamma(gamma+d/2)."""
        a = self.alpha + 1.0
        return 2.0 ** (a - 1.0) * gamma_fn(a)

    @cached_property
    def surface_c(self) -> float:
        if self.sphere_integral is not None:
            return float(self.sphere_integral)
        return sphere_area(self.dim)

    @cached_property
    def mehta_c(self) -> float:
        """c_k = (int e^(-|x|^2/2) w_k dx)^(-1)."""
        return 1.0 / (self.surface_c * self.gaussian_moment)

    @cached_property
    def hankel_c(self) -> float:
        """c_k * surface_c = 1 / (2^alpha Gamma(alpha+1)), the radial transform prefactor."""
        a = self.alpha
        return math.exp(-(a * math.log(2.0) + log_gamma_fn(a + 1.0)))


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule on [0, r_max].

    The first panel is [0, r_first]; the remaining ``panels - 1`` panels are
    log-spaced from r_first to r_max.  With ``origin_exponent`` set to nu the
    first panel uses Gauss-Jacobi nodes for the weight r^nu, so that
    F(r) r^nu is integrated to full order even for non-integer nu.
    """

    r_max: float = DEFAULT_R_MAX
    panels: int = DEFAULT_PANELS
    order: int = DEFAULT_ORDER
    r_first: float = DEFAULT_R_FIRST
    origin_exponent: float | None = None
    breakpoints_override: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.panels < 1 or self.order < 1:
            raise ValueError("panels and order must be positive")
        if not 0 < self.r_first < self.r_max:
            raise ValueError("need 0 < r_first < r_max")
        b = self.breakpoints
        if b[0] < 0 or np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing from r_min >= 0")

    @classmethod
    def from_breakpoints(cls, breakpoints, order: int = DEFAULT_ORDER,
                         origin_exponent: float | None = None) -> "QuadratureRule":
        b = tuple(float(v) for v in breakpoints)
        return cls(r_max=b[-1], panels=len(b) - 1, order=order, r_first=b[1],
                   origin_exponent=origin_exponent, breakpoints_override=b)

    @classmethod
    def for_measure(cls, m: "WeightedMeasure", **kwargs) -> "QuadratureRule":
        return cls(origin_exponent=m.nu, **kwargs)

    @property
    def _jacobi_origin(self) -> bool:
        b = self.breakpoints
        return self.origin_exponent is not None and b[0] == 0.0

    @cached_property
    def breakpoints(self) -> np.ndarray:
        if self.breakpoints_override is not None:
            return np.asarray(self.breakpoints_override, dtype=float)
        if self.panels == 1:
            return np.array([0.0, self.r_max])
        logs = np.geomspace(self.r_first, self.r_max, self.panels)
        return np.concatenate([[0.0], logs])

    @cached_property
    def _reference_nodes(self):
        legendre = np.polynomial.legendre.leggauss(self.order)
        first = legendre
        if self._jacobi_origin:
            first = roots_jacobi(self.order, 0.0, float(self.origin_exponent))
        return legendre, first

    @cached_property
    def _nodes_weights(self):
        (x, w), (x0, w0) = self._reference_nodes
        b = self.breakpoints
        lo, hi = b[:-1, None], b[1:, None]
        half = 0.5 * (hi - lo)
        ref = np.repeat(x[None, :], self.panels, axis=0)
        ref[0] = x0
        nodes = (lo + half * (ref + 1.0)).ravel()
        weights = (half * w[None, :]).ravel()
        if self._jacobi_origin:
            # Jacobi weights already contain (1+t)^nu; keep them separate
            weights[: self.order] = half[0, 0] * w0
        return nodes, weights

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes_weights[0]

    @property
    def weights(self) -> np.ndarray:
        return self._nodes_weights[1]

    @property
    def size(self) -> int:
        return self.panels * self.order

    def refined(self, factor: int = 2) -> "QuadratureRule":
        """Same panels with ``factor`` times as many nodes per panel."""
        return QuadratureRule.from_breakpoints(self.breakpoints, self.order * factor,
                                               self.origin_exponent)

    def radial_weights(self, nu: float) -> np.ndarray:
        """Weights for int_0^r_max F(r) r^nu dr."""
        out = self.weights * self.nodes ** nu
        if self._jacobi_origin:
            n = self.order
            nu0 = float(self.origin_exponent)
            r = self.nodes[:n]
            out[:n] = self.weights[:n] * (0.5 * self.breakpoints[1]) ** nu0 * r ** (nu - nu0)
        return out

    @cached_property
    def _barycentric(self):
        out = []
        for x, _ in self._reference_nodes:
            diff = x[:, None] - x[None, :]
            np.fill_diagonal(diff, 1.0)
            out.append((x, 1.0 / np.prod(diff, axis=1)))
        return out

    def interpolation_plan(self, points):
        """Gather indices and weights so that interpolation is (v[idx] * w).sum(-1).

        Points outside [0, r_max] get all-zero weights.
        """
        pts = np.asarray(points, dtype=float).ravel()
        (x, bw), (x0, bw0) = self._barycentric
        b = self.breakpoints
        n = self.order
        inside = (pts >= 0) & (pts <= self.r_max)
        pts = np.where(inside, pts, 0.0)
        panel = np.clip(np.searchsorted(b, pts, side="right") - 1, 0, self.panels - 1)
        lo, hi = b[panel], b[panel + 1]
        t = 2.0 * (pts - lo) / (hi - lo) - 1.0
        first = (panel == 0)[:, None]
        d = t[:, None] - np.where(first, x0[None, :], x[None, :])
        exact = d == 0
        d = np.where(exact, 1.0, d)
        c = np.where(first, bw0[None, :], bw[None, :]) / d
        hit = exact.any(axis=1)
        c[hit] = exact[hit].astype(float)
        c = c / c.sum(axis=1, keepdims=True)
        c[~inside] = 0.0
        idx = panel[:, None] * n + np.arange(n)[None, :]
        return idx, c

    def interpolate(self, values, points) -> np.ndarray:
        """Panel-local polynomial interpolation of node samples.

        ``values`` has the nodes along its last axis.  Points outside
        [0, r_max] evaluate to zero.
        """
        values = np.asarray(values)
        shape = np.shape(points)
        idx, c = self.interpolation_plan(points)
        out = (values[..., idx] * c).sum(axis=-1)
        return out.reshape(values.shape[:-1] + shape)


def default_rule(m: WeightedMeasure | None = None) -> QuadratureRule:
    """Default grid; Gauss-Jacobi origin panel when a measure is given."""
    return QuadratureRule() if m is None else QuadratureRule.for_measure(m)


def radial_integral(profile, m: WeightedMeasure, q: QuadratureRule,
                    tol: float = TRUNCATION_TOL) -> float:
    """Full-space integral of the radial function x -> profile(|x|) against w_k.

    ``profile`` is a callable of r (vectorized) or an array of samples on
    ``q.nodes``.  Warns with :class:`TruncationWarning` when
    |profile(r_max)| r_max^nu exceeds ``tol``.
    """
    if callable(profile):
        vals = np.asarray(profile(q.nodes), dtype=float)
        edge = abs(float(np.asarray(profile(np.array([q.r_max])))[0]))
    else:
        vals = np.asarray(profile)
        edge = abs(vals[-1])
    if edge * q.r_max ** m.nu > tol:
        warnings.warn(
            f"integrand {edge * q.r_max ** m.nu:.3e} at r_max={q.r_max} exceeds {tol:g}",
            TruncationWarning,
            stacklevel=2,
        )
    return m.surface_c * float(np.dot(q.radial_weights(m.nu), vals))


def _lp_from_parts(even, odd, p, m: WeightedMeasure, q: QuadratureRule, odd_phase=1.0):
    # value at +r is even + phase*odd, at -r is even - phase*odd
    even = np.asarray(even)
    if odd is None:
        mods = [np.abs(even)]
        scale = m.surface_c
    else:
        odd = np.asarray(odd)
        mods = [np.abs(even + odd_phase * odd), np.abs(even - odd_phase * odd)]
        scale = m.surface_c / 2.0
    if math.isinf(p):
        return float(max(np.max(a) for a in mods)) if even.size else 0.0
    w = q.radial_weights(m.nu)
    total = sum(float(np.dot(w, a ** p)) for a in mods)
    return (scale * total) ** (1.0 / p)


def lp_norm(f, p: float, m: WeightedMeasure | None = None) -> float:
    """||f||_{p,k} of a GridFunction.

    Rank-one functions integrate both half-lines with weight |x|^(2 gamma);
    p = inf is the supremum over the grid nodes (a lower bound of the true
    supremum).
    """
    p = float(p)
    if not p >= 1:
        raise ValueError(f"p must be in [1, inf], got {p}")
    m = m or f.measure
    phase = 1j if f.side == "spectral" else 1.0
    odd = f.odd_part if f.mode == "rank_one" else None
    return _lp_from_parts(f.even_part, odd, p, m, f.grid, odd_phase=phase)

"""Dunkl kernel, transform, translation and convolution on radial grids.

Two modes are supported:

* ``rank_one``: d = 1, W = Z_2, weight |x|^(2 alpha + 1).  A function is
  stored as even and odd radial parts, f(x) = e(|x|) + sign(x) o(|x|) on the
  physical side and F(xi) = e(|xi|) + i sign(xi) o(|xi|) on the spectral side.
* ``radial``: radial functions on R^d, only the even part is present.

The transform is unitary: both directions carry the Mehta constant c_k, and
the Gaussian e^(-|x|^2/2) is a fixed point.  The rank-one kernel is

    E_alpha(x, iy) = j_alpha(xy) + i (xy / (2 alpha + 2)) j_(alpha+1)(xy).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .measure import QuadratureRule, WeightedMeasure, default_rule, lp_norm
from .specfun import BesselOrder, bessel_j_normalized

__all__ = [
    "GridFunction",
    "GridMismatchError",
    "convolve",
    "convolve_physical",
    "dilate",
    "forward_transform",
    "inverse_transform",
    "kernel_derivative",
    "kernel_eval",
    "laplacian_shift_symbol",
    "spectral_product",
    "t1_apply",
    "transform_matrices",
    "translate",
]

MODES = ("rank_one", "radial")
SIDES = ("physical", "spectral")


class GridMismatchError(ValueError):
    """Operands live on different grids or measures."""


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a function (or of its transform) on a radial grid."""

    mode: str
    side: str
    grid: QuadratureRule
    even_part: np.ndarray
    odd_part: np.ndarray | None
    measure: WeightedMeasure
    # closed-form spectrum s -> (even, odd) when known; used by spectral_at
    exact_spectrum: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}")
        even = np.asarray(self.even_part)
        if even.shape != (self.grid.size,):
            raise ValueError("even_part must have one sample per grid node")
        object.__setattr__(self, "even_part", even)
        if self.mode == "rank_one":
            if self.measure.dim != 1:
                raise ValueError("rank_one mode needs a one-dimensional measure")
            odd = np.zeros_like(even) if self.odd_part is None else np.asarray(self.odd_part)
            if odd.shape != even.shape:
                raise ValueError("odd_part must match even_part")
            object.__setattr__(self, "odd_part", odd)
        elif self.odd_part is not None:
            raise ValueError("radial functions carry no odd part")

    # construction -------------------------------------------------------

    @classmethod
    def from_callable(cls, fn, measure: WeightedMeasure, grid: QuadratureRule | None = None,
                      mode: str = "rank_one", side: str = "physical") -> "GridFunction":
        """Sample ``fn`` on the grid.

        In rank-one mode ``fn`` is evaluated at +r and -r and split by
        parity; on the spectral side the odd part is stored as the
        coefficient of i.
        """
        grid = grid or default_rule(measure)
        r = grid.nodes
        if mode == "radial":
            return cls(mode, side, grid, np.asarray(fn(r)), None, measure)
        plus, minus = np.asarray(fn(r)), np.asarray(fn(-r))
        even = 0.5 * (plus + minus)
        odd = 0.5 * (plus - minus)
        if side == "spectral":
            odd = odd / 1j
            if np.iscomplexobj(even) and not np.any(even.imag) and not np.any(odd.imag):
                even, odd = even.real, odd.real
        return cls(mode, side, grid, even, odd, measure)

    @classmethod
    def zeros(cls, measure: WeightedMeasure, grid: QuadratureRule | None = None,
              mode: str = "rank_one", side: str = "physical") -> "GridFunction":
        grid = grid or default_rule(measure)
        z = np.zeros(grid.size)
        return cls(mode, side, grid, z, None if mode == "radial" else z.copy(), measure)

    def with_parts(self, even, odd=None, side: str | None = None) -> "GridFunction":
        return GridFunction(self.mode, side or self.side, self.grid, even,
                            None if self.mode == "radial" else odd, self.measure)

    # views ----------------------------------------------------------------

    @property
    def alpha(self) -> float:
        return self.measure.alpha

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    @cached_property
    def spectral(self) -> "GridFunction":
        return self if self.side == "spectral" else forward_transform(self)

    @cached_property
    def physical(self) -> "GridFunction":
        return self if self.side == "physical" else inverse_transform(self)

    def full_line(self):
        """(x, values) on the symmetric node set -r_N..-r_1, r_1..r_N (rank-one)."""
        r = self.nodes
        if self.mode == "radial":
            return r, self.even_part
        phase = 1j if self.side == "spectral" else 1.0
        x = np.concatenate([-r[::-1], r])
        vals = np.concatenate([(self.even_part - phase * self.odd_part)[::-1],
                               self.even_part + phase * self.odd_part])
        return x, vals

    def values_at(self, x):
        """Evaluate at arbitrary real points by panel interpolation of both parts."""
        x = np.asarray(x, dtype=float)
        e = self.grid.interpolate(self.even_part, np.abs(x))
        if self.mode == "radial":
            return e
        o = self.grid.interpolate(self.odd_part, np.abs(x))
        phase = 1j if self.side == "spectral" else 1.0
        return e + phase * np.sign(x) * o

    def spectral_at(self, s):
        """Even part and odd coefficient of the transform at radii ``s``.

        Uses the closed-form spectrum when one is attached; otherwise
        interpolates the spectral samples, treating frequencies beyond the
        grid radius as outside the band (zero).
        """
        if self.exact_spectrum is not None:
            return self.exact_spectrum(np.asarray(s, dtype=float))
        g = self.spectral
        s = np.asarray(s, dtype=float)
        e = g.grid.interpolate(g.even_part, s)
        o = None if g.mode == "radial" else g.grid.interpolate(g.odd_part, s)
        return e, o

    def norm(self, p: float) -> float:
        return lp_norm(self, p)

    # arithmetic -------------------------------------------------------------

    def _check_compatible(self, other: "GridFunction"):
        if (self.grid != other.grid or self.measure != other.measure
                or self.mode != other.mode):
            raise GridMismatchError("operands must share grid, measure and mode")

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check_compatible(other)
        if self.side != other.side:
            other = other.spectral if self.side == "spectral" else other.physical
        odd = None if self.mode == "radial" else self.odd_part + other.odd_part
        return self.with_parts(self.even_part + other.even_part, odd)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return self + other.scaled(-1.0)

    def scaled(self, c) -> "GridFunction":
        odd = None if self.mode == "radial" else c * self.odd_part
        return self.with_parts(c * self.even_part, odd)


def dilate(f: GridFunction, lam: float) -> GridFunction:
    """Physical-side samples of x -> f(lam x), by panel interpolation.

    Values needed beyond the grid radius are taken as zero.
    """
    if not lam > 0:
        raise ValueError("dilation factor must be positive")
    g = f.physical
    r = g.nodes * lam
    even = g.grid.interpolate(g.even_part, r)
    odd = None if g.mode == "radial" else g.grid.interpolate(g.odd_part, r)
    return g.with_parts(even, odd)


def kernel_eval(alpha, x, y):
    """Rank-one Dunkl kernel E_alpha(x, iy); complex, |E| <= 1."""
    a = float(BesselOrder(alpha))
    z = np.asarray(x, dtype=float) * np.asarray(y, dtype=float)
    out = bessel_j_normalized(a, z) + 1j * (z / (2.0 * a + 2.0)) * bessel_j_normalized(a + 1.0, z)
    return complex(out) if np.ndim(out) == 0 else out


def kernel_derivative(alpha, x, y):
    """d/dx E_alpha(x, iy), from j_a'(z) = -z j_(a+1)(z) / (2a + 2)."""
    a = float(BesselOrder(alpha))
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = x * y
    j1 = bessel_j_normalized(a + 1.0, z)
    j2 = bessel_j_normalized(a + 2.0, z)
    d_even = -y * z / (2.0 * a + 2.0) * j1
    d_odd = y / (2.0 * a + 2.0) * (j1 - z * z / (2.0 * a + 4.0) * j2)
    out = d_even + 1j * d_odd
    return complex(out) if np.ndim(out) == 0 else out


def t1_apply(f, df, x, alpha):
    """Rank-one Dunkl operator T_1 f(x) = f'(x) + (2 alpha + 1) (f(x) - f(-x)) / (2x).

    ``f`` and ``df`` are callables (the function and its analytic
    derivative).  At x = 0 the difference quotient is replaced by its limit
    f'(0).
    """
    a = float(BesselOrder(alpha))
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0, 1.0, x)
    quotient = np.where(x == 0, df(np.zeros_like(x)), (f(safe) - f(-safe)) / (2.0 * safe))
    out = df(x) + (2.0 * a + 1.0) * quotient
    return out.item() if np.ndim(out) == 0 else out


@lru_cache(maxsize=16)
def _matrices(alpha: float, grid: QuadratureRule, nu: float, hankel_c: float, rank_one: bool):
    r = grid.nodes
    w = grid.radial_weights(nu)
    z = np.outer(r, r)
    even = hankel_c * bessel_j_normalized(alpha, z) * w[None, :]
    odd = None
    if rank_one:
        odd = hankel_c * (z / (2.0 * alpha + 2.0)) * bessel_j_normalized(alpha + 1.0, z) * w[None, :]
        odd.setflags(write=False)
    even.setflags(write=False)
    return even, odd


def transform_matrices(measure: WeightedMeasure, grid: QuadratureRule, rank_one: bool = True):
    """(even, odd) quadrature matrices mapping node samples to node samples.

    even: e -> hankel_c int e(r) j_alpha(sr) r^nu dr
    odd:  o -> hankel_c int o(r) (sr / (2 alpha + 2)) j_(alpha+1)(sr) r^nu dr
    The forward odd coefficient is -odd @ o and the inverse is the same map.
    """
    return _matrices(measure.alpha, grid, measure.nu, measure.hankel_c, rank_one)


def _apply(f: GridFunction, side: str) -> GridFunction:
    even_m, odd_m = transform_matrices(f.measure, f.grid, f.mode == "rank_one")
    even = even_m @ f.even_part
    odd = None if f.mode == "radial" else -(odd_m @ f.odd_part)
    return f.with_parts(even, odd, side=side)


def forward_transform(f: GridFunction) -> GridFunction:
    """F_k f(s) = c_k int f(y) E_k(-is, y) w_k(y) dy on the grid nodes."""
    if f.side != "physical":
        raise ValueError("forward_transform expects a physical-side function")
    return _apply(f, "spectral")


def inverse_transform(g: GridFunction) -> GridFunction:
    """f(x) = c_k int g(xi) E_k(ix, xi) w_k(xi) dxi on the grid nodes."""
    if g.side != "spectral":
        raise ValueError("inverse_transform expects a spectral-side function")
    return _apply(g, "physical")


def spectral_product(a_even, a_odd, b_even, b_odd):
    """Pointwise product of two spectral functions in (even, odd-coefficient) form."""
    if a_odd is None or b_odd is None:
        if a_odd is None and b_odd is None:
            return a_even * b_even, None
        a_odd = np.zeros_like(a_even) if a_odd is None else a_odd
        b_odd = np.zeros_like(b_even) if b_odd is None else b_odd
    return a_even * b_even - a_odd * b_odd, a_even * b_odd + a_odd * b_even


def translate(f: GridFunction, x: float) -> GridFunction:
    """Dunkl translate tau_x f on the grid, via F_k(tau_x f) = E_k(ix, .) F_k f."""
    if f.mode != "rank_one":
        if f.measure.dim != 1:
            raise ValueError("translation of a radial function in dimension > 1 is not radial")
        f = GridFunction("rank_one", f.side, f.grid, f.even_part, None, f.measure)
    g = f.spectral
    a = f.alpha
    z = x * g.nodes
    k_even = bessel_j_normalized(a, z)
    k_odd = (z / (2.0 * a + 2.0)) * bessel_j_normalized(a + 1.0, z)
    even, odd = spectral_product(g.even_part, g.odd_part, k_even, k_odd)
    return inverse_transform(g.with_parts(even, odd))


def convolve(f: GridFunction, g: GridFunction, side: str = "physical") -> GridFunction:
    """Dunkl convolution f *_k g.

    With the unitary transform, the convolution defined through the
    translation, (f *_k g)(x) = int tau_x f(-y) g(y) w_k(y) dy, satisfies
    F_k(f *_k g) = c_k^(-1) F_k(f) F_k(g); this is what is computed.
    """
    f._check_compatible(g)
    a, b = f.spectral, g.spectral
    even, odd = spectral_product(a.even_part, a.odd_part, b.even_part, b.odd_part)
    scale = 1.0 / f.measure.mehta_c
    odd = None if odd is None else scale * odd
    out = a.with_parts(scale * even, odd)
    return out if side == "spectral" else inverse_transform(out)


def convolve_physical(f: GridFunction, g: GridFunction) -> GridFunction:
    """Cross-check: (f *_k g)(x) = int tau_x f(-y) g(y) w_k(y) dy by direct quadrature.

    Builds tau_x f(y) for every pair of grid points, so it is O(N^3); use it
    only on small grids.
    """
    f._check_compatible(g)
    if f.mode != "rank_one":
        raise ValueError("convolve_physical is implemented for rank-one functions")
    m = f.measure
    a = f.alpha
    r = f.nodes
    w = f.grid.radial_weights(m.nu)
    spec = f.spectral
    xf, fhat = spec.full_line()
    wf = np.concatenate([w[::-1], w])
    xs = xf  # physical full-line nodes share the radii
    # tau_x f(y) = c_k int F(xi) E(ix, xi) E(iy, xi) w(xi) dxi
    ex = kernel_eval(a, xs[:, None], xf[None, :])
    weighted = m.mehta_c * fhat[None, :] * wf[None, :]
    tau = np.einsum("xk,yk,k->xy", ex, ex, weighted[0])
    _, gvals = g.physical.full_line()
    # integrate over y of tau_x f(-y) g(y) |y|^nu; -y reverses the node order
    conv = (tau[:, ::-1] * (gvals * wf)[None, :]).sum(axis=1)
    n = r.size
    plus, minus = conv[n:], conv[:n][::-1]
    even = 0.5 * (plus + minus)
    odd = 0.5 * (plus - minus)
    return f.with_parts(even.real, odd.real, side="physical")


def laplacian_shift_symbol(f: GridFunction, lam: float, power: int = 1) -> GridFunction:
    """Multiply a spectral function by (lam + |xi|^2)^power, the symbol of (lam I - Delta_k)^power."""
    if f.side != "spectral":
        raise ValueError("laplacian_shift_symbol acts on spectral-side functions")
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    sym = (lam + f.nodes ** 2) ** int(power)
    odd = None if f.odd_part is None else sym * f.odd_part
    return f.with_parts(sym * f.even_part, odd)

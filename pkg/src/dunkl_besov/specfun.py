"""Gamma function and the normalized Bessel function j_alpha.

``j_alpha(z) = Gamma(alpha + 1) (2/z)^alpha J_alpha(z)`` is evaluated with a
power series near the origin and the Hankel asymptotic expansion beyond a
crossover radius.  Both branches are vectorized over ``z``.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "BesselOrder",
    "DEFAULT_CROSSOVER",
    "bessel_j_normalized",
    "bessel_j_normalized_asymptotic",
    "bessel_j_normalized_series",
    "gamma_fn",
    "log_gamma_fn",
]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

DEFAULT_CROSSOVER = 14.0
_SERIES_TERMS = 36
# (lower bound of |z|, number of expansion terms)
_ASYMPTOTIC_BANDS = ((200.0, 6), (70.0, 8), (35.0, 10), (20.0, 14), (12.0, 22))


def _lanczos(x):
    # valid for x >= 0.5
    x = x - 1.0
    acc = np.full_like(x, _LANCZOS_COEF[0])
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc = acc + c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return acc, t


def gamma_fn(x):
    """Gamma function for positive real arguments.

    Accepts scalars or arrays.  Uses the Lanczos approximation with the
    reflection formula below 1/2.

    Raises
    ------
    ValueError
        If any argument is not strictly positive.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError(f"gamma_fn is defined here only for x > 0, got {x!r}")
    small = arr < 0.5
    xx = np.where(small, 1.0 - arr, arr)
    acc, t = _lanczos(xx)
    with np.errstate(over="ignore"):
        half = t ** (0.5 * (xx - 0.5))  # split the power to postpone overflow
        g = math.sqrt(2.0 * math.pi) * half * np.exp(-t) * half * acc
        out = np.where(small, math.pi / (np.sin(math.pi * arr) * g), g)
    if np.ndim(x) == 0:
        return float(out)
    return out


def log_gamma_fn(x):
    """Natural log of the gamma function for positive arguments."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError(f"log_gamma_fn is defined here only for x > 0, got {x!r}")
    small = arr < 0.5
    xx = np.where(small, 1.0 - arr, arr)
    acc, t = _lanczos(xx)
    lg = 0.5 * math.log(2.0 * math.pi) + (xx - 0.5) * np.log(t) - t + np.log(acc)
    out = np.where(small, np.log(math.pi / np.abs(np.sin(math.pi * arr))) - lg, lg)
    if np.ndim(x) == 0:
        return float(out)
    return out


class BesselOrder(float):
    """Order of a normalized Bessel function; must satisfy alpha >= -1/2."""

    def __new__(cls, alpha):
        value = float(alpha)
        if not value >= -0.5:
            raise ValueError(f"Bessel order must be >= -1/2, got {alpha!r}")
        return super().__new__(cls, value)

    @property
    def alpha(self) -> float:
        return float(self)


def bessel_j_normalized_series(alpha, z):
    """Power series branch, sum_k (-z^2/4)^k / (k! (alpha+1)_k)."""
    alpha = float(BesselOrder(alpha))
    z = np.asarray(z, dtype=float)
    x = -0.25 * z * z
    # Horner form, innermost term first
    total = np.ones_like(z)
    for k in range(_SERIES_TERMS - 1, 0, -1):
        total = 1.0 + total * x / (k * (alpha + k))
    return total


def _asymptotic_terms(z_min: float) -> int:
    for bound, terms in _ASYMPTOTIC_BANDS:
        if z_min >= bound:
            return terms
    raise ValueError(f"asymptotic branch is not accurate below z = {_ASYMPTOTIC_BANDS[-1][0]}")


def bessel_j_normalized_asymptotic(alpha, z):
    """Hankel asymptotic branch; accurate for |z| >= 12 and alpha <= 4."""
    alpha = float(BesselOrder(alpha))
    z = np.abs(np.asarray(z, dtype=float))
    out = np.empty_like(z)
    lower = np.inf
    # fixed term counts per band; each band is well inside the decreasing part of the series
    for bound, terms in _ASYMPTOTIC_BANDS:
        band = (z >= bound) & (z < lower)
        lower = bound
        if band.any():
            out[band] = _hankel_expansion(alpha, z[band], terms)
    if np.any(z < _ASYMPTOTIC_BANDS[-1][0]):
        raise ValueError(f"asymptotic branch is not accurate below z = {_ASYMPTOTIC_BANDS[-1][0]}")
    return out


def _hankel_expansion(alpha, z, terms):
    mu = 4.0 * alpha * alpha
    inv8z = 1.0 / (8.0 * z)
    p = np.ones_like(z)
    q = np.zeros_like(z)
    term = np.ones_like(z)
    for k in range(1, terms):
        term = term * ((mu - (2 * k - 1) ** 2) / k) * inv8z
        # a_k / z^k enters P (even k) or Q (odd k) with sign (-1)^(k//2)
        if k % 2 == 0:
            p = p - term if (k // 2) % 2 else p + term
        else:
            q = q - term if (k // 2) % 2 else q + term
    omega = z - (0.5 * alpha + 0.25) * math.pi
    scale = gamma_fn(alpha + 1.0) * math.sqrt(2.0 / math.pi) * (2.0 / z) ** alpha / np.sqrt(z)
    return scale * (p * np.cos(omega) - q * np.sin(omega))


def bessel_j_normalized(alpha, z, crossover: float = DEFAULT_CROSSOVER):
    """Normalized Bessel function j_alpha(z), even in z with j_alpha(0) = 1.

    Parameters
    ----------
    alpha : float
        Order, alpha >= -1/2.
    z : float or ndarray
        Real argument(s).
    crossover : float
        Radius where evaluation switches from the power series to the
        asymptotic expansion.

    Returns
    -------
    float or ndarray
        Same shape as ``z``.
    """
    alpha = float(BesselOrder(alpha))
    za = np.abs(np.asarray(z, dtype=float))
    if alpha == -0.5:
        out = np.cos(za)
        return float(out) if np.ndim(z) == 0 else out
    if alpha == 0.5:
        safe = np.where(za > 0, za, 1.0)
        out = np.where(za > 1e-4, np.sin(safe) / safe, 1.0 - za * za / 6.0)
        return float(out) if np.ndim(z) == 0 else out
    near = za <= crossover
    out = np.empty_like(za)
    if near.any():
        out[near] = bessel_j_normalized_series(alpha, za[near])
    if (~near).any():
        out[~near] = bessel_j_normalized_asymptotic(alpha, za[~near])
    if np.ndim(z) == 0:
        return float(out)
    return out

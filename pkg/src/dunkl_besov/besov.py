"""Besov-Dunkl norms: discrete dyadic, continuous in t, and real interpolation.

Every dyadic block ``phi_j *_k f`` is the inverse transform of a spectrally
compact function ``m(xi) F_k f(xi)`` with ``m`` supported in ``[0, 2 lam]``.
Blocks are evaluated at a reference scale: with ``h(s) = m(lam s) F_k f(lam s)``
supported in ``[0, 2]``,

    || F_k^{-1}[m F_k f] ||_{p,k} = lam^(H (1 - 1/p)) || F_k^{-1} h ||_{p,k},

where ``H = 2 gamma + d``.  The reference grids are wide enough (radius 320
on the physical side) to hold the slowly decaying tails of dyadic pieces,
which the main transform grid cannot.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .measure import QuadratureRule, WeightedMeasure
from .littlewood_paley import BumpProfile, DyadicPartition, make_bump, normalize_dyadic
from .specfun import bessel_j_normalized

__all__ = [
    "BesovParams",
    "BlockEngine",
    "DyadicNormProfile",
    "KFunctional",
    "SplitNorms",
    "RangeWarning",
    "block_engine",
    "block_norms",
    "continuous_norm",
    "default_partition",
    "discrete_norm",
    "discrete_norm_n_indexed",
    "discrete_profile",
    "embedding_check",
    "interpolation_norm",
    "k_functional",
    "sequence_norm",
    "split_norms",
]

PARTITION_KAPPA = 2.0
REF_SPECTRAL_PANELS = 64
REF_PHYSICAL_RADIUS = 320.0
REF_PHYSICAL_WIDTH = 4.0
T_OCTAVES = 10
T_PER_OCTAVE = 16
TAIL_FACTOR = 2.0
TAIL_SLACK = 1e-3
SPECTRAL_CHOP = 1e-14


class RangeWarning(UserWarning):
    """A truncated scale range leaves non-negligible boundary contributions."""


@dataclass(frozen=True)
class BesovParams:
    """Smoothness ``beta > 0`` and integrability ``1 <= p, q <= inf``."""

    beta: float
    p: float
    q: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        for name in ("p", "q"):
            if not float(getattr(self, name)) >= 1:
                raise ValueError(f"{name} must be in [1, inf], got {getattr(self, name)}")


def default_partition(j_min: int = -12, j_max: int = 12) -> DyadicPartition:
    """Z-indexed partition built from the default bump on [1/2, 2]."""
    return normalize_dyadic(make_bump(0.5, 2.0, PARTITION_KAPPA), j_min, j_max)


# --------------------------------------------------------------------------
# reference-scale block engine


def _physical_breakpoints(radius: float, width: float) -> np.ndarray:
    head = [0.0, 0.125, 0.25, 0.5, 1.0, 2.0]
    tail = np.arange(width, radius + 0.5 * width, width)
    tail = tail[tail > head[-1]]
    return np.concatenate([head, tail])


@dataclass(frozen=True)
class BlockEngine:
    """Inverse transforms of spectra supported in [0, 2], with batched L^p norms.

    ``refine`` multiplies the Gauss order of both reference rules.
    """

    measure: WeightedMeasure
    refine: int = 1
    radius: float = REF_PHYSICAL_RADIUS

    @cached_property
    def spectral_rule(self) -> QuadratureRule:
        b = np.linspace(0.0, 2.0, REF_SPECTRAL_PANELS + 1)
        return QuadratureRule.from_breakpoints(b, 16 * self.refine, self.measure.nu)

    @cached_property
    def physical_rule(self) -> QuadratureRule:
        b = _physical_breakpoints(self.radius, REF_PHYSICAL_WIDTH)
        return QuadratureRule.from_breakpoints(b, 16 * self.refine, self.measure.nu)

    @property
    def rank_one(self) -> bool:
        return self.measure.dim == 1

    @cached_property
    def _matrices(self):
        m = self.measure
        a = m.alpha
        s = self.spectral_rule.nodes
        x = self.physical_rule.nodes
        w = self.spectral_rule.radial_weights(m.nu) * m.hankel_c
        z = np.outer(x, s)
        even = bessel_j_normalized(a, z) * w
        odd = None
        if self.rank_one:
            odd = (z / (2.0 * a + 2.0)) * bessel_j_normalized(a + 1.0, z) * w
        return even, odd

    @cached_property
    def _physical_weights(self) -> np.ndarray:
        return self.physical_rule.radial_weights(self.measure.nu)

    def physical(self, h_even, h_odd=None, active=None):
        """Inverse transform of spectral samples (nodes along axis 0).

        ``active`` selects the spectral nodes the samples belong to; the
        spectrum is taken to vanish at all other nodes.
        """
        even_m, odd_m = self._matrices
        if active is not None:
            even_m = even_m[:, active]
            odd_m = None if odd_m is None else odd_m[:, active]
        u_even = even_m @ h_even
        u_odd = None
        if odd_m is not None and h_odd is not None:
            u_odd = -(odd_m @ h_odd)
        return u_even, u_odd

    def lp(self, u_even, u_odd, p: float) -> np.ndarray:
        """L^p_k norms of physical samples, one per column."""
        m = self.measure
        if u_odd is None:
            mods = [np.abs(u_even)]
            scale = m.surface_c
        else:
            mods = [np.abs(u_even + u_odd), np.abs(u_even - u_odd)]
            scale = m.surface_c / 2.0
        if math.isinf(p):
            return np.max(np.stack([a.max(axis=0) for a in mods]), axis=0)
        w = self._physical_weights
        total = sum(w @ a**p for a in mods)
        return (scale * total) ** (1.0 / p)

    def scaled_norms(self, lams, h_even, h_odd, ps, active=None):
        """Norms of F^{-1}[h(./lam)] for each column; returns {p: array}."""
        lams = np.asarray(lams, dtype=float)
        u_even, u_odd = self.physical(h_even, h_odd, active)
        hom = self.measure.homogeneity
        out = {}
        for p in ps:
            expo = hom * (1.0 - 1.0 / p) if not math.isinf(p) else hom
            out[p] = lams**expo * self.lp(u_even, u_odd, p)
        return out


@lru_cache(maxsize=8)
def block_engine(measure: WeightedMeasure, refine: int = 1) -> BlockEngine:
    return BlockEngine(measure, refine)


@lru_cache(maxsize=64)
def _plan(grid: QuadratureRule, nodes: bytes, lams: tuple):
    pts = np.frombuffer(nodes)[:, None] * np.array(lams)[None, :]
    idx, c = grid.interpolation_plan(pts)
    return idx, c, pts.shape


def _spectrum_at(f, nodes: np.ndarray, lams: np.ndarray):
    """F_k f at nodes * lam for each lam, as (even, odd) arrays (nodes, lams)."""
    if callable(f) and not hasattr(f, "spectral_at"):
        return f(nodes[:, None] * lams[None, :])
    if f.exact_spectrum is not None:
        return f.exact_spectrum(nodes[:, None] * lams[None, :])
    g = f.spectral
    idx, c, shape = _plan(g.grid, nodes.tobytes(), tuple(lams.tolist()))
    even, odd = _chop(g.even_part, g.odd_part)
    e = (even[idx] * c).sum(axis=-1).reshape(shape)
    o = None if odd is None else (odd[idx] * c).sum(axis=-1).reshape(shape)
    return e, o


def _chop(even, odd):
    # transform roundoff sits near eps * max|F f|; amplified by 2^(j beta) it
    # would masquerade as high-frequency content, so it is cut to zero
    top = max(np.max(np.abs(even)), 0.0 if odd is None else np.max(np.abs(odd)))
    tol = SPECTRAL_CHOP * top
    even = np.where(np.abs(even) > tol, even, 0.0)
    if odd is not None:
        odd = np.where(np.abs(odd) > tol, odd, 0.0)
    return even, odd


def _profile_blocks(f, lams, multipliers, ps, refine=1, measure=None):
    """Norms of F^{-1}[m_i F f] where m_i(lam_i s) is given on reference nodes.

    ``multipliers`` has shape (reference nodes, blocks).  ``f`` is a
    GridFunction or a callable s -> (even, odd) giving its spectrum.
    """
    measure = measure or f.measure
    eng = block_engine(measure, refine)
    lams = np.asarray(lams, dtype=float)
    active = np.flatnonzero(np.any(multipliers != 0, axis=1))
    multipliers = multipliers[active]
    e, o = _spectrum_at(f, eng.spectral_rule.nodes[active], lams)
    h_even = multipliers * e
    h_odd = None if o is None else multipliers * o
    return eng.scaled_norms(lams, h_even, h_odd, ps, active)


# --------------------------------------------------------------------------
# discrete norms


def sequence_norm(weighted, q: float) -> float:
    """l^q norm of a finite non-negative sequence (sup for q = inf)."""
    a = np.asarray(weighted, dtype=float)
    if a.size == 0:
        return 0.0
    if math.isinf(q):
        return float(a.max())
    top = a.max()
    if top == 0:
        return 0.0
    return float(top * np.sum((a / top) ** q) ** (1.0 / q))


def _tail_ok(seq, factor=TAIL_FACTOR) -> bool:
    # each step must shrink by at least ``factor`` (exact zeros count as converged)
    seq = list(seq)
    for a, b in zip(seq, seq[1:]):
        if b == 0.0:
            continue
        if not b * factor <= a * (1.0 + TAIL_SLACK):
            return False
    return True


@dataclass(frozen=True)
class DyadicNormProfile:
    """Block norms ``||phi_j *_k f||_{p,k}`` and the weighted l^q summary."""

    terms: dict
    params: BesovParams

    @property
    def indices(self) -> list:
        return sorted(self.terms)

    @property
    def weighted(self) -> np.ndarray:
        b = self.params.beta
        return np.array([2.0 ** (j * b) * self.terms[j] for j in self.indices])

    @property
    def value(self) -> float:
        return sequence_norm(self.weighted, self.params.q)

    def with_q(self, q: float) -> "DyadicNormProfile":
        return DyadicNormProfile(self.terms, BesovParams(self.params.beta, self.params.p, q))

    def with_beta(self, beta: float) -> "DyadicNormProfile":
        return DyadicNormProfile(self.terms, BesovParams(beta, self.params.p, self.params.q))

    @property
    def converged(self) -> bool:
        """Last three weighted terms at each end shrink by at least 2x outward.

        Exact zeros count as converged (compact spectra, chopped noise).

        For q = inf only boundedness matters, and the outermost terms are
        merely required to be non-increasing outward.
        """
        w = self.weighted
        if w.size < 3:
            return True
        factor = 1.0 if math.isinf(self.params.q) else TAIL_FACTOR
        return _tail_ok(w[-3:], factor) and _tail_ok(w[:3][::-1], factor)


def _check_partition(part: DyadicPartition):
    if part.seed.support != (0.5, 2.0):
        raise ValueError("partition seed must be supported in [1/2, 2]")


def block_norms(f, part: DyadicPartition, ps, refine: int = 1, modifier=None) -> dict:
    """{p: {j: ||phi_j * f||_p}} over the partition range.

    ``modifier(j, xi)`` optionally multiplies the j-th block's spectrum by
    an extra radial factor (used for truncations).
    """
    _check_partition(part)
    eng = block_engine(f.measure, refine)
    s = eng.spectral_rule.nodes
    js = list(part.indices)
    lams = np.array([2.0**j for j in js])
    cols = []
    for j, lam in zip(js, lams):
        col = np.asarray(part(j, s * lam))
        if modifier is not None:
            col = col * modifier(j, s * lam)
        cols.append(col)
    mult = np.stack(cols, axis=1)
    norms = _profile_blocks(f, lams, mult, ps, refine)
    return {p: dict(zip(js, map(float, norms[p]))) for p in ps}


def discrete_profile(f, params: BesovParams, part: DyadicPartition, refine: int = 1) -> DyadicNormProfile:
    terms = block_norms(f, part, [params.p], refine)[params.p]
    return DyadicNormProfile(terms, params)


def discrete_norm(f, params: BesovParams, part: DyadicPartition | None = None,
                  refine: int = 1, with_flag: bool = False):
    """(sum_j (2^(j beta) ||phi_j *_k f||_{p,k})^q)^(1/q) over the partition range.

    With ``with_flag`` returns ``(value, converged)`` where ``converged``
    follows the tail policy of :class:`DyadicNormProfile`.
    """
    part = part or default_partition()
    prof = discrete_profile(f, params, part, refine)
    return (prof.value, prof.converged) if with_flag else prof.value


def discrete_norm_n_indexed(f, params: BesovParams, part_n: DyadicPartition,
                            refine: int = 1, with_flag: bool = False):
    """Discrete norm over j = 0..j_max with the low-pass block at j = 0."""
    if part_n.indexing != "N":
        raise ValueError("expected an N-indexed partition")
    return discrete_norm(f, params, part_n, refine, with_flag)


# --------------------------------------------------------------------------
# continuous norm


def t_grid(octaves: int = T_OCTAVES, per_octave: int = T_PER_OCTAVE, shift: float = 0.0) -> np.ndarray:
    """log-uniform t-grid on [2^(-J+shift), 2^(J+shift)]."""
    k = np.arange(-octaves * per_octave, octaves * per_octave + 1)
    return 2.0 ** ((k + shift) / per_octave)


def continuous_profile(f, phi: BumpProfile, ts, ps, refine: int = 1) -> dict:
    """{p: array of ||f *_k phi_t||_{p,k} over ts} for F_k(phi) = phi supported in [1, 2]."""
    if phi.support[0] < 0 or phi.support[1] > 2.0:
        raise ValueError("phi must be supported in [0, 2]")
    eng = block_engine(f.measure, refine)
    s = eng.spectral_rule.nodes
    ts = np.asarray(ts, dtype=float)
    lams = 1.0 / ts
    mult = np.repeat(np.asarray(phi(s))[:, None], ts.size, axis=1)
    return _profile_blocks(f, lams, mult, ps, refine)


def _log_trapezoid(values, ts) -> float:
    u = np.log(ts)
    return float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(u)))


def continuous_norm(f, phi: BumpProfile | None, params: BesovParams, octaves: int = T_OCTAVES,
                    per_octave: int = T_PER_OCTAVE, shift: float = 0.0, refine: int = 1,
                    norms=None) -> float:
    """(int_0^inf (||f *_k phi_t||_{p,k} / t^beta)^q dt/t)^(1/q), trapezoid in log t.

    ``norms`` may carry precomputed ``||f * phi_t||_p`` on the same t-grid.
    Emits :class:`RangeWarning` when the integrand at either end of the
    t-range exceeds 1e-6 of its maximum.
    """
    phi = phi or make_bump(1.0, 2.0, PARTITION_KAPPA)
    ts = t_grid(octaves, per_octave, shift)
    if norms is None:
        norms = continuous_profile(f, phi, ts, [params.p], refine)[params.p]
    g = np.asarray(norms) / ts**params.beta
    top = g.max() if g.size else 0.0
    if top == 0:
        return 0.0
    if max(g[0], g[-1]) > 1e-6 * top:
        warnings.warn("t-range leaves non-negligible boundary terms", RangeWarning, stacklevel=2)
    if math.isinf(params.q):
        return float(top)
    q = params.q
    return float(top * _log_trapezoid((g / top) ** q, ts) ** (1.0 / q))


# --------------------------------------------------------------------------
# K-functional and interpolation


@dataclass(frozen=True)
class KFunctional:
    """Lines K_l(t) = a_l + t b_l from the scanned splittings f = f0 + f1.

    ``levels[i]`` is the cut l of line i (``None`` for the trivial split
    (f, 0)); the evaluated minimum is an upper estimate of the true K.
    """

    a: np.ndarray
    b: np.ndarray
    levels: tuple
    norm0: float
    norm1: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        vals = np.min(self.a[:, None] + np.multiply.outer(self.b, t.ravel()), axis=0)
        return float(vals[0]) if t.ndim == 0 else vals.reshape(t.shape)

    def trivial(self, t):
        """min(||f||_B0, t ||f||_B1)."""
        return np.minimum(self.norm0, np.asarray(t, dtype=float) * self.norm1)

    def best_level(self, t: float):
        return self.levels[int(np.argmin(self.a + t * self.b))]

    @cached_property
    def envelope(self):
        """(breakpoints, line indices) of the lower envelope for t in (0, inf)."""
        order = np.lexsort((self.a, -self.b))  # slope descending, then intercept
        hull = []
        for i in order:
            if hull and self.b[hull[-1]] == self.b[i]:
                continue  # same slope, larger intercept
            while hull:
                j = hull[-1]
                # crossing of the new line with the last one
                x_new = (self.a[i] - self.a[j]) / (self.b[j] - self.b[i])
                if x_new <= 0:
                    hull.pop()
                    continue
                if len(hull) >= 2:
                    k = hull[-2]
                    x_prev = (self.a[j] - self.a[k]) / (self.b[k] - self.b[j])
                    if x_new <= x_prev:
                        hull.pop()
                        continue
                break
            hull.append(i)
        ts = [(self.a[j] - self.a[i]) / (self.b[i] - self.b[j]) for i, j in zip(hull, hull[1:])]
        return np.array(ts), np.array(hull)


@dataclass(frozen=True)
class SplitNorms:
    """Block norms of f and of the cut pieces f0^(l), f1^(l) at one p.

    ``edited[(l, j, side)]`` is the j-th block norm of f0^(l) (side 0) or
    f1^(l) (side 1) for the three blocks j = l-1, l, l+1 straddling the cut;
    every other block equals the block of f or vanishes.
    """

    p: float
    indices: tuple
    base: dict
    edited: dict


def split_norms(f, p: float, part: DyadicPartition | None = None, refine: int = 1) -> SplitNorms:
    """Block norms needed by :func:`k_functional` for cuts f0 = sum_{j<=l} phi_j * f."""
    part = part or default_partition()
    eng = block_engine(f.measure, refine)
    s = eng.spectral_rule.nodes
    js = list(part.indices)
    base = block_norms(f, part, [p], refine)[p]
    cols, keys, lams = [], [], []
    for l in js:
        for j in (l - 1, l, l + 1):
            if j not in base:
                continue
            lam = 2.0**j
            r = s * lam
            piece = np.asarray(part(j, r))
            low = sum(np.asarray(part(i, r)) for i in range(max(js[0], j - 2), min(l, j + 2) + 1))
            cols += [piece * low, piece * (1.0 - low)]
            keys += [(l, j, 0), (l, j, 1)]
            lams += [lam, lam]
    norms = _profile_blocks(f, np.array(lams), np.stack(cols, axis=1), [p], refine)[p]
    return SplitNorms(p, tuple(js), base, dict(zip(keys, map(float, norms))))


def k_functional(f, b0: BesovParams, b1: BesovParams, part: DyadicPartition | None = None,
                 refine: int = 1, splits: SplitNorms | None = None) -> KFunctional:
    """Restricted-infimum K-functional over cuts f0 = sum_{j<=l} phi_j * f.

    Call the result at t to get the upper estimate; ``.trivial(t)`` gives
    min(||f||_B0, t ||f||_B1).
    """
    if b0.p != b1.p:
        raise ValueError("K-functional needs b0.p == b1.p")
    splits = splits or split_norms(f, b0.p, part, refine)
    js, base, edited = splits.indices, splits.base, splits.edited
    full = DyadicNormProfile(base, b0)
    norm0 = full.value
    norm1 = DyadicNormProfile(base, b1).value
    if not (math.isfinite(norm0) and math.isfinite(norm1)):
        raise ValueError("K-functional needs finite norms")
    a, b, levels = [norm0, 0.0], [0.0, norm1], [None, js[0] - 1]
    for l in js:
        t0, t1 = {}, {}
        for j in js:
            if j <= l - 2:
                t0[j], t1[j] = base[j], 0.0
            elif j >= l + 2:
                t0[j], t1[j] = 0.0, base[j]
            else:
                t0[j], t1[j] = edited[(l, j, 0)], edited[(l, j, 1)]
        a.append(DyadicNormProfile(t0, b0).value)
        b.append(DyadicNormProfile(t1, b1).value)
        levels.append(l)
    return KFunctional(np.array(a), np.array(b), tuple(levels), norm0, norm1)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)


def interpolation_norm(theta: float, q: float, f, b0: BesovParams, b1: BesovParams,
                       part: DyadicPartition | None = None, refine: int = 1,
                       kfun: KFunctional | None = None) -> float:
    """(int_0^inf (t^(-theta) K(t))^q dt/t)^(1/q) with K the scanned upper estimate.

    K is piecewise linear in t; each piece is integrated in log t by
    Gauss-Legendre and the two unbounded ends analytically (K = t b on the
    first piece, K = a on the last).
    """
    if not 0 < theta < 1:
        raise ValueError("theta must be in (0, 1)")
    if b0.beta == b1.beta:
        raise ValueError("interpolation needs b0.beta != b1.beta")
    q = float(q)
    if not q >= 1:
        raise ValueError("q must be in [1, inf]")
    kfun = kfun or k_functional(f, b0, b1, part, refine)
    ts, lines = kfun.envelope
    a, b = kfun.a[lines], kfun.b[lines]
    if not np.any(a) and not np.any(b):
        return 0.0
    if math.isinf(q):
        if ts.size == 0:
            return 0.0 if (a[0] == 0 or b[0] == 0) else math.inf
        return float(np.max(ts ** (-theta) * kfun(ts)))
    if ts.size == 0 or a[0] != 0.0 or b[-1] != 0.0:
        raise ValueError("K-functional envelope is unbounded at an end")
    total = (b[0] * ts[0] ** (1.0 - theta)) ** q / ((1.0 - theta) * q)
    total += (a[-1] * ts[-1] ** (-theta)) ** q / (theta * q)
    for i in range(ts.size - 1):
        lo, hi = math.log(ts[i]), math.log(ts[i + 1])
        u = 0.5 * (hi - lo) * (_GL_X + 1.0) + lo
        t = np.exp(u)
        vals = (t ** (-theta) * (a[i + 1] + t * b[i + 1])) ** q
        total += 0.5 * (hi - lo) * float(np.dot(_GL_W, vals))
    return float(total ** (1.0 / q))


def embedding_check(profile: DyadicNormProfile, q1: float, q2: float) -> tuple[float, float]:
    """(norm with q2, norm with q1) for q1 <= q2; the first never exceeds the second."""
    if q2 < q1:
        raise ValueError("embedding_check needs q1 <= q2")
    big = profile.with_q(q2).value
    small = profile.with_q(q1).value
    return big, small

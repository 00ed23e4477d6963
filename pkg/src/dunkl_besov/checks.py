"""Validation suites: named checks producing :class:`InequalityRecord` rows.

Suites ``core``, ``besov`` and ``integrability`` group the checks; ``all``
runs every one.  Records come back in a fixed order so reports are
reproducible byte for byte.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import solve_ivp

from .analysis import (
    InequalityRecord,
    hardy_littlewood_ratio,
    hausdorff_young_ratio,
    integrability_report_l1,
    integrability_report_ls,
    truncation_convergence,
    young_ratio,
)
from .besov import (
    BesovParams,
    DyadicNormProfile,
    RangeWarning,
    block_norms,
    continuous_norm,
    continuous_profile,
    embedding_check,
    interpolation_norm,
    k_functional,
    split_norms,
    t_grid,
)
from .dunkl_core import GridFunction, kernel_derivative, kernel_eval, t1_apply
from .families import FunctionSpec, build
from .measure import QuadratureRule, WeightedMeasure
from .littlewood_paley import DyadicPartition, make_bump, normalize_dyadic

__all__ = ["CHECKS", "SUITES", "CheckContext", "kernel_ode", "run_checks", "run_suite"]

INF = math.inf

PLANCHEREL_FAMILY = (
    FunctionSpec("gaussian", {"scale": 0.5}),
    FunctionSpec("gaussian", {"scale": 0.75}),
    FunctionSpec("gaussian", {"scale": 1.0}),
    FunctionSpec("gaussian", {"scale": 1.5}),
    FunctionSpec("gaussian", {"scale": 2.0}),
    FunctionSpec("gaussian", {"scale": 0.7}, "odd"),
    FunctionSpec("gaussian", {"scale": 1.0}, "odd"),
    FunctionSpec("gaussian", {"scale": 1.5}, "mixed"),
    FunctionSpec("shifted_gaussian", {"shift": 0.5}),
    FunctionSpec("shifted_gaussian", {"shift": 1.0}),
    FunctionSpec("shifted_gaussian", {"scale": 0.8, "shift": -1.5}),
    FunctionSpec("hermite", {"scale": 1.0}, "mixed"),
)

YOUNG_F = (
    FunctionSpec("gaussian", {"scale": 1.0}),
    FunctionSpec("gaussian", {"scale": 1.0}, "odd"),
    FunctionSpec("shifted_gaussian", {"shift": 1.0}),
    FunctionSpec("hermite", {"scale": 0.8}, "mixed"),
)
YOUNG_G = (
    FunctionSpec("gaussian", {"scale": 0.5}),
    FunctionSpec("gaussian", {"scale": 2.0}),
    FunctionSpec("hermite", {"scale": 0.7}),
)

NORM_FAMILY = (
    FunctionSpec("gaussian", {"scale": 1.0}),
    FunctionSpec("gaussian", {"scale": 0.5}),
    FunctionSpec("gaussian", {"scale": 2.0}),
    FunctionSpec("gaussian", {"scale": 1.0}, "odd"),
    FunctionSpec("shifted_gaussian", {"shift": 1.0}),
    FunctionSpec("spectral_bump", {"j": 0}),
    FunctionSpec("spectral_bump", {"j": 2, "seed": 3}, "mixed"),
    FunctionSpec("spectral_sum", {"terms": ((-1, 1, 1.0), (1, 2, 0.5), (3, 0, 0.25))}),
)

HL_FAMILY = (
    FunctionSpec("gaussian", {"scale": 1.0}),
    FunctionSpec("gaussian", {"scale": 1.0}, "odd"),
    FunctionSpec("shifted_gaussian", {"shift": 1.0}),
    FunctionSpec("hermite", {"scale": 1.0}, "mixed"),
)

EQUIV_BETAS = (0.5, 1.0, 2.0)
EQUIV_PS = (1.0, 2.0)
EQUIV_QS = (1.0, 2.0, INF)
INTERP_BETAS = (2.0, 0.5)
INTERP_THETAS = (0.25, 0.5, 0.75)
INTERP_P = 2.0
DRIFT_TOL = 0.05


def _fmt(x) -> str:
    return "inf" if x == INF else f"{x:g}"


@dataclass(frozen=True)
class CheckContext:
    """Run parameters shared by all checks."""

    alphas: tuple = (-0.5, 0.0, 0.7)
    r_max: float = 40.0
    panels: int = 64
    order: int = 16
    j_min: int = -12
    j_max: int = 12
    bump_a: float = 0.5
    bump_b: float = 2.0
    kappa: float = 2.0
    ls_exponents: tuple = (1.75, 2.0, 1.1)
    seed: int = 0

    @classmethod
    def from_config(cls, cfg) -> "CheckContext":
        """Context for a rank-one :class:`~dunkl_besov.config.RunConfig`."""
        if cfg.dim != 1:
            raise ValueError("check suites run in the rank-one setting (measure.dim = 1)")
        return cls(alphas=tuple(cfg.alphas), r_max=cfg.r_max, panels=cfg.panels, order=cfg.order,
                   j_min=cfg.j_min, j_max=cfg.j_max, bump_a=cfg.bump_a, bump_b=cfg.bump_b,
                   kappa=cfg.bump_kappa, ls_exponents=tuple(cfg.ls_exponents), seed=cfg.seed)

    def measure(self, alpha: float) -> WeightedMeasure:
        return WeightedMeasure.rank_one(alpha)

    def grid(self, alpha: float, refine: int = 1) -> QuadratureRule:
        return QuadratureRule(r_max=self.r_max, panels=self.panels, order=self.order * refine,
                              origin_exponent=self.measure(alpha).nu)

    @cached_property
    def partition(self) -> DyadicPartition:
        return normalize_dyadic(make_bump(self.bump_a, self.bump_b, self.kappa),
                                self.j_min, self.j_max)

    def build(self, spec: FunctionSpec, alpha: float, refine: int = 1) -> GridFunction:
        return build(spec, self.measure(alpha), self.grid(alpha, refine))


def _rec(check, name, lhs, rhs, bound, kind="upper", notes=""):
    return InequalityRecord(check, name, float(lhs), float(rhs), float(bound), kind, notes=notes)


# --------------------------------------------------------------------------
# core suite


def check_plancherel(ctx: CheckContext):
    out = []
    for a in ctx.alphas:
        for spec in PLANCHEREL_FAMILY:
            f = ctx.build(spec, a)
            out.append(_rec("plancherel", f"alpha={a} {spec.label()}", f.spectral.norm(2),
                            f.norm(2), 1e-6, "equal", "|ratio-1| <= bound"))
    return out


def check_roundtrip(ctx: CheckContext):
    out = []
    for a in ctx.alphas:
        for spec in PLANCHEREL_FAMILY:
            f = ctx.build(spec, a)
            err = (f.spectral.physical - f).norm(2)
            out.append(_rec("roundtrip", f"alpha={a} {spec.label()}", err, f.norm(2), 1e-6,
                            notes="relative L2 error"))
    return out


def kernel_ode(alpha: float, x: float, y: float) -> complex:
    """E_alpha(x, iy) from the initial value problem T_1 u = iy u, u(0) = 1.

    With u = e + i v split by parity and z = |x|, y -> sign(x) y:
    e' = -y v, v' = y e - (2 alpha + 1) v / z, started from the Frobenius
    expansion at z0 = 1e-3.
    """
    if x == 0 or y == 0:
        return 1.0 + 0j
    y = y * np.sign(x)
    z_end = abs(x)
    c1 = 2.0 * alpha + 2.0
    c2 = 2.0 * alpha + 4.0
    z0 = min(1e-3, 0.5 * z_end)
    w = z0 * y
    e0 = 1.0 - w**2 / (2.0 * c1) + w**4 / (8.0 * c1 * c2)
    v0 = w / c1 - w**3 / (2.0 * c1 * c2)

    def rhs(z, u):
        e, v = u
        return [-y * v, y * e - (2.0 * alpha + 1.0) * v / z]

    sol = solve_ivp(rhs, (z0, z_end), [e0, v0], method="DOP853", rtol=1e-13, atol=1e-15)
    e, v = sol.y[:, -1]
    return complex(e, v)


def check_kernel(ctx: CheckContext):
    out = []
    xs = np.linspace(-20.0, 20.0, 100)
    rng = np.random.default_rng(ctx.seed)
    pts = rng.uniform(-3.0, 3.0, size=(20, 2))
    for a in ctx.alphas:
        big = float(np.max(np.abs(kernel_eval(a, xs[:, None], xs[None, :]))))
        out.append(_rec("kernel_bound", f"alpha={a}", big, 1.0, 1.0 + 1e-12,
                        notes="max |E(x,iy)| on 100x100 grid"))
        resid = 0.0
        for y in xs:
            lhs = t1_apply(lambda x, y=y: kernel_eval(a, x, y),
                           lambda x, y=y: kernel_derivative(a, x, y), xs, a)
            r = np.abs(lhs - 1j * y * kernel_eval(a, xs, y)) / (1.0 + abs(y))
            resid = max(resid, float(np.max(r)))
        out.append(_rec("kernel_eigen", f"alpha={a}", resid, 1.0, 1e-6,
                        notes="max |T1 E - iy E| / (1+|y|)"))
        dev = max(abs(kernel_eval(a, x, y) - kernel_ode(a, x, y)) for x, y in pts)
        out.append(_rec("kernel_ode", f"alpha={a}", dev, 1.0, 1e-8,
                        notes="closed form vs ODE at 20 random points"))
    return out


def check_partition(ctx: CheckContext):
    part = ctx.partition
    # radii covered by the configured block range, at most [2^-10, 2^10]
    lo, hi = max(-10, ctx.j_min + 2), min(10, ctx.j_max - 2)
    r = np.geomspace(2.0**lo, 2.0**hi, 20001)
    out = [_rec("partition_unity", "sum_j g_j(r)", float(np.max(np.abs(part.total(r) - 1.0))),
                1.0, 1e-12, notes=f"r in [2^{lo}, 2^{hi}]")]
    for u in (1.0, 1.3, 2.0):
        total = sum(np.asarray(part.base(np.ldexp(u * r, -j))) for j in range(lo - 4, hi + 5))
        out.append(_rec("partition_u", f"u={u}", float(np.max(np.abs(total - 1.0))), 1.0, 1e-12,
                        notes="sum_j g(2^-j u r)"))
    return out


def check_young(ctx: CheckContext):
    out = []
    for a in ctx.alphas:
        for fs in YOUNG_F:
            f = ctx.build(fs, a)
            for gs in YOUNG_G:
                g = ctx.build(gs, a)
                for p in (1.0, 2.0, INF):
                    rec = young_ratio(f, g, p)
                    out.append(_rec("young", f"alpha={a} f={fs.label()} g={gs.label()} p={_fmt(p)}",
                                    rec.lhs, rec.rhs, rec.bound))
    return out


def check_young_identity(ctx: CheckContext):
    out = []
    for a in ctx.alphas:
        m = ctx.measure(a)
        f = ctx.build(FunctionSpec("gaussian", {"scale": 1.0}), a)
        for p in (1.0, 2.0):
            best = 0.0
            for eps in (0.3, 0.1, 0.03):
                g = GridFunction.from_callable(
                    lambda x, e=eps: e ** (-m.homogeneity) * np.exp(-0.5 * (x / e) ** 2),
                    m, ctx.grid(a))
                rec = young_ratio(f, g, p)
                best = max(best, rec.ratio)
            out.append(_rec("young_identity", f"alpha={a} p={_fmt(p)}", best, 1.0, 0.99, "lower",
                            "approximate identity, eps down to 0.03"))
    return out


def check_hausdorff_young(ctx: CheckContext):
    out = []
    for a in ctx.alphas:
        for spec in PLANCHEREL_FAMILY[::2]:
            f = ctx.build(spec, a)
            for p in (1.25, 1.5, 2.0):
                rec = hausdorff_young_ratio(f, p)
                out.append(_rec("hausdorff_young", f"alpha={a} {spec.label()} p={p}",
                                rec.lhs, rec.rhs, rec.bound))
                if p == 2.0:
                    out.append(_rec("hausdorff_young_p2", f"alpha={a} {spec.label()}",
                                    rec.lhs, rec.rhs, 1e-6, "equal"))
    return out


# --------------------------------------------------------------------------
# besov suite


class _NormCache:
    """Block and continuous norms per (alpha, refine, spec), shared by checks."""

    def __init__(self, ctx: CheckContext):
        self.ctx = ctx
        self._blocks = {}
        self._cont = {}
        self._splits = {}

    def function(self, spec, a, refine):
        return self.ctx.build(spec, a, refine)

    def blocks(self, spec, a, refine):
        key = (spec.label(), a, refine)
        if key not in self._blocks:
            f = self.function(spec, a, refine)
            self._blocks[key] = block_norms(f, self.ctx.partition, EQUIV_PS, refine)
        return self._blocks[key]

    def continuous(self, spec, a, refine):
        key = (spec.label(), a, refine)
        if key not in self._cont:
            f = self.function(spec, a, refine)
            ts = t_grid(per_octave=16 * refine)
            phi = make_bump(1.0, 2.0, self.ctx.kappa)
            self._cont[key] = (ts, continuous_profile(f, phi, ts, EQUIV_PS, refine))
        return self._cont[key]

    def splits(self, spec, a, refine):
        key = (spec.label(), a, refine)
        if key not in self._splits:
            f = self.function(spec, a, refine)
            self._splits[key] = split_norms(f, INTERP_P, self.ctx.partition, refine)
        return self._splits[key]


_CACHES: dict = {}


def _cache(ctx: CheckContext) -> _NormCache:
    if ctx not in _CACHES:
        _CACHES.clear()
        _CACHES[ctx] = _NormCache(ctx)
    return _CACHES[ctx]


def equivalence_constants(ctx: CheckContext, a: float, refine: int) -> dict:
    """{(beta, p, q): (C, ratios)} with ratios continuous / discrete over NORM_FAMILY."""
    cache = _cache(ctx)
    out = {}
    for beta in EQUIV_BETAS:
        for p in EQUIV_PS:
            for q in EQUIV_QS:
                params = BesovParams(beta, p, q)
                ratios = []
                for spec in NORM_FAMILY:
                    d = DyadicNormProfile(cache.blocks(spec, a, refine)[p], params).value
                    ts, norms = cache.continuous(spec, a, refine)
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore", RangeWarning)
                        c = continuous_norm(None, make_bump(1.0, 2.0, ctx.kappa), params,
                                            per_octave=16 * refine, norms=norms[p])
                    ratios.append(c / d)
                ratios = np.array(ratios)
                out[(beta, p, q)] = (float(max(ratios.max(), 1.0 / ratios.min())), ratios)
    return out


def check_equivalence(ctx: CheckContext):
    out = []
    for a in ctx.alphas:
        base = equivalence_constants(ctx, a, 1)
        fine = equivalence_constants(ctx, a, 2)
        for key, (c0, r0) in base.items():
            c1 = fine[key][0]
            beta, p, q = key
            out.append(_rec("equivalence", f"alpha={a} beta={_fmt(beta)} p={_fmt(p)} q={_fmt(q)}",
                            abs(c1 / c0 - 1.0), 1.0, DRIFT_TOL,
                            notes=f"C={c0:.6g} refined C={c1:.6g} bracket=[{1 / c0:.6g},{c0:.6g}]"))
    return out


def check_embedding(ctx: CheckContext):
    cache = _cache(ctx)
    out = []
    for a in ctx.alphas:
        for q1, q2 in ((1.0, 2.0), (2.0, INF), (1.0, INF)):
            worst = 0.0
            for refine in (1, 2):
                for spec in NORM_FAMILY:
                    for p in EQUIV_PS:
                        for beta in EQUIV_BETAS:
                            prof = DyadicNormProfile(cache.blocks(spec, a, refine)[p],
                                                     BesovParams(beta, p, q1))
                            big, small = embedding_check(prof, q1, q2)
                            if small > 0:
                                worst = max(worst, big / small)
            out.append(_rec("embedding", f"alpha={a} q1={_fmt(q1)} q2={_fmt(q2)}", worst, 1.0,
                            1.0 + 1e-14, notes="max l^q2 / l^q1 over all computed profiles"))
    return out


def interpolation_brackets(ctx: CheckContext, a: float, refine: int) -> dict:
    """{(theta, q): ratios} of interpolation_norm / discrete_norm over NORM_FAMILY."""
    cache = _cache(ctx)
    b0_beta, b1_beta = INTERP_BETAS
    out = {}
    for q in EQUIV_QS:
        b0 = BesovParams(b0_beta, INTERP_P, q)
        b1 = BesovParams(b1_beta, INTERP_P, q)
        per_theta = {th: [] for th in INTERP_THETAS}
        for spec in NORM_FAMILY:
            sp = cache.splits(spec, a, refine)
            kfun = k_functional(None, b0, b1, splits=sp)
            for th in INTERP_THETAS:
                beta = (1.0 - th) * b0_beta + th * b1_beta
                d = DyadicNormProfile(sp.base, BesovParams(beta, INTERP_P, q)).value
                per_theta[th].append(interpolation_norm(th, q, None, b0, b1, kfun=kfun) / d)
        for th in INTERP_THETAS:
            out[(th, q)] = np.array(per_theta[th])
    return out


def check_interpolation(ctx: CheckContext):
    out = []
    for a in ctx.alphas:
        base = interpolation_brackets(ctx, a, 1)
        fine = interpolation_brackets(ctx, a, 2)
        for key, r0 in base.items():
            r1 = fine[key]
            lo0, hi0, lo1, hi1 = r0.min(), r0.max(), r1.min(), r1.max()
            drift = max(abs(lo1 / lo0 - 1.0), abs(hi1 / hi0 - 1.0))
            th, q = key
            out.append(_rec("interpolation", f"alpha={a} theta={th} q={_fmt(q)}", drift, 1.0,
                            DRIFT_TOL, notes=f"bracket=[{lo0:.6g},{hi0:.6g}] refined=[{lo1:.6g},{hi1:.6g}]"))
    return out


def check_truncation(ctx: CheckContext):
    out = []
    part = ctx.partition
    localized = FunctionSpec("spectral_moment", {"power": 2})
    compact = FunctionSpec("spectral_sum", {"terms": ((-3, 0, 1.0), (0, 1, 0.5), (3, 2, 0.25))})
    for a in ctx.alphas:
        for params in (BesovParams(1.0, 2.0, 2.0), BesovParams(2.0, 1.0, 1.0)):
            tag = f"alpha={a} beta={_fmt(params.beta)} p={_fmt(params.p)} q={_fmt(params.q)}"
            errs = truncation_convergence(ctx.build(localized, a), params, part)
            rise = float(np.max(np.diff(errs), initial=0.0))
            out.append(_rec("truncation_monotone", tag, max(rise, 0.0), 1.0, 0.0,
                            notes="largest increase of ||f-f_N|| in N"))
            out.append(_rec("truncation_edge", tag, errs[-1], 1.0, 1e-8, notes="||f-f_N|| at N=j_max"))
            errs_c = truncation_convergence(ctx.build(compact, a), params, part)
            out.append(_rec("truncation_exact", tag, float(np.max(errs_c[4:])), 1.0, 0.0,
                            notes="spectrum inside |j|<=3 annuli: zero for N>=4"))
        f = ctx.build(compact, a)
        for beta in (0.5, 1.0, 2.0, 4.0):
            val = DyadicNormProfile(block_norms(f, part, [2.0])[2.0], BesovParams(beta, 2.0, 2.0)).value
            out.append(_rec("schwartz_finite", f"alpha={a} beta={beta}", val, 1.0, 1e300,
                            notes="discrete norm finite"))
    return out


# --------------------------------------------------------------------------
# integrability suite


def check_hardy_littlewood(ctx: CheckContext):
    out = []
    for a in ctx.alphas:
        for spec in HL_FAMILY:
            f = ctx.build(spec, a)
            for p in (1.5, 2.0):
                rec = hardy_littlewood_ratio(f, p)
                name = f"alpha={a} {spec.label()} p={p}"
                out.append(_rec("hardy_littlewood_scale", name, rec.extra["scale_defect"], 1.0, 1e-3,
                                notes=f"ratio={rec.ratio:.10g}"))
                if p == 2.0:
                    out.append(_rec("hardy_littlewood_p2", name, rec.lhs, rec.rhs, 1e-6, "equal"))
    return out


def _integrability_record(check, name, rep, bound=0.9):
    if rep.negative_control:
        verdict = ("not-stabilized (consistent with sharpness)" if not rep.stabilized
                   else "stabilized")
        return _rec(check, name, rep.effective_ratio, 1.0, INF,
                    notes=f"negative-control: {verdict}")
    lhs = rep.effective_ratio if rep.hypothesis_converged else math.nan
    return _rec(check, name, lhs, 1.0, bound,
                notes=f"{rep.status}; hypothesis norm={rep.hypothesis_value:.6g}")


def check_integrability(ctx: CheckContext):
    out = []
    for a in ctx.alphas:
        m = ctx.measure(a)
        hom = m.homogeneity
        gauss = ctx.build(FunctionSpec("gaussian", {"scale": 1.0}), a)
        rep = integrability_report_l1(gauss, 2.0, ctx.partition)
        out.append(_integrability_record("integrability_l1", f"alpha={a} gaussian p=2", rep))
        fast = ctx.build(FunctionSpec("slow_decay", {"a": hom + 1.5, "b": 0.0}), a)
        for p in (1.5, 2.0):
            rep = integrability_report_l1(fast, p, ctx.partition)
            out.append(_integrability_record("integrability_l1",
                                             f"alpha={a} slow_decay(a=H+1.5) p={p}", rep))
        # case ii: p = 1 with beta above H
        rep = integrability_report_ls(fast, 1.0, hom + 0.25, 1.0, ctx.partition)
        out.append(_integrability_record("integrability_l1_p1",
                                         f"alpha={a} slow_decay(a=H+1.5) p=1 beta=H+0.25", rep))
        a_ls = 0.75 * hom
        slow = ctx.build(FunctionSpec("slow_decay", {"a": a_ls, "b": 0.0}), a)
        beta = a_ls - 0.5 * hom
        for s in ctx.ls_exponents:
            rep = integrability_report_ls(slow, 2.0, beta, s, ctx.partition)
            out.append(_integrability_record(
                "integrability_ls", f"alpha={a} slow_decay(a=0.75H) p=2 beta={beta:.4g} s={s}", rep))
    return out


CHECKS = {
    "plancherel": check_plancherel,
    "roundtrip": check_roundtrip,
    "kernel": check_kernel,
    "partition": check_partition,
    "young": check_young,
    "young_identity": check_young_identity,
    "hausdorff_young": check_hausdorff_young,
    "equivalence": check_equivalence,
    "embedding": check_embedding,
    "interpolation": check_interpolation,
    "truncation": check_truncation,
    "hardy_littlewood": check_hardy_littlewood,
    "integrability": check_integrability,
}

SUITES = {
    "core": ("plancherel", "roundtrip", "kernel", "partition", "young", "young_identity",
             "hausdorff_young"),
    "besov": ("equivalence", "embedding", "interpolation", "truncation"),
    "integrability": ("hardy_littlewood", "integrability"),
}
SUITES["all"] = SUITES["core"] + SUITES["besov"] + SUITES["integrability"]


def run_checks(names, ctx: CheckContext | None = None, threads: int = 1) -> list:
    """Run named checks; results are concatenated in the order of ``names``."""
    ctx = ctx or CheckContext()
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    if threads <= 1:
        return [rec for n in names for rec in CHECKS[n](ctx)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda n: CHECKS[n](ctx), names))
    return [rec for part in parts for rec in part]


def run_suite(suite: str, ctx: CheckContext | None = None, threads: int = 1) -> list:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return run_checks(SUITES[suite], ctx, threads)

"""Run configuration: a flat ``dotted.key = value`` text format.

Example::

    # rank-one weights, several alphas allowed
    measure.alpha = -0.5, 0, 0.7
    grid.r_max = 40
    grid.panels = 64
    grid.order = 16
    partition.j_min = -12
    partition.j_max = 12
    functions.g1.family = gaussian
    functions.g1.scale = 2
    functions.g1.parity = odd
    output.format = csv

Lines starting with ``#`` and blank lines are ignored.  Lists are comma
separated; ``spectral_sum`` terms are ``j:seed:coef`` triples separated by
``;``.  :func:`serialize_config` writes a canonical form that parses back to
an equal :class:`RunConfig`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .families import FAMILIES, PARITIES, FunctionSpec
from .measure import WeightedMeasure

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config", "serialize_config"]

FAMILY_PARAMS = {
    "gaussian": ("scale",),
    "shifted_gaussian": ("scale", "shift"),
    "hermite": ("scale",),
    "spectral_bump": ("j", "seed"),
    "spectral_sum": ("terms",),
    "spectral_moment": ("power",),
    "slow_decay": ("a", "b"),
    "zero": (),
}
INT_PARAMS = ("j", "seed", "power")
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    """Malformed configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters.

    ``alphas`` holds the Bessel index alpha = gamma + dim/2 - 1 of each
    measure to run; in dimension one this is the rank-one parameter.
    """

    alphas: tuple = (-0.5, 0.0, 0.7)
    dim: int = 1
    r_max: float = 40.0
    panels: int = 64
    order: int = 16
    j_min: int = -12
    j_max: int = 12
    bump_a: float = 0.5
    bump_b: float = 2.0
    bump_kappa: float = 2.0
    functions: tuple = field(default_factory=lambda: (("gauss", FunctionSpec("gaussian", {"scale": 1.0})),))
    checks: tuple = ()
    ls_exponents: tuple = (1.75, 2.0, 1.1)
    output_format: str = "csv"
    output_path: str | None = None
    seed: int = 0

    @property
    def gammas(self) -> tuple:
        return tuple(a - 0.5 * self.dim + 1.0 for a in self.alphas)

    def measures(self) -> tuple:
        if self.dim == 1:
            return tuple(WeightedMeasure.rank_one(a) for a in self.alphas)
        return tuple(WeightedMeasure(g, self.dim) for g in self.gammas)

    def function(self, fid: str) -> FunctionSpec:
        for name, spec in self.functions:
            if name == fid:
                return spec
        raise ConfigError(f"functions.{fid}", "unknown function id")

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=int(seed))


# --------------------------------------------------------------------------
# value parsing


def _float(key, text):
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {text!r}") from None
    if not math.isfinite(v):
        raise ConfigError(key, f"expected a finite number, got {text!r}")
    return v


def _int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {text!r}") from None


def _list(key, text, conv):
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise ConfigError(key, "empty list")
    return tuple(conv(key, t) for t in items)


def _terms(key, text):
    out = []
    for chunk in text.split(";"):
        parts = [p.strip() for p in chunk.split(":")]
        if len(parts) != 3:
            raise ConfigError(key, f"term {chunk.strip()!r} is not j:seed:coef")
        out.append((_int(key, parts[0]), _int(key, parts[1]), _float(key, parts[2])))
    return tuple(out)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


# --------------------------------------------------------------------------
# parse / serialize


def _lines(text: str):
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected key = value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}", "empty key")
        if key in seen:
            raise ConfigError(key, f"duplicate key (lines {seen[key]} and {lineno})")
        seen[key] = lineno
        yield key, value


def _function_specs(entries: dict, j_range) -> tuple:
    out = []
    for fid, kv in entries.items():
        prefix = f"functions.{fid}"
        if "family" not in kv:
            raise ConfigError(f"{prefix}.family", "missing")
        fam = kv.pop("family")
        if fam not in FAMILIES:
            raise ConfigError(f"{prefix}.family", f"unknown family {fam!r}")
        parity = kv.pop("parity", "even")
        if parity not in PARITIES:
            raise ConfigError(f"{prefix}.parity", f"must be one of {', '.join(PARITIES)}")
        params = {}
        for name, text in kv.items():
            key = f"{prefix}.{name}"
            if name not in FAMILY_PARAMS[fam]:
                raise ConfigError(key, f"unknown parameter for {fam}")
            if name == "terms":
                params[name] = _terms(key, text)
            elif name in INT_PARAMS:
                params[name] = _int(key, text)
            else:
                params[name] = _float(key, text)
        _check_family(prefix, fam, params, j_range)
        out.append((fid, FunctionSpec(fam, params, parity)))
    return tuple(out)


def _check_family(prefix, fam, params, j_range):
    lo, hi = j_range
    if "scale" in params and not params["scale"] > 0:
        raise ConfigError(f"{prefix}.scale", "must be positive")
    if "j" in params and not lo <= params["j"] <= hi:
        raise ConfigError(f"{prefix}.j", f"must lie in the partition range [{lo}, {hi}]")
    if fam == "spectral_sum":
        if "terms" not in params:
            raise ConfigError(f"{prefix}.terms", "missing")
        for j, _, _ in params["terms"]:
            if not lo <= j <= hi:
                raise ConfigError(f"{prefix}.terms", f"j={j} outside the partition range")
    if "power" in params and params["power"] < 0:
        raise ConfigError(f"{prefix}.power", "must be >= 0")
    if "a" in params and not params["a"] > 0:
        raise ConfigError(f"{prefix}.a", "must be positive")
    if "b" in params and params["b"] < 0:
        raise ConfigError(f"{prefix}.b", "must be >= 0")


def parse_config(text: str) -> RunConfig:
    """Parse the dotted key/value format, raising :class:`ConfigError` on any problem."""
    from .checks import CHECKS

    kw = {}
    alphas = gammas = None
    dim = 1
    funcs: dict = {}
    for key, value in _lines(text):
        if key == "measure.alpha":
            alphas = _list(key, value, _float)
        elif key == "measure.gamma":
            gammas = _list(key, value, _float)
        elif key == "measure.dim":
            dim = _int(key, value)
            if dim < 1:
                raise ConfigError(key, "must be a positive integer")
        elif key == "grid.r_max":
            kw["r_max"] = _float(key, value)
        elif key == "grid.panels":
            kw["panels"] = _int(key, value)
        elif key == "grid.order":
            kw["order"] = _int(key, value)
        elif key == "partition.j_min":
            kw["j_min"] = _int(key, value)
        elif key == "partition.j_max":
            kw["j_max"] = _int(key, value)
        elif key == "partition.bump.a":
            kw["bump_a"] = _float(key, value)
        elif key == "partition.bump.b":
            kw["bump_b"] = _float(key, value)
        elif key == "partition.bump.kappa":
            kw["bump_kappa"] = _float(key, value)
        elif key.startswith("functions."):
            parts = key.split(".")
            if len(parts) != 3 or not parts[1] or not parts[2]:
                raise ConfigError(key, "expected functions.<id>.<field>")
            funcs.setdefault(parts[1], {})[parts[2]] = value
        elif key == "checks.run":
            kw["checks"] = _list(key, value, lambda k, t: t)
            bad = [c for c in kw["checks"] if c not in CHECKS]
            if bad:
                raise ConfigError(key, f"unknown check(s): {', '.join(bad)}")
        elif key == "checks.integrability.s":
            kw["ls_exponents"] = _list(key, value, _float)
            if any(not 1.0 <= s <= 2.0 for s in kw["ls_exponents"]):
                raise ConfigError(key, "exponents must lie in [1, 2] (p = 2 checks)")
        elif key == "output.format":
            if value not in FORMATS:
                raise ConfigError(key, f"must be one of {', '.join(FORMATS)}")
            kw["output_format"] = value
        elif key == "output.path":
            kw["output_path"] = value or None
        elif key == "seed":
            kw["seed"] = _int(key, value)
            if not 0 <= kw["seed"] < 2**64:
                raise ConfigError(key, "must be an unsigned 64-bit integer")
        else:
            raise ConfigError(key, "unknown key")

    if alphas is not None and gammas is not None:
        if len(alphas) != len(gammas) or any(
                not math.isclose(a, g + 0.5 * dim - 1.0, abs_tol=1e-12) for a, g in zip(alphas, gammas)):
            raise ConfigError("measure.alpha", "inconsistent with measure.gamma and measure.dim "
                                               "(need alpha = gamma + dim/2 - 1)")
    if alphas is None and gammas is not None:
        alphas = tuple(g + 0.5 * dim - 1.0 for g in gammas)
    if alphas is not None:
        if any(a < 0.5 * dim - 1.0 for a in alphas):
            raise ConfigError("measure.alpha" if gammas is None else "measure.gamma",
                              "needs gamma >= 0, i.e. alpha >= dim/2 - 1")
        kw["alphas"] = alphas
    elif dim != 1:
        raise ConfigError("measure.gamma", "required when measure.dim > 1")
    kw["dim"] = dim

    cfg = RunConfig(**kw)
    if not cfg.r_max > 0.25:
        raise ConfigError("grid.r_max", "must exceed 0.25")
    if cfg.panels < 1:
        raise ConfigError("grid.panels", "must be positive")
    if cfg.order < 2:
        raise ConfigError("grid.order", "must be at least 2")
    if cfg.j_min > 0 or cfg.j_max < 0:
        raise ConfigError("partition.j_min", "the range must contain 0")
    if cfg.bump_a != 0.5:
        raise ConfigError("partition.bump.a", "the dyadic partition needs a bump on [1/2, 2]")
    if cfg.bump_b != 2.0:
        raise ConfigError("partition.bump.b", "the dyadic partition needs a bump on [1/2, 2]")
    if not cfg.bump_kappa > 0:
        raise ConfigError("partition.bump.kappa", "must be positive")
    if funcs:
        cfg = replace(cfg, functions=_function_specs(funcs, (cfg.j_min, cfg.j_max)))
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("--config", f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; ``parse_config(serialize_config(c)) == c``."""
    lines = []
    lines.append("measure.alpha = " + ", ".join(_fmt(a) for a in cfg.alphas))
    if cfg.dim != 1:
        lines.append(f"measure.dim = {cfg.dim}")
    lines += [
        f"grid.r_max = {_fmt(cfg.r_max)}",
        f"grid.panels = {cfg.panels}",
        f"grid.order = {cfg.order}",
        f"partition.j_min = {cfg.j_min}",
        f"partition.j_max = {cfg.j_max}",
        f"partition.bump.a = {_fmt(cfg.bump_a)}",
        f"partition.bump.b = {_fmt(cfg.bump_b)}",
        f"partition.bump.kappa = {_fmt(cfg.bump_kappa)}",
    ]
    for fid, spec in cfg.functions:
        lines.append(f"functions.{fid}.family = {spec.family}")
        lines.append(f"functions.{fid}.parity = {spec.parity}")
        for name in sorted(spec.params):
            v = spec.params[name]
            if name == "terms":
                text = "; ".join(f"{j}:{s}:{_fmt(float(c))}" for j, s, c in v)
            else:
                text = _fmt(v)
            lines.append(f"functions.{fid}.{name} = {text}")
    if cfg.checks:
        lines.append("checks.run = " + ", ".join(cfg.checks))
    lines.append("checks.integrability.s = " + ", ".join(_fmt(s) for s in cfg.ls_exponents))
    lines.append(f"output.format = {cfg.output_format}")
    if cfg.output_path:
        lines.append(f"output.path = {cfg.output_path}")
    lines.append(f"seed = {cfg.seed}")
    return "\n".join(lines) + "\n"

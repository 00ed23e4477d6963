"""Command-line front end: ``dunkl-besov {transform,besov-norm,check,report}``.

Exit status is 0 when everything passes, 1 when a check fails and 2 on a
usage or configuration error.  ``DUNKL_BESOV_THREADS`` caps the number of
checks run concurrently; results are merged in suite order so reports do
not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings

from .besov import (
    BesovParams,
    DyadicNormProfile,
    RangeWarning,
    block_norms,
    continuous_norm,
    interpolation_norm,
    k_functional,
    split_norms,
)
from .checks import SUITES, CheckContext, run_checks, run_suite
from .config import ConfigError, RunConfig, load_config
from .families import build
from .littlewood_paley import make_bump, normalize_dyadic
from .measure import QuadratureRule
from .report import ValidationReport, format_float, read_report

__all__ = ["main"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
THREADS_ENV = "DUNKL_BESOV_THREADS"


class UsageError(Exception):
    """Invalid arguments or environment; reported with exit status 2."""


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _parse_q(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'inf', got {text!r}") from None


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def _emit(text: str, path: str | None):
    if path:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _table(columns, rows, fmt: str) -> str:
    def cell(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return format_float(v)
        return str(v)

    if fmt == "json":
        recs = [{c: (v if not isinstance(v, float) or math.isfinite(v) else format_float(v))
                 for c, v in zip(columns, row)} for row in rows]
        return json.dumps({"columns": list(columns), "records": recs}, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([cell(v) for v in row])
    return buf.getvalue()


def _grid(cfg: RunConfig, m) -> QuadratureRule:
    return QuadratureRule(r_max=cfg.r_max, panels=cfg.panels, order=cfg.order, origin_exponent=m.nu)


# --------------------------------------------------------------------------
# commands


def cmd_transform(cfg: RunConfig, fid: str, fmt: str) -> str:
    """(alpha, r, Re, Im) samples of the transform of function ``fid`` for each measure."""
    spec = cfg.function(fid)
    rows = []
    for a, m in zip(cfg.alphas, cfg.measures()):
        g = build(spec, m, _grid(cfg, m)).spectral
        odd = g.odd_part if g.odd_part is not None else 0.0 * g.even_part
        for r, e, o in zip(g.nodes, g.even_part, odd):
            rows.append((float(a), float(r), float(e) + 0.0, float(o) + 0.0))  # no -0.0
    return _table(("alpha", "r", "real", "imag"), rows, fmt)


def cmd_besov_norm(cfg: RunConfig, fid: str, beta: float, p: float, q: float,
                   characterization: str, fmt: str, beta0: float | None = None,
                   beta1: float | None = None) -> str:
    """One row per measure: characterization, value and converged flag."""
    spec = cfg.function(fid)
    params = BesovParams(beta, p, q)
    part = normalize_dyadic(make_bump(cfg.bump_a, cfg.bump_b, cfg.bump_kappa), cfg.j_min, cfg.j_max)
    rows = []
    for a, m in zip(cfg.alphas, cfg.measures()):
        f = build(spec, m, _grid(cfg, m))
        notes = "sup convention" if math.isinf(q) else ""
        if characterization == "discrete":
            prof = DyadicNormProfile(block_norms(f, part, [p])[p], params)
            value, converged = prof.value, prof.converged
        elif characterization == "continuous":
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", RangeWarning)
                value = continuous_norm(f, make_bump(1.0, 2.0, cfg.bump_kappa), params)
            converged = not any(issubclass(w.category, RangeWarning) for w in caught)
        else:
            b0v = 2.0 * beta if beta0 is None else beta0
            b1v = 0.5 * beta if beta1 is None else beta1
            if b0v == b1v or not min(b0v, b1v) < beta < max(b0v, b1v):
                raise ValueError("interpolation needs beta strictly between beta0 and beta1")
            theta = (b0v - beta) / (b0v - b1v)
            b0, b1 = BesovParams(b0v, p, q), BesovParams(b1v, p, q)
            sp = split_norms(f, p, part)
            value = interpolation_norm(theta, q, None, b0, b1, kfun=k_functional(None, b0, b1, splits=sp))
            converged = (DyadicNormProfile(sp.base, b0).converged
                         and DyadicNormProfile(sp.base, b1).converged)
            notes = ("; ".join(x for x in (notes, f"upper estimate, beta0={b0v:g} beta1={b1v:g} "
                                                  f"theta={theta:.6g}") if x))
        rows.append((float(a), fid, characterization, float(beta), float(p), float(q),
                     float(value), bool(converged), notes))
    cols = ("alpha", "function", "characterization", "beta", "p", "q", "value", "converged", "notes")
    return _table(cols, rows, fmt)


def cmd_check(cfg: RunConfig, suite: str, threads: int = 1) -> ValidationReport:
    if cfg.dim != 1:
        raise ConfigError("measure.dim", "check suites run in the rank-one setting (dim = 1)")
    ctx = CheckContext.from_config(cfg)
    if cfg.checks:
        names = [n for n in SUITES[suite] if n in cfg.checks]
        records = run_checks(names, ctx, threads)
    else:
        records = run_suite(suite, ctx, threads)
    return ValidationReport.from_records(records)


# --------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dunkl-besov", description="Dunkl transforms, Besov-Dunkl norms "
                                "and a validation harness.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_format=True):
        sp.add_argument("--config", help="dotted key = value configuration file")
        sp.add_argument("--output", help="output path (default: output.path or stdout)")
        if with_format:
            sp.add_argument("--format", choices=("csv", "json"), help="output format")
        sp.add_argument("--seed", type=_seed, help="override the configured seed")

    t = sub.add_parser("transform", help="sample the transform of a configured function")
    common(t)
    t.add_argument("--function", required=True, help="function id from the config")

    b = sub.add_parser("besov-norm", help="one Besov-Dunkl norm of a configured function")
    common(b)
    b.add_argument("--function", required=True, help="function id from the config")
    b.add_argument("--beta", type=float, required=True)
    b.add_argument("--p", type=_parse_q, required=True)
    b.add_argument("--q", type=_parse_q, required=True)
    b.add_argument("--characterization", choices=("discrete", "continuous", "interpolation"),
                   default="discrete")
    b.add_argument("--beta0", type=float, help="interpolation endpoint (default 2 beta)")
    b.add_argument("--beta1", type=float, help="interpolation endpoint (default beta / 2)")

    c = sub.add_parser("check", help="run a validation suite and write a report")
    common(c)
    c.add_argument("--suite", choices=tuple(SUITES), default="all")

    r = sub.add_parser("report", help="re-serialize a report and summarize pass/fail")
    r.add_argument("input", help="CSV or JSON report")
    r.add_argument("--output", help="output path (default: stdout)")
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "report":
            try:
                with open(args.input, encoding="utf-8") as fh:
                    rep = read_report(fh.read())
            except OSError as exc:
                raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
            _emit(rep.dumps(args.format), args.output)
            print(f"{len(rep.rows)} records, {len(rep.failures)} failed", file=sys.stderr)
            return EXIT_OK if rep.passed else EXIT_FAIL

        cfg = _config(args)
        fmt = args.format or cfg.output_format
        out = args.output or cfg.output_path
        if args.command == "transform":
            _emit(cmd_transform(cfg, args.function, fmt), out)
            return EXIT_OK
        if args.command == "besov-norm":
            _emit(cmd_besov_norm(cfg, args.function, args.beta, args.p, args.q,
                                 args.characterization, fmt, args.beta0, args.beta1), out)
            return EXIT_OK
        threads = _threads()
        rep = cmd_check(cfg, args.suite, threads)
        _emit(rep.dumps(fmt), out)
        for row in rep.failures:
            print(f"FAIL {row['check']} {row['name']}: {row['notes']}", file=sys.stderr)
        print(f"{len(rep.rows)} records, {len(rep.failures)} failed", file=sys.stderr)
        return EXIT_OK if rep.passed else EXIT_FAIL
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line front end: every engine behind one dispatcher.

Subcommands: gamma, gamma-table, gamma-exact, toda-coeffs, painleve-check,
toda-check, ik-asymptotics, aliquot, cf, divisor-variance, a-k.  Reports are
JSON by default (decimal strings for all high-precision numbers, schema_version
for downstream stability); latex/csv/plain where they make sense.  Exit codes:
0 success, 1 usage error, 2 precision failure.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from . import exactpoly, gammaft, hankel, toda
from .aliquot import (
    c_aliquot_truncated,
    continued_fraction,
    i_d_poisson,
    i_d_quadrature,
)
from .divisor import a_k_constant, sieve_dk, variance_experiment
from .precision import PrecisionContext, PrecisionError, to_str

SCHEMA_VERSION = 1

FORMATS = ("json", "csv", "latex", "plain")


@dataclass(frozen=True)
class RunConfig:
    digits: int = 50
    format: str = "json"
    threads: int = 1
    cache_dir: str = ""

    def __post_init__(self):
        if self.digits < 10:
            raise ValueError("digits must be >= 10")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.digits)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _report(cfg: RunConfig, command: str, payload: dict, checks=None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "digits": cfg.digits,
        "threads": cfg.threads,
    }
    doc.update(payload)
    if checks:
        doc["checks"] = checks
    return doc


def _check(name: str, value, tolerance, passed: bool) -> dict:
    return {
        "check": name,
        "value": value,
        "tolerance": tolerance,
        "pass": bool(passed),
    }


def _emit(cfg: RunConfig, doc, latex: str = None, plain: str = None) -> str:
    if cfg.format == "latex" and latex is not None:
        return latex
    if cfg.format == "plain" and plain is not None:
        return plain
    if cfg.format == "csv":
        rows = doc.get("rows")
        if rows:
            cols = list(rows[0])
            out = [",".join(cols)]
            for row in rows:
                out.append(",".join(str(row[c]) for c in cols))
            return "\n".join(out)
    return json.dumps(doc, indent=2, sort_keys=True)


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError as exc:
        raise SystemExit(f"not a rational number: {text}") from exc


def _parse_grid(text: str) -> list:
    return [Fraction(part) for part in text.split(",") if part.strip()]


# --- subcommand handlers --------------------------------------------------------


def _cmd_gamma(cfg: RunConfig, args) -> str:
    qcfg = gammaft.QuadratureConfig(truncation=args.truncation, ctx=cfg.ctx)
    c = _parse_rational(args.c)
    value = gammaft.gamma_numeric(args.k, c, qcfg)
    doc = _report(
        cfg,
        "gamma",
        {"k": args.k, "c": str(c), "value": to_str(value, cfg.digits)},
    )
    return _emit(cfg, doc, plain=to_str(value, cfg.digits))


def _cmd_gamma_table(cfg: RunConfig, args) -> str:
    if args.engine == "exact":
        g = exactpoly.gamma_exact(args.k)
        pieces = [g.scaled_piece(j) for j in range(args.k)]
    else:
        qcfg = gammaft.QuadratureConfig(ctx=cfg.ctx)
        pieces = [
            [int(c) for c in gammaft.interpolate_piece(args.k, j, qcfg).coeffs]
            for j in range(args.k)
        ]
        g = exactpoly.GammaPolySet(
            args.k,
            exactpoly.PiecewisePolynomial(
                0,
                [
                    exactpoly.Polynomial(
                        [
                            Fraction(v, _factorial(args.k * args.k - 1))
                            for v in piece
                        ]
                    )
                    for piece in pieces
                ],
            ),
        )
    doc = _report(
        cfg,
        "gamma-table",
        {
            "k": args.k,
            "engine": args.engine,
            "pieces": [
                {
                    "interval": [j, j + 1],
                    "coeffs_scaled": pieces[j],
                    "scale": "(k^2-1)!",
                }
                for j in range(args.k)
            ],
        },
    )
    return _emit(cfg, doc, latex=exactpoly.gamma_to_latex(g))


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _cmd_gamma_exact(cfg: RunConfig, args) -> str:
    g = exactpoly.gamma_exact(args.k)
    if args.c is not None:
        c = _parse_rational(args.c)
        value = exactpoly.eval_pp(g.pp, c)
        doc = _report(
            cfg,
            "gamma-exact",
            {"k": args.k, "c": str(c), "value": str(value)},
        )
        return _emit(cfg, doc, plain=str(value))
    doc = _report(cfg, "gamma-exact", json.loads(exactpoly.gamma_to_json(g)))
    doc["command"] = "gamma-exact"
    return _emit(cfg, doc, latex=exactpoly.gamma_to_latex(g))


def _cmd_toda_coeffs(cfg: RunConfig, args) -> str:
    rows = [
        {"m": m, "k": args.k, "value": str(toda.c_coeff(m, args.k))}
        for m in range(1, args.max_m + 1)
    ]
    doc = _report(cfg, "toda-coeffs", {"k": args.k, "rows": rows})
    plain = "\n".join(f"c_{r['m']}({args.k}) = {r['value']}" for r in rows)
    return _emit(cfg, doc, plain=plain)


def _residual_rows(cfg: RunConfig, args, checker, name: str):
    rows = []
    checks = []
    for t in _parse_grid(args.t_grid):
        tf = mp.mpf(t.numerator) / t.denominator
        res = checker(args.k, tf, cfg.ctx)
        rows.append(
            {
                "k": args.k,
                "t": str(t),
                "residual": to_str(res["residual"], 10),
                "tolerance": to_str(res["tolerance"], 5),
                "pass": res["pass"],
            }
        )
        checks.append(
            _check(name, to_str(res["residual"], 10), to_str(res["tolerance"], 5), res["pass"])
        )
    return rows, checks


def _cmd_painleve(cfg: RunConfig, args) -> str:
    rows, checks = _residual_rows(cfg, args, hankel.painleve_check, "painleve_v_sigma_residual")
    doc = _report(cfg, "painleve-check", {"k": args.k, "rows": rows}, checks)
    return _emit(cfg, doc)


def _cmd_toda_check(cfg: RunConfig, args) -> str:
    rows, checks = _residual_rows(cfg, args, hankel.toda_check, "toda_lattice_residual")
    doc = _report(cfg, "toda-check", {"k": args.k, "rows": rows}, checks)
    return _emit(cfg, doc)


def _cmd_ik_asymptotics(cfg: RunConfig, args) -> str:
    rows = []
    for u in _parse_grid(args.u_grid):
        uf = mp.mpf(u.numerator) / u.denominator
        v = gammaft.ik_asymptotic_check(args.k, uf, cfg.ctx)
        rows.append({"k": args.k, "u": str(u), "scaled_remainder": to_str(v, 10)})
    doc = _report(cfg, "ik-asymptotics", {"k": args.k, "rows": rows})
    return _emit(cfg, doc)


def _cmd_aliquot(cfg: RunConfig, args) -> str:
    ctx = cfg.ctx
    value = i_d_poisson(args.d, ctx)
    quad = i_d_quadrature(args.d, ctx)
    with ctx.workdps():
        agreement = abs(value - quad)
        tolerance = mp.mpf(10) ** (-(cfg.digits - 8)) * max(1, abs(value))
    payload = {
        "d": args.d,
        "i_d": to_str(value, cfg.digits),
        "i_d_quadrature": to_str(quad, cfg.digits),
        "method_agreement": to_str(agreement, 5),
    }
    checks = [
        _check(
            "lattice_vs_quadrature_agreement",
            to_str(agreement, 5),
            to_str(tolerance, 5),
            agreement <= tolerance,
        )
    ]
    if args.cf:
        cl = continued_fraction(value, ctx)
        payload["convergents"] = [
            {"n": i, "a": str(a), "b": str(b)}
            for i, (a, b) in enumerate(cl.convergents[: cl.reliable_count])
        ]
        payload["reliable_count"] = cl.reliable_count
    if args.local_factors:
        rep = c_aliquot_truncated(args.d, args.local_factors, ctx)
        payload["local_factors"] = {
            str(ell): str(f) for ell, f in rep["local_factors"].items()
        }
        payload["c_aliquot_truncated"] = to_str(rep["value"], cfg.digits)
    doc = _report(cfg, "aliquot", payload, checks)
    return _emit(cfg, doc, plain=payload["i_d"])


def _cmd_cf(cfg: RunConfig, args) -> str:
    ctx = cfg.ctx
    value = i_d_poisson(args.d, PrecisionContext(cfg.digits + 15))
    cl = continued_fraction(value, ctx)
    count = min(cl.reliable_count, args.max_convergents or cl.reliable_count)
    doc = _report(
        cfg,
        "cf",
        {
            "d": args.d,
            "value": to_str(value, cfg.digits),
            "partial_quotients": list(cl.partial_quotients[:count]),
            "convergents": [
                {"n": i, "a": str(a), "b": str(b)}
                for i, (a, b) in enumerate(cl.convergents[:count])
            ],
            "reliable_count": cl.reliable_count,
        },
    )
    return _emit(cfg, doc)


def _cmd_divisor_variance(cfg: RunConfig, args) -> str:
    rep = variance_experiment(args.k, args.X, args.alpha, args.samples, cfg.ctx)
    payload = {
        "parameters": {
            "k": args.k,
            "X": args.X,
            "alpha": args.alpha,
            "H": rep["H"],
            "grid": rep["grid"],
        },
        "empirical": repr(rep["empirical"]),
        "predicted": to_str(rep["predicted"], 15),
        "ratio": to_str(rep["ratio"], 10),
        "band": list(rep["band"]),
        "in_band": rep["in_band"],
        "note": rep["note"],
    }
    doc = _report(cfg, "divisor-variance", payload)
    return _emit(cfg, doc)


def _cmd_a_k(cfg: RunConfig, args) -> str:
    est = a_k_constant(args.k, args.prime_limit, cfg.ctx)
    doc = _report(
        cfg,
        "a-k",
        {
            "k": args.k,
            "prime_limit": est.prime_limit,
            "value": to_str(est.value, cfg.digits),
            "error_bar": to_str(est.error_bar, 5),
        },
    )
    return _emit(cfg, doc, plain=to_str(est.value, cfg.digits))


# --- dispatcher -------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="gammapoly", description=__doc__, allow_abbrev=False)
    parser.add_argument("--digits", type=int, default=None)
    parser.add_argument("--format", choices=FORMATS, default=None)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--cache-dir", default=None)
    parser.add_argument("--config", default=None, help="key=value file merged under flags")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", help="single gamma_k(c) value, numeric engine")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--truncation", type=float, default=16.0)
    p.set_defaults(func=_cmd_gamma)

    p = sub.add_parser("gamma-table", help="full piecewise table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--engine", choices=("numeric", "exact"), default="numeric")
    p.set_defaults(func=_cmd_gamma_table)

    p = sub.add_parser("gamma-exact", help="exact engine value or table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", default=None)
    p.set_defaults(func=_cmd_gamma_exact)

    p = sub.add_parser("toda-coeffs", help="exact log-series coefficients c_m(k)")
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_toda_coeffs)

    p = sub.add_parser("painleve-check", help="sigma-form ODE residuals on a t-grid")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t-grid", default="1/4,1/2,1,2,5,10")
    p.set_defaults(func=_cmd_painleve)

    p = sub.add_parser("toda-check", help="Toda identity residuals on a t-grid")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t-grid", default="1/4,1/2,1,2,5,10")
    p.set_defaults(func=_cmd_toda_check)

    p = sub.add_parser("ik-asymptotics", help="scaled I_k decay remainders")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--u-grid", default="5,10,20,40")
    p.set_defaults(func=_cmd_ik_asymptotics)

    p = sub.add_parser("aliquot", help="I(d) by lattice sum and quadrature")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--cf", action="store_true")
    p.add_argument("--local-factors", type=int, default=0, metavar="ELL_MAX")
    p.set_defaults(func=_cmd_aliquot)

    p = sub.add_parser("cf", help="continued fraction of I(d)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--max-convergents", type=int, default=0)
    p.set_defaults(func=_cmd_cf)

    p = sub.add_parser("divisor-variance", help="short-interval variance experiment")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--samples", type=int, default=0)
    p.set_defaults(func=_cmd_divisor_variance)

    p = sub.add_parser("a-k", help="truncated Euler product for a_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--prime-limit", type=int, default=10**4)
    p.set_defaults(func=_cmd_a_k)

    return parser


def _load_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def _resolve_config(args) -> RunConfig:
    file_cfg = _load_config_file(args.config) if args.config else {}
    digits = args.digits if args.digits is not None else int(file_cfg.get("digits", 50))
    fmt = args.format if args.format is not None else file_cfg.get("format", "json")
    threads = args.threads if args.threads is not None else int(file_cfg.get("threads", 1))
    cache = args.cache_dir
    if cache is None:
        cache = file_cfg.get("cache_dir", os.environ.get("GAMMAPOLY_CACHE_DIR", ""))
    return RunConfig(digits=digits, format=fmt, threads=threads, cache_dir=cache)


def dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        cfg = _resolve_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        with cfg.ctx.workdps():
            print(args.func(cfg, args))
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    raise SystemExit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

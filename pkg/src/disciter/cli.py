"""Command-line front end.

    disciter SUBCOMMAND --config experiment.ini [--out DIR] [--seed N]
                        [--format csv|json|svg]

Subcommands: orbit, rate, slope, qg, semiflow, hm, opnorm, accept.  The config
file is flat key=value under section headers (INI); unknown sections or keys
are rejected.  Identical config and seed produce byte-identical artifacts.
JSON artifacts carry a versioned "schema" field; plots are self-contained SVG
renderings of the primary CSV series.
"""

from __future__ import annotations

import argparse
import configparser
import math
import os
import sys

import numpy as np

from . import acceptance, harmonic, maps, opnorm, qgeo, rates, semiflow, slope
from .errors import ConfigError, InvalidPointError, UnsupportedModelError
from .util import geometric_grid, write_csv, write_json, write_svg_series

_ALLOWED_KEYS = {
    "map": {"name", "start", "custom_expr", "custom_tau_angle",
            "custom_fprime_tau", "custom_univalent"},
    "grid": {"n_max", "include"},
    "rate": {"epsilon", "lower_eps", "non_tangential"},
    "slope": {"tail_fraction"},
    "qg": {"m_max"},
    "semiflow": {"t_max", "n_embed"},
    "wos": {"epsilon", "cap", "walks", "seed"},
    "hm": {"mode", "z", "theta1", "theta2", "target", "slit", "cut"},
    "opnorm": {"p", "alpha"},
    "output": {"basename"},
    "tolerances": {"closed_form", "quadrature"},
}


def load_config(path):
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except configparser.Error as exc:
        # configparser reports offending line numbers in its message
        raise ConfigError(f"config parse error: {exc}") from exc
    cfg = {}
    for section in parser.sections():
        if section not in _ALLOWED_KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        for key in parser[section]:
            if key not in _ALLOWED_KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
        cfg[section] = dict(parser[section])
    return cfg


def _get(cfg, section, key, cast, default):
    try:
        raw = cfg[section][key]
    except KeyError:
        return default
    try:
        if cast is bool:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for [{section}] {key}: {raw!r}") from exc


def _resolve_map(cfg):
    name = _get(cfg, "map", "name", str, "koebe")
    if name.startswith("custom:"):
        sub = load_config(name.partition(":")[2])
        cfg = {**cfg, "map": {**sub.get("map", {}), **cfg.get("map", {})}}
        name = "custom"
    if name == "custom":
        expr = _get(cfg, "map", "custom_expr", str, None)
        if not expr:
            raise ConfigError("custom map needs custom_expr")
        import cmath as _cmath
        code = compile(expr, "<custom_expr>", "eval")

        def func(z, _code=code):
            return eval(_code, {"__builtins__": {}},
                        {"z": z, "cmath": _cmath, "np": np, "abs": abs})

        return maps.custom_map(
            func,
            tau_angle=_get(cfg, "map", "custom_tau_angle", float, 0.0),
            f_prime_tau=_get(cfg, "map", "custom_fprime_tau", float, 1.0),
            univalent=_get(cfg, "map", "custom_univalent", bool, False))
    try:
        return maps.resolve_map(name)
    except UnsupportedModelError as exc:
        raise ConfigError(str(exc)) from exc


def _start_point(cfg):
    raw = _get(cfg, "map", "start", str, "0")
    try:
        return complex(raw.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"bad start point {raw!r}") from exc


def _grid(cfg, f):
    include = _get(cfg, "grid", "include", str, "")
    if include:
        ns = np.array(sorted({int(tok) for tok in include.split(",")}), dtype=np.int64)
        if ns.size == 0:
            raise ConfigError("empty grid")
        return ns
    n_max = _get(cfg, "grid", "n_max", int, min(10 ** 6, f.n_cap - 1))
    if n_max < 1:
        raise ConfigError("empty grid: n_max must be >= 1")
    return geometric_grid(min(n_max, f.n_cap - 1))


def _outpath(args, cfg, ext):
    base = cfg.get("output", {}).get("basename", args.subcommand)
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, f"{base}.{ext}")


def _emit(args, cfg, header, columns, report_dict, svg_series=None):
    if args.format == "csv":
        write_csv(_outpath(args, cfg, "csv"), header, columns)
    elif args.format == "json":
        write_json(_outpath(args, cfg, "json"), report_dict)
    else:
        xs, ys, title, xl, yl = svg_series
        write_svg_series(_outpath(args, cfg, "svg"), xs, ys, title, xl, yl)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_orbit(args, cfg):
    f = _resolve_map(cfg)
    z = _start_point(cfg)
    ns = _grid(cfg, f)
    orbit = maps.iterate(f, z, int(ns[-1]))
    zs, sat = orbit.disc_point(ns)
    zs = np.atleast_1d(zs)
    sat = np.atleast_1d(sat)
    _emit(args, cfg, ["n", "re", "im", "saturated"],
          [ns, zs.real, zs.imag, sat],
          {"schema": "disciter/orbit/v1", "map": f.name,
           "points": [{"n": int(n), "re": float(p.real), "im": float(p.imag),
                       "saturated": bool(s)} for n, p, s in zip(ns, zs, sat)]},
          (ns, np.abs(zs), f"orbit modulus: {f.name}", "n", "|f^n(z)|"))
    return 0


def _cmd_rate(args, cfg):
    f = _resolve_map(cfg)
    report = rates.rate_report(
        f, _start_point(cfg), _grid(cfg, f),
        epsilon=_get(cfg, "rate", "epsilon", float, 0.5),
        lower_eps=_get(cfg, "rate", "lower_eps", float, 0.9))
    header, cols = report.csv_columns()
    _emit(args, cfg, header, cols, report.to_dict(),
          (np.log(np.maximum(report.ns, 1)), report.divergence.d,
           f"divergence rate: {f.name}", "log n", "d(z, f^n z)"))
    return 0


def _cmd_slope(args, cfg):
    f = _resolve_map(cfg)
    ns = _grid(cfg, f)
    orbit = maps.iterate(f, _start_point(cfg), int(ns[-1]))
    report = slope.slope_report(orbit, ns,
                                tail_fraction=_get(cfg, "slope", "tail_fraction",
                                                   float, 0.125))
    header, cols = report.csv_columns()
    _emit(args, cfg, header, cols, report.to_dict(),
          (np.log(np.maximum(ns, 1)), report.thetas,
           f"slope: {f.name}", "log n", "theta_n"))
    return 0


def _cmd_qg(args, cfg):
    f = _resolve_map(cfg)
    m_max = _get(cfg, "qg", "m_max", int, min(10 ** 4, f.n_cap - 1))
    orbit = maps.iterate(f, _start_point(cfg), m_max + 1)
    cert = qgeo.discrete_qg_fit(orbit, qgeo.PairPolicy(m_max=m_max))
    rows = cert.pairs
    _emit(args, cfg, ["n", "m", "sum_steps", "dist", "ratio"],
          [[r[0] for r in rows], [r[1] for r in rows], [r[2] for r in rows],
           [r[3] for r in rows], [r[4] for r in rows]],
          cert.to_dict(),
          (np.array([r[3] for r in rows]), np.array([r[2] for r in rows]),
           f"qg pairs: {f.name}", "d(f^n, f^m)", "sum of steps"))
    return 0


def _cmd_semiflow(args, cfg):
    f = _resolve_map(cfg)
    traj = semiflow.make_trajectory(f, _start_point(cfg))
    # The scaling chart reaches the working-precision boundary near t ~ 50;
    # its default horizon stays below that (explicit t_max still wins).
    t_default = 40.0 if f.variant == "hyp-aut" else 100.0
    t_max = _get(cfg, "semiflow", "t_max", float, t_default)
    tol = _get(cfg, "tolerances", "closed_form", float, 1e-12)
    ts = np.arange(0.0, t_max + 0.25, 0.25)
    pts = np.atleast_1d(traj.point(ts))
    checks = {
        "embed": semiflow.embed_check(
            traj, n_max=_get(cfg, "semiflow", "n_embed", int, 10 ** 4),
            tol=tol).to_dict(),
        "invariance": semiflow.invariance_check(traj, ts[:-4], tol=tol).to_dict(),
        "lipschitz_hyperbolic": semiflow.lipschitz_hyperbolic_check(
            traj, [(a, b) for a, b in zip(ts[:-1:8], ts[1::8])], tol=tol).to_dict(),
        "lipschitz_euclidean": semiflow.lipschitz_euclidean_check(
            traj, [(a, b) for a, b in zip(ts[:-1:8], ts[1::8])], tol=tol).to_dict(),
    }
    _emit(args, cfg, ["t", "re", "im"], [ts, pts.real, pts.imag],
          {"schema": "disciter/semiflow/v1", "map": f.name, "checks": checks},
          (ts, np.abs(pts), f"trajectory modulus: {f.name}", "t", "|phi_t(z)|"))
    return 0


def _cmd_hm(args, cfg):
    mode = _get(cfg, "hm", "mode", str, "arc")
    seed = args.seed if args.seed is not None else _get(cfg, "wos", "seed", int, 0)
    walks = _get(cfg, "wos", "walks", int, 10 ** 5)
    eps = _get(cfg, "wos", "epsilon", float, harmonic.WOS_EPS)
    cap = _get(cfg, "wos", "cap", int, harmonic.WOS_CAP)
    if mode == "arc":
        z = complex(_get(cfg, "hm", "z", str, "0").replace(" ", ""))
        t1 = _get(cfg, "hm", "theta1", float, 0.0)
        t2 = _get(cfg, "hm", "theta2", float, math.pi)
        quad_tol = _get(cfg, "tolerances", "quadrature", float, 1e-12)
        est = harmonic.hm_disk_arc(z, t1, t2, epsabs=quad_tol)
        _emit(args, cfg, ["value", "method"], [[est.value], [est.method]],
              {"schema": "disciter/hm/v1", **est.to_dict()},
              (np.array([t1, t2]), np.array([est.value, est.value]),
               "arc measure", "theta", "omega"))
        return 0
    if mode == "wos":
        z = complex(_get(cfg, "hm", "z", str, "0").replace(" ", ""))
        slit_raw = _get(cfg, "hm", "slit", str, "")
        verts = [complex(tok.replace(" ", "")) for tok in slit_raw.split(",") if tok]
        domain = harmonic.SlitDiskDomain(verts)
        est = harmonic.hm_wos(domain, z,
                              target=_get(cfg, "hm", "target", str, "slit"),
                              n_walks=walks, eps=eps, cap=cap, seed=seed)
        _emit(args, cfg, ["value", "se", "discards"],
              [[est.value], [est.se], [est.discards]],
              {"schema": "disciter/hm/v1", **est.to_dict()},
              (np.array([0.0, 1.0]), np.array([est.value, est.value]),
               "wos estimate", "", "omega"))
        return 0
    if mode == "tail":
        f = _resolve_map(cfg)
        ns = _grid(cfg, f)
        result = harmonic.tail_hm_series(
            f, _start_point(cfg), ns, n_walks=walks, seed=seed,
            cut=_get(cfg, "hm", "cut", float, 1e-6), eps=eps, cap=cap)
        header, cols = result.csv_columns()
        _emit(args, cfg, header, cols, result.to_dict(),
              (result.ns, result.omega * np.sqrt(result.ns.astype(float)),
               "tail harmonic measure", "n", "omega*sqrt(n)"))
        return 0
    raise ConfigError(f"unknown hm mode {mode!r}")


def _cmd_opnorm(args, cfg):
    f = _resolve_map(cfg)
    p = _get(cfg, "opnorm", "p", float, 2.0)
    alpha = _get(cfg, "opnorm", "alpha", float, 0.0)
    n_max = _get(cfg, "grid", "n_max", int, 10 ** 4)
    report = opnorm.asymptotic_verdicts(f, p, alpha, n_max=n_max)
    header, cols = report.series.csv_columns()
    _emit(args, cfg, header, cols, report.to_dict(),
          (np.log(np.maximum(report.series.ns, 1)), report.series.log_hardy_low,
           f"norm bounds: {f.name}", "log n", "log lower bound"))
    return 0


def _cmd_accept(args, cfg):
    seed = args.seed if args.seed is not None else acceptance.DEFAULT_SEED
    results = acceptance.run_all(seed)
    for res in results:
        print(res.line())
    n_fail = sum(not r.passed for r in results)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        write_json(os.path.join(args.out, "acceptance.json"),
                   {"schema": "disciter/acceptance/v1", "seed": seed,
                    "results": [{"name": r.name, "passed": r.passed,
                                 "details": r.details} for r in results]})
    return 1 if n_fail else 0


_SUBCOMMANDS = {
    "orbit": _cmd_orbit, "rate": _cmd_rate, "slope": _cmd_slope, "qg": _cmd_qg,
    "semiflow": _cmd_semiflow, "hm": _cmd_hm, "opnorm": _cmd_opnorm,
    "accept": _cmd_accept,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="disciter",
        description="holomorphic iteration experiments on the unit disc")
    parser.add_argument("subcommand", choices=sorted(_SUBCOMMANDS))
    parser.add_argument("--config", default=None, help="INI experiment config")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="master RNG seed")
    parser.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config) if args.config else {}
        if args.seed is not None:
            cfg.setdefault("wos", {})["seed"] = str(args.seed)
        return _SUBCOMMANDS[args.subcommand](args, cfg)
    except (ConfigError, InvalidPointError, UnsupportedModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``bergman-lab <command> [flags]``.

Every command builds an :class:`ExperimentConfig`, runs the matching library
routine and emits a report with top-level keys ``config``, ``rows``,
``summary`` and ``provenance``.  Output is deterministic: rows come in grid
order, JSON keys are sorted and the wall time is only written with
``--timing`` (it always goes to stderr).

Exit codes: 0 for passed verdicts and report-only commands, 3 for failed
verdicts, 1 for errors (a JSON error object is emitted).
"""

import argparse
import csv
import io
import json
import math
import platform
import sys
import time
from dataclasses import asdict, dataclass, field, fields

import numpy as np
import scipy

from . import __version__, disc
from .kernels import (KERNEL_TOL, N_MAX, expand_modified, expansion_coeff_bound, expansion_eval,
                      kernel_estimate_report, kernel_eval)
from .operators import M_MAX, SERIES_TOL, theorem1_report, theorem2_report
from .reports import BAND_WIDTH
from .symbols import parse_analytic, parse_symbol
from .weight_classes import (d_report, dcheck_report, default_r_grid, default_x_grid,
                             dhat_integral_ratio, dhat_report, hl_sum_ratio, m_report,
                             room_report)
from .weights import SpecError, parse_weight

COMMANDS = ("weight-info", "class-test", "hl-verify", "kernel-verify", "expansion-verify",
            "hankel-verify", "bloch-verify", "bmo-verify")

CLASS_TESTS = ("dhat", "dcheck", "m", "d", "all")

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 3


class ConfigError(ValueError):
    """Invalid configuration; ``token`` names the offending key or value."""

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


@dataclass
class ExperimentConfig:
    """Validated experiment description.

    ``None`` in ``n`` means the weight's default ``n0``; all other defaults
    are filled in by :func:`fill_defaults`.
    """

    command: str
    weight: list = field(default_factory=list)
    nu: str = None
    symbol: list = field(default_factory=list)
    p: list = None
    N: list = None
    n: int = None
    M: int = None
    gamma: float = None
    lam: float = None
    alpha: list = None
    r: float = None
    z: list = None
    grid_depth: int = None
    tol: float = None
    which: str = None
    out: str = None
    format: str = "json"
    exploratory: bool = False
    timing: bool = False

    def to_dict(self):
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        if "lambda" in data:
            data["lam"] = data.pop("lambda")
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError(f"unknown config key(s) {unknown}", token=unknown[0])
        if "command" not in data:
            raise ConfigError("config needs a command", token="command")
        return cls(**data)


# -- defaults and validation ------------------------------------------------------

_DEFAULT_Z = {
    "hl-verify": [0.5, 0.9, 0.95, 0.99, 0.995, 0.999, 0.9995, 0.9999],
    "kernel-verify": [0.0, 0.5, 0.75, 0.9, 0.95, 0.99, 0.995, 0.999],
    "expansion-verify": [0.1, 0.5, 0.8, 0.9, 0.95],
}

_DEFAULT_SYMBOLS = {
    "hankel-verify": ["poly:[1]", "poly:[0,1]", "poly:[0,0,1]", "poly:[0,0,0,0,1]",
                      "mono:a=2,b=1", "signre"],
    "bloch-verify": ["poly:[0,1]", "lacunary:K=10", "logsym"],
    "bmo-verify": ["poly:[1]", "poly:[0,1]", "conj:poly:[0,1]", "mono:a=2,b=1", "signre",
                   "signre:m=2", "signre:m=4"],
}


def fill_defaults(cfg):
    """Fill command-specific defaults in place and return ``cfg``."""
    c = cfg.command
    if not cfg.weight:
        cfg.weight = ["standard:alpha=0"]
    if c in _DEFAULT_SYMBOLS and not cfg.symbol:
        cfg.symbol = list(_DEFAULT_SYMBOLS[c])
    if c in _DEFAULT_Z and cfg.z is None:
        cfg.z = list(_DEFAULT_Z[c])
    if c in ("weight-info", "class-test") and cfg.grid_depth is None:
        cfg.grid_depth = 20
    if c == "class-test" and cfg.which is None:
        cfg.which = "all"
    if c == "hl-verify":
        cfg.p = [1.0, 2.0] if cfg.p is None else cfg.p
        cfg.alpha = [-2.0, 0.0, 2.0] if cfg.alpha is None else cfg.alpha
    if c in ("kernel-verify", "hankel-verify", "bloch-verify", "bmo-verify") and cfg.p is None:
        cfg.p = [2.0]
    if c == "kernel-verify":
        cfg.nu = cfg.nu or "standard:alpha=0"
        cfg.N = [1] if cfg.N is None else cfg.N
        cfg.tol = 1e-10 if cfg.tol is None else cfg.tol
    if c == "expansion-verify":
        cfg.N = [1, 2, 3, 4] if cfg.N is None else cfg.N
        cfg.tol = 1e-6 if cfg.tol is None else cfg.tol
    if c in ("hankel-verify", "bloch-verify") and cfg.M is None:
        cfg.M = 128
    if c == "hankel-verify" and cfg.tol is None:
        cfg.tol = 1e-4
    if c == "bloch-verify":
        cfg.nu = cfg.nu or "standard:alpha=0"
    if c == "bmo-verify":
        cfg.M = 2048 if cfg.M is None else cfg.M
        cfg.r = 1.0 if cfg.r is None else cfg.r
        cfg.tol = 1e-4 if cfg.tol is None else cfg.tol
    return cfg


def _floats(values, key):
    try:
        return [float(v) for v in values]
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be numbers", token=key) from None


def validate(cfg):
    """Check ranges and parse every spec; raises ``ConfigError``/``SpecError``."""
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}", token=cfg.command)
    if cfg.format not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {cfg.format!r}", token=cfg.format)
    for spec in cfg.weight + ([cfg.nu] if cfg.nu else []):
        parse_weight(spec)
    for spec in cfg.symbol:
        if cfg.command == "bloch-verify":
            parse_analytic(spec)
        else:
            parse_symbol(spec)
    c = cfg.command
    if cfg.p is not None:
        cfg.p = _floats(cfg.p, "p")
        for p in cfg.p:
            if not math.isfinite(p) or p <= 0:
                raise ConfigError(f"p must be positive, got {p:g}", token="p")
            if c == "kernel-verify" and p < 2 and not cfg.exploratory:
                raise ConfigError(f"p = {p:g} is outside the p >= 2 regime of kernel-verify; "
                                  "pass --exploratory", token="p")
            if c in ("hankel-verify", "bloch-verify") and p <= 1:
                raise ConfigError(f"p must exceed 1 for {c}, got {p:g}", token="p")
            if c == "bmo-verify" and p < 1:
                raise ConfigError(f"p must be >= 1 for bmo-verify, got {p:g}", token="p")
    if cfg.N is not None:
        try:
            cfg.N = [int(v) for v in cfg.N]
        except (TypeError, ValueError):
            raise ConfigError("N must be integers", token="N") from None
        lo = 1 if c == "expansion-verify" else 0
        for N in cfg.N:
            if not lo <= N <= N_MAX:
                raise ConfigError(f"N must lie in [{lo}, {N_MAX}], got {N}", token="N")
    if cfg.n is not None and (int(cfg.n) != cfg.n or cfg.n < 0):
        raise ConfigError("n must be a nonnegative integer", token="n")
    if cfg.M is not None:
        hi = M_MAX if c == "hankel-verify" else 2 ** 16
        if int(cfg.M) != cfg.M or not 1 <= cfg.M <= hi:
            raise ConfigError(f"M must be an integer in [1, {hi}]", token="M")
        cfg.M = int(cfg.M)
    if cfg.z is not None:
        cfg.z = _floats(cfg.z, "z")
        if any(not 0 <= v < 1 for v in cfg.z):
            raise ConfigError("z values are moduli in [0, 1)", token="z")
        if c == "hl-verify" and any(v <= 0 for v in cfg.z):
            raise ConfigError("hl-verify needs s in (0, 1)", token="z")
    if cfg.alpha is not None:
        cfg.alpha = _floats(cfg.alpha, "alpha")
    if cfg.gamma is not None and not cfg.gamma > 0:
        raise ConfigError("gamma must be positive", token="gamma")
    if cfg.gamma is not None and c == "class-test" and not cfg.nu:
        raise ConfigError("gamma needs --nu", token="gamma")
    if cfg.lam is not None and not cfg.lam >= 0:
        raise ConfigError("lambda must be nonnegative", token="lambda")
    if cfg.r is not None and not (cfg.r > 0 and math.isfinite(cfg.r)):
        raise ConfigError("r must be positive", token="r")
    if cfg.grid_depth is not None and not 10 <= int(cfg.grid_depth) <= 40:
        raise ConfigError("grid depth must lie in [10, 40] (the grid must reach r >= 0.999)",
                          token="grid-depth")
    if cfg.tol is not None and not cfg.tol > 0:
        raise ConfigError("tol must be positive", token="tol")
    if cfg.which is not None and cfg.which not in CLASS_TESTS:
        raise ConfigError(f"which must be one of {CLASS_TESTS}", token=cfg.which)
    return cfg


# -- argument parsing -----------------------------------------------------------------

def _list(kind):
    def conv(text):
        try:
            return [kind(t) for t in text.split(",") if t.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return conv


def build_parser():
    ap = argparse.ArgumentParser(prog="bergman-lab",
                                 description="Numerical checks for weighted Bergman spaces.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON config file (flags override its values)")
    ap.add_argument("--weight", action="append", help="weight spec (repeatable)")
    ap.add_argument("--nu", help="second weight spec")
    ap.add_argument("--symbol", action="append", help="symbol spec (repeatable)")
    ap.add_argument("--p", type=_list(float), help="exponent(s), comma separated")
    ap.add_argument("--N", type=_list(int), help="kernel modification order(s)")
    ap.add_argument("--n", type=int, help="power of (1-|z|) in nu (default n0 of the weight)")
    ap.add_argument("--M", type=int, help="truncation order")
    ap.add_argument("--gamma", type=float, help="exponent of the tail ratio check")
    ap.add_argument("--lambda", dest="lam", type=float, help="exponent of the Poisson-power check")
    ap.add_argument("--alpha", type=_list(float), help="exponent(s) of the weighted sum check")
    ap.add_argument("--r", type=float, help="hyperbolic radius")
    ap.add_argument("--z", type=_list(float), help="moduli, comma separated")
    ap.add_argument("--grid-depth", dest="grid_depth", type=int, help="dyadic levels of radial grids")
    ap.add_argument("--tol", type=float, help="verdict tolerance")
    ap.add_argument("--which", choices=CLASS_TESTS, help="class test to run")
    ap.add_argument("--out", help="output path (default stdout)")
    ap.add_argument("--format", choices=("json", "csv"))
    ap.add_argument("--exploratory", action="store_true", default=None,
                    help="allow parameters outside the supported regime")
    ap.add_argument("--timing", action="store_true", default=None,
                    help="write the wall time into the report")
    return ap


def _read_config_file(path):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "config" in data and "provenance" in data:
        data = data["config"]
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object", token=path)
    return data


def parse_config(argv=None):
    """Parse flags (and an optional ``--config`` file) into a validated config."""
    args = build_parser().parse_args(argv)
    data = _read_config_file(args.config) if args.config else {}
    if data.get("command", args.command) != args.command:
        raise ConfigError("command differs from the config file", token=args.command)
    data["command"] = args.command
    for f in fields(ExperimentConfig):
        if f.name == "command":
            continue
        v = getattr(args, f.name, None)
        if v is not None:
            data["lambda" if f.name == "lam" else f.name] = v
    cfg = ExperimentConfig.from_dict(data)
    return validate(fill_defaults(cfg))


# -- running ----------------------------------------------------------------------

def _symbols(specs):
    return [(s, parse_symbol(s)) for s in specs]


def _class_rows(rep, weight):
    rows = []
    for g, v in zip(rep.grid, rep.ratios):
        rows.append({"weight": weight, "test": rep.class_name, "param": float(g),
                     "ratio": float(v)})
    return rows


def _ratio_rows(rep, **common):
    out = []
    for row in rep.rows:
        d = dict(common)
        d.update({"param": row.param, "lhs": row.lhs, "rhs": row.rhs, "ratio": row.ratio})
        d.update(row.extra)
        out.append(d)
    return out


def _run_weight_info(cfg):
    rows, summary = [], {}
    for spec in cfg.weight:
        w = parse_weight(spec)
        r = np.concatenate(([0.0], default_r_grid(cfg.grid_depth)))
        for ri, t, d in zip(r, w.tail(r), w(r)):
            rows.append({"weight": spec, "kind": "tail", "param": float(ri), "tail": float(t),
                         "density": float(d)})
        x = default_x_grid()
        for xi, m in zip(x, w.moments(x)):
            rows.append({"weight": spec, "kind": "moment", "param": float(xi), "moment": float(m)})
        summary[spec] = {"name": w.name, "family": w.family, "mass": w.mass,
                         "moment_rtol": w.cache.rtol}
    return rows, summary, None


def _run_class_test(cfg):
    rows, summary = [], {}
    which = ["dhat", "dcheck", "m", "d"] if cfg.which == "all" else [cfg.which]
    funcs = {"dhat": dhat_report, "dcheck": dcheck_report, "d": d_report}
    for spec in cfg.weight:
        w = parse_weight(spec)
        r_grid = default_r_grid(cfg.grid_depth)
        res = {}
        for t in which:
            rep = m_report(w) if t == "m" else funcs[t](w, r_grid)
            res[t] = {"verdict": rep.verdict, "observed_constant": rep.observed_constant,
                      "note": rep.note, "flags": rep.flags}
            if t != "d":
                rows.extend(_class_rows(rep, spec))
        if cfg.lam is not None:
            rep = dhat_integral_ratio(w, cfg.lam)
            rows.extend(_ratio_rows(rep, weight=spec, test="dhat_integral"))
            res["dhat_integral"] = rep.summary()
        if cfg.gamma is not None:
            hat, _ = room_report(w, parse_weight(cfg.nu), cfg.gamma)
            rows.extend(_ratio_rows(hat, weight=spec, test="room"))
            res["room"] = hat.summary()
        summary[spec] = res
    return rows, summary, None


def _run_hl(cfg):
    rows, summary, ok = [], {}, True
    for spec in cfg.weight:
        w = parse_weight(spec)
        for p in cfg.p:
            for a in cfg.alpha:
                rep = hl_sum_ratio(w, p, a, cfg.z)
                rows.extend(_ratio_rows(rep, weight=spec, p=p, alpha=a))
                s = rep.summary()
                summary[f"{spec}|p={p:g}|alpha={a:g}"] = s
                ok &= s["two_sided"]
    return rows, summary, ok


def _run_kernel(cfg):
    from .weight_classes import MEMBER
    rows, summary, ok = [], {}, True
    nu = parse_weight(cfg.nu)
    nu_dhat = dhat_report(nu).verdict == MEMBER
    for spec in cfg.weight:
        w = parse_weight(spec)
        for p in cfg.p:
            for N in cfg.N:
                rep = kernel_estimate_report(w, nu, p, N, cfg.z, exploratory=cfg.exploratory)
                rows.extend(_ratio_rows(rep, weight=spec, nu=cfg.nu, p=p, N=N, tol=cfg.tol))
                s = rep.summary()
                s["required"] = "two-sided" if nu_dhat else "upper-bound"
                s["flags"] = rep.flags
                passed = s["two_sided"] if nu_dhat else s["upper_bounded"]
                s["pass"] = bool(passed)
                summary[f"{spec}|p={p:g}|N={N}"] = s
                ok &= passed
    return rows, summary, ok


def _run_expansion(cfg):
    rows, summary, ok = [], {}, True
    angles = np.pi * np.array([0.0, 0.2, 0.5, 0.8, 1.3])
    for spec in cfg.weight:
        w = parse_weight(spec)
        for N in cfg.N:
            e = expand_modified(N)
            worst = 0.0
            for q in cfg.z:
                for t in angles:
                    zeta = complex(np.exp(1j * t))
                    lhs = expansion_eval(e, w, q, zeta)
                    rhs = 2 * (1 - q * zeta) ** N * kernel_eval(w, q, zeta)
                    err = abs(lhs - rhs) / max(abs(rhs), 1e-300)
                    worst = max(worst, err)
                    rows.append({"weight": spec, "N": N, "param": q, "theta": float(t),
                                 "expansion": [lhs.real, lhs.imag], "direct": [rhs.real, rhs.imag],
                                 "rel_err": err, "tol": cfg.tol, "kernel_tol": KERNEL_TOL,
                                 "terms": e.M})
            bound = expansion_coeff_bound(e, w)
            s = {"max_rel_err": worst, "terms": e.M, "L": e.L,
                 "coeff_bound": bound.summary(), "per_term_sup": bound.meta["per_term_sup"]}
            s["pass"] = bool(worst <= cfg.tol and bound.upper_bounded())
            summary[f"{spec}|N={N}"] = s
            ok &= s["pass"]
    return rows, summary, ok


def _run_hankel(cfg):
    rows, summary, ok = [], {}, True
    syms = _symbols(cfg.symbol)
    for spec in cfg.weight:
        w = parse_weight(spec)
        for p in cfg.p:
            rep = theorem1_report(w, syms, p, cfg.n, cfg.M, stability=(p == 2))
            rows.extend(_ratio_rows(rep, weight=spec, p=p, M=cfg.M, n=rep.meta["n"],
                                    series_tol=SERIES_TOL))
            s = rep.summary()
            s["meta"] = rep.meta
            s["flags"] = rep.flags
            stab = [r.extra.get("stability", 0.0) for r in rep.rows if not r.extra.get("degenerate")]
            s["max_stability"] = max(stab) if stab else 0.0
            s["stable"] = bool(s["max_stability"] <= cfg.tol) if p == 2 else None
            s["pass"] = bool(s["two_sided"] and s["stable"] is not False)
            summary[f"{spec}|p={p:g}"] = s
            ok &= s["pass"]
    return rows, summary, ok


def _run_bloch(cfg):
    rows, summary, ok = [], {}, True
    funcs = [(s, parse_analytic(s)) for s in cfg.symbol]
    nu = parse_weight(cfg.nu)
    for spec in cfg.weight:
        w = parse_weight(spec)
        for p in cfg.p:
            rep = theorem2_report(w, funcs, p, cfg.n, cfg.M, nu_weight=nu)
            rows.extend(_ratio_rows(rep, weight=spec, p=p, M=cfg.M, series_tol=SERIES_TOL))
            s = rep.summary()
            s["meta"] = rep.meta
            s["pass"] = bool(s["two_sided"])
            summary[f"{spec}|p={p:g}"] = s
            ok &= s["pass"]
    return rows, summary, ok


def _run_bmo(cfg):
    from .bmo import theoremB_report, theoremB_trend
    from .weight_classes import MEMBER
    rows, summary, ok = [], {}, True
    syms = _symbols(cfg.symbol)
    for spec in cfg.weight:
        w = parse_weight(spec)
        member = dhat_report(w).verdict == MEMBER
        for p in cfg.p:
            rep = theoremB_report(w, syms, p, cfg.r, M=cfg.M)
            rows.extend(_ratio_rows(rep, weight=spec, p=p, r=cfg.r, M=cfg.M, test="band"))
            s = rep.summary()
            s.update(meta=rep.meta, flags=rep.flags, dhat_member=member)
            if member:
                s["pass"] = bool(rep.meta["bounded"])
                ok &= s["pass"]
            else:
                trend = theoremB_trend(w)
                rows.extend(_ratio_rows(trend, weight=spec, p=p, test="trend"))
                s["trend"] = dict(trend.meta, flags=trend.flags)
                s["pass"] = None
            summary[f"{spec}|p={p:g}"] = s
    return rows, summary, ok


_RUNNERS = {
    "weight-info": _run_weight_info, "class-test": _run_class_test, "hl-verify": _run_hl,
    "kernel-verify": _run_kernel, "expansion-verify": _run_expansion,
    "hankel-verify": _run_hankel, "bloch-verify": _run_bloch, "bmo-verify": _run_bmo,
}


def provenance(cfg, wall=None):
    out = {
        "library": "bergman_lab", "version": __version__, "numpy": np.__version__,
        "scipy": scipy.__version__, "python": platform.python_version(),
        "threads": disc.thread_count(),
        "tolerances": {"disc_rtol": disc.DISC_RTOL, "kernel_tol": KERNEL_TOL,
                       "series_tol": SERIES_TOL, "band_width": BAND_WIDTH,
                       "verdict_tol": cfg.tol},
        "wall_time": wall,
    }
    if cfg.exploratory:
        out["unsupported_regime"] = True
    return out


def run(cfg):
    """Run a validated config; returns ``(report, exit_code)``."""
    t0 = time.perf_counter()
    rows, summary, ok = _RUNNERS[cfg.command](cfg)
    wall = time.perf_counter() - t0
    verdict = "report-only" if ok is None else ("pass" if ok else "fail")
    summary = {"verdict": verdict, "results": summary}
    report = {"config": cfg.to_dict(), "rows": rows, "summary": summary,
              "provenance": provenance(cfg, wall if cfg.timing else None)}
    report["_wall"] = wall
    return report, (EXIT_FAIL if verdict == "fail" else EXIT_OK)


# -- output -------------------------------------------------------------------------------

def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    return obj


def to_json(report):
    body = {k: v for k, v in report.items() if not k.startswith("_")}
    return json.dumps(_clean(body), sort_keys=True, indent=2, ensure_ascii=False,
                      allow_nan=False) + "\n"


def to_csv(report):
    rows = _clean(report["rows"])
    keys = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\r\n")
    wr.writerow(keys)
    for r in rows:
        wr.writerow([_cell(r.get(k)) for k in keys])
    return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(report, fmt="json", path=None):
    """Write ``report`` as JSON or RFC-4180 CSV to ``path`` (stdout if ``None``)."""
    if fmt not in ("json", "csv"):
        raise ValueError(f"unknown format {fmt!r}")
    text = to_json(report) if fmt == "json" else to_csv(report)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def error_object(exc):
    return {"error": {"type": type(exc).__name__, "message": str(exc),
                      "token": getattr(exc, "token", None)}}


def main(argv=None):
    """Console entry point; returns the exit code."""
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    except (ConfigError, SpecError, ValueError, OSError) as exc:
        sys.stdout.write(json.dumps(error_object(exc), sort_keys=True) + "\n")
        return EXIT_ERROR
    try:
        report, code = run(cfg)
        emit(report, cfg.format, cfg.out)
    except Exception as exc:  # machine-readable error object for any failure
        err = json.dumps(error_object(exc), sort_keys=True) + "\n"
        sys.stdout.write(err)
        return EXIT_ERROR
    sys.stderr.write(f"{cfg.command}: {report['summary']['verdict']} "
                     f"in {report['_wall']:.2f} s\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

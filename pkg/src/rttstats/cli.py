"""Command-line front end.

    rttstats exact --formula efix --n 3 --r 2
    rttstats simulate --n 10000 --c 1 --statistic fixed-points --trials 2000 --out runs/fig1
    rttstats verify --suite brute --max-n 5 --max-r 4
    rttstats limitcheck --regime mixed --statistic descents --n 10000

Every flag may also come from ``--config file.json`` (keys are the flag names
with dashes turned into underscores); flags given on the command line win.
Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 I/O error.
"""
import argparse
import json
import math
import sys
from fractions import Fraction

from . import exact, experiments
from .harness import (
    SAMPLERS,
    STATISTICS,
    report_dict,
    run_experiment,
    write_histogram_csv,
    write_report_json,
    write_samples_csv,
)
from .limits import (
    LimitLaw,
    descents_limit_params,
    inversions_limit_params,
    poisson_geometric_pmf,
)
from .occupancy import EXACT_WORK_LIMIT, occupied_moments, occupied_pmf
from .rng import GENERATOR_FAMILY

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

FORMULAS = ("efix", "einv", "edes", "ret", "occ-moments", "occ-pmf",
            "pg-pmf", "finite-law", "limit-params")
SUITES = ("brute", "pathwise", "decomposition", "limits")
FIGURES = ("1", "2", "3", "mixed", "moments", "finite", "algebra")

DEFAULTS = {
    "statistic": "fixed-points",
    "sampler": "shuffle-engine",
    "max_n": 5,
    "max_r": 4,
}


class UsageError(Exception):
    pass


def format_value(x):
    """Fixed 12 decimals, trailing zeros dropped: 10/9 -> 1.111111111111."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        # exact rounding of the rational, no float detour
        scaled = round(x * 10**12)
        sign = "-" if scaled < 0 else ""
        whole, frac = divmod(abs(scaled), 10**12)
        text = f"{sign}{whole}.{frac:012d}".rstrip("0").rstrip(".")
        return text if text not in ("-0", "") else "0"
    text = f"{float(x):.12f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _json_value(x):
    if isinstance(x, Fraction):
        return {"value": float(x), "exact": str(x)}
    return x


# -- config handling --------------------------------------------------------

def _load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def resolve(args):
    """Merge defaults < config file < command-line flags."""
    cfg = dict(DEFAULTS)
    if args.config:
        file_cfg = _load_config(args.config)
        file_cfg.pop("command", None)
        cfg.update(file_cfg)
    cfg.update({k: v for k, v in vars(args).items() if v is not None and k not in ("config", "func")})
    return cfg


def _int(cfg, key, minimum=None, required=True):
    v = cfg.get(key)
    if v is None:
        if required:
            raise UsageError(f"--{key.replace('_', '-')} is required")
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise UsageError(f"--{key.replace('_', '-')} must be an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise UsageError(f"--{key.replace('_', '-')} must be >= {minimum}, got {v}")
    return v


def _float(cfg, key, required=True):
    v = cfg.get(key)
    if v is None:
        if required:
            raise UsageError(f"--{key} is required")
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise UsageError(f"--{key} must be a number, got {v!r}")
    return float(v)


def _choice(cfg, key, choices):
    v = cfg.get(key)
    if v not in choices:
        raise UsageError(f"--{key} must be one of {', '.join(choices)}, got {v!r}")
    return v


def resolve_shuffles(cfg, statistic):
    """Pick r from exactly one of --r or (--c / --regime); records both in cfg."""
    n = _int(cfg, "n", 1)
    r = _int(cfg, "r", 0, required=False)
    c = _float(cfg, "c", required=False)
    regime = cfg.get("regime") or ("fixed-r" if c is None else "critical")
    if regime == "fixed-r":
        if r is None or c is not None:
            raise UsageError("fixed-r regime needs --r and no --c")
    elif regime == "critical":
        if c is None or r is not None:
            raise UsageError("critical regime needs --c and no --r")
        if not c > 0:
            raise UsageError("--c must be positive")
        r = round(c * n)
    elif regime == "mixed":
        if r is not None or c is not None:
            raise UsageError("mixed regime derives r from the schedule; drop --r/--c")
        try:
            r = experiments.mixed_schedule(statistic, n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        cfg["schedule"] = experiments.SCHEDULE_NOTE
    else:
        raise UsageError(f"unknown regime {regime!r}")
    cfg.update(n=n, r=r, regime=regime)
    return n, r


# -- commands ---------------------------------------------------------------

def cmd_exact(cfg):
    formula = _choice(cfg, "formula", FORMULAS)
    lines, payload = [], {"formula": formula}
    if formula in ("pg-pmf", "limit-params"):
        c = _float(cfg, "c")
        if not c > 0:
            raise UsageError("--c must be positive")
        payload["c"] = c
        if formula == "pg-pmf":
            ell = _int(cfg, "k", 0)
            value = poisson_geometric_pmf(c, ell)
            lines.append(format_value(value))
            payload.update(k=ell, value=value)
        else:
            dm, dv = descents_limit_params(c)
            im, iv = inversions_limit_params(c)
            pg = LimitLaw.poisson_geometric(c)
            values = {"descents_mean": dm, "descents_variance": dv,
                      "inversions_mean": im, "inversions_variance": iv,
                      "fixed_points_mean": pg.mean(), "fixed_points_variance": pg.variance()}
            lines.extend(f"{k} {format_value(v)}" for k, v in values.items())
            payload["value"] = values
    elif formula == "finite-law":
        n = _int(cfg, "n", 1)
        c = _float(cfg, "c")
        if not c > 0:
            raise UsageError("--c must be positive")
        law = exact.fixed_point_law_finite(n, -math.expm1(-c))
        lines.extend(f"{s} {format_value(float(p))}" for s, p in enumerate(law))
        payload.update(n=n, c=c, value=[float(p) for p in law])
    else:
        n = _int(cfg, "n", 1)
        r = _int(cfg, "r", 0)
        small = n * r <= EXACT_WORK_LIMIT
        payload.update(n=n, r=r)
        if formula == "efix":
            value = exact.expected_fixed_points(n, r, exact=small)
        elif formula == "einv":
            value = exact.expected_inversions(n, r, exact=small)
        elif formula == "edes":
            value = exact.expected_descents(n, r, exact=small)
        elif formula == "ret":
            k = _int(cfg, "k", 1)
            if k > n:
                raise UsageError(f"--k must be <= n, got {k}")
            value = exact.return_probability(n, r, k, exact=small)
            payload["k"] = k
        if formula == "occ-moments":
            mean, var = occupied_moments(n, r, exact=small)
            lines += [f"mean {format_value(mean)}", f"variance {format_value(var)}"]
            payload["value"] = {"mean": _json_value(mean), "variance": _json_value(var)}
        elif formula == "occ-pmf":
            pmf = occupied_pmf(n, r, exact=small)
            lines.extend(f"{k} {format_value(p)}" for k, p in enumerate(pmf))
            payload["value"] = [_json_value(p) for p in pmf] if small else [float(p) for p in pmf]
        else:
            lines.append(format_value(value))
            payload["value"] = _json_value(value)
    print("\n".join(lines))
    if cfg.get("out"):
        write_report_json(payload, cfg["out"])
    return EXIT_OK


def cmd_simulate(cfg):
    statistic = _choice(cfg, "statistic", STATISTICS)
    sampler = _choice(cfg, "sampler", SAMPLERS)
    n, r = resolve_shuffles(cfg, statistic)
    cfg.setdefault("trials", 1000)
    cfg.setdefault("seed", 0)
    trials = _int(cfg, "trials", 1)
    seed = _int(cfg, "seed", 0)
    workers = _int(cfg, "workers", 1, required=False)
    try:
        e = run_experiment(n, r, trials, statistic, sampler, seed, workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    resolved = _file_config("simulate", cfg)
    report = report_dict("simulate", e, config=resolved)
    out = cfg.get("out")
    if out:
        write_histogram_csv(e, f"{out}.csv", resolved)
        if cfg.get("samples"):
            write_samples_csv(e, f"{out}.samples.csv", resolved)
        write_report_json(report, f"{out}.json")
        print(f"wrote {out}.csv and {out}.json")
    else:
        print(json.dumps(report, indent=2, sort_keys=True, default=str))
    return EXIT_OK


def _file_config(command, cfg):
    # Everything needed to reproduce the run; worker count does not change
    # results so it is left out to keep files byte-identical across machines.
    keep = ("n", "r", "c", "regime", "schedule", "trials", "seed", "statistic", "sampler")
    out = {"command": command, "rng": GENERATOR_FAMILY}
    out.update({k: cfg[k] for k in keep if cfg.get(k) is not None})
    return out


def _emit(reports):
    ok = True
    for rep in reports:
        line = dict(rep.to_dict(), config=rep.config)
        print(json.dumps(line, sort_keys=True, default=str))
        ok = ok and bool(rep.passed)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(cfg):
    suite = _choice(cfg, "suite", SUITES)
    workers = _int(cfg, "workers", 1, required=False)
    if suite == "brute":
        reports = experiments.brute_suite(_int(cfg, "max_n", 1), _int(cfg, "max_r", 0))
    elif suite == "pathwise":
        reports = experiments.pathwise_suite(_int(cfg, "max_n", 1), _int(cfg, "max_r", 0))
    elif suite == "decomposition":
        cfg.setdefault("n", 100)
        cfg.setdefault("r", 150)
        cfg.setdefault("trials", 30000)
        cfg.setdefault("seed", experiments.SEEDS["decomposition"])
        reports = experiments.decomposition_suite(_int(cfg, "n", 2), _int(cfg, "r", 0),
                                                  _int(cfg, "trials", 2), _int(cfg, "seed", 0),
                                                  workers)
    else:
        figure = str(cfg.get("figure")) if cfg.get("figure") is not None else None
        if figure not in FIGURES:
            raise UsageError(f"--figure must be one of {', '.join(FIGURES)}")
        panel = cfg.get("panel")
        if panel is not None and (figure not in ("1", "2", "3") or panel not in experiments.PANELS):
            raise UsageError("--panel (top|middle|bottom) applies to figures 1-3 only")
        reports = experiments.limits_suite(figure, panel, workers=workers)
    return _emit(reports)


def cmd_limitcheck(cfg):
    statistic = _choice(cfg, "statistic", ("fixed-points", "descents", "inversions"))
    regime = _choice(cfg, "regime", ("critical", "mixed"))
    n = _int(cfg, "n", 2)
    c = _float(cfg, "c", required=False)
    if cfg.get("r") is not None:
        raise UsageError("limitcheck derives r from the regime; use --c (critical) or nothing (mixed)")
    trials = _int(cfg, "trials", 1, required=False)
    cfg.setdefault("seed", 0)
    threshold = _float(cfg, "threshold", required=False)
    try:
        r, reports = experiments.limit_check(statistic, regime, n, c=c, trials=trials,
                                             seed=_int(cfg, "seed", 0),
                                             workers=_int(cfg, "workers", 1, required=False),
                                             threshold=threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(json.dumps({"regime": regime, "statistic": statistic, "n": n, "r": r,
                      "schedule": experiments.SCHEDULE_NOTE if regime == "mixed" else None}))
    status = _emit(reports)
    if cfg.get("out"):
        write_report_json({"regime": regime, "statistic": statistic, "n": n, "r": r,
                           "reports": [dict(rep.to_dict(), config=rep.config) for rep in reports]},
                          cfg["out"])
    return status


# -- argument parsing -------------------------------------------------------

def _common(p):
    p.add_argument("--config", help="JSON file with default flag values")
    p.add_argument("--n", type=int, help="deck size")
    p.add_argument("--r", type=int, help="number of shuffles")
    p.add_argument("--c", type=float, help="shuffle ratio r/n (critical regime)")
    p.add_argument("--regime", choices=("fixed-r", "critical", "mixed"))
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--statistic", choices=STATISTICS)
    p.add_argument("--sampler", choices=SAMPLERS)
    p.add_argument("--out", help="output path (prefix for simulate)")
    p.add_argument("--workers", type=int, help="worker threads (default: all CPUs)")


def build_parser():
    parser = argparse.ArgumentParser(prog="rttstats", description="Random-to-top shuffle statistics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="evaluate a closed-form quantity")
    _common(p)
    p.add_argument("--formula", choices=FORMULAS)
    p.add_argument("--k", type=int, help="card (ret) or value (pg-pmf)")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("simulate", help="Monte Carlo run to histogram CSV + report JSON")
    _common(p)
    p.add_argument("--samples", action="store_true", default=None, help="also write per-trial CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run a verification suite")
    _common(p)
    p.add_argument("--suite", choices=SUITES)
    p.add_argument("--max-n", type=int)
    p.add_argument("--max-r", type=int)
    p.add_argument("--figure", choices=FIGURES)
    p.add_argument("--panel", choices=experiments.PANELS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("limitcheck", help="compare a regime against its limit law")
    _common(p)
    p.add_argument("--threshold", type=float, help="override the TV/KS threshold")
    p.set_defaults(func=cmd_limitcheck)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(resolve(args))
    except UsageError as exc:
        print(f"rttstats: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"rttstats: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"rttstats: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Named verification experiments shared by the CLI and the acceptance tests.

Every function returns a list of ``TestReport``.  Seeds are fixed per
experiment; the decomposition suites draw the two compared samples from
different seeds so they are independent.
"""
import itertools
import math
from fractions import Fraction

import numpy as np

from . import oracle
from .exact import (
    expected_descents,
    expected_fixed_points,
    expected_inversions,
    fixed_point_law_finite,
    return_probabilities,
)
from .harness import TestReport, gof_test, run_experiment, two_sample_test
from .limits import (
    LimitLaw,
    descents_limit_params,
    general_clt_variance,
    inversions_limit_params,
)
from .occupancy import occupied_clt_params, occupied_pmf
from .shuffle import SelectionSequence, apply_fast, apply_naive

SEEDS = {"figure1": 101, "figure2": 201, "figure3": 301, "mixed": 401,
         "moments": 501, "decomposition": 7, "pathwise": 601}
PANELS = ("top", "middle", "bottom")
SCHEDULE_NOTE = "c_n = ln ln n (one admissible choice; any c_n -> infinity qualifies)"


def mixed_schedule(statistic, n):
    """Shuffle count for the mixed-regime checks, natural logarithms."""
    ln = math.log(n)
    if statistic == "fixed-points":
        return math.ceil(n * ln)
    if statistic == "descents":
        return math.ceil(n * ln / 2 + n * math.log(ln))
    if statistic == "inversions":
        return math.ceil(n * ln / 4 + n * math.log(ln))
    raise ValueError(f"unknown statistic {statistic!r}")


def _within_se(name, sample_mean, target, se, k=4.0, config=None):
    z = abs(sample_mean - target) / se
    return TestReport(name, z, threshold=k, passed=z <= k,
                      config=dict(config or {}, target=target, sample_mean=sample_mean, se=se))


def _within_rel(name, value, target, rel, config=None):
    err = abs(value / target - 1.0)
    return TestReport(name, err, threshold=rel, passed=err < rel,
                      config=dict(config or {}, target=target, value=value))


# -- exact suites -----------------------------------------------------------

def brute_suite(max_n=5, max_r=4):
    """Exhaustive pick-sequence enumeration against the closed forms."""
    reports = []
    for n in range(1, max_n + 1):
        for r in range(0, max_r + 1):
            laws = oracle.shuffle_laws(n, r)
            joint = laws["joint"]
            pmf = occupied_pmf(n, r, exact=True)
            checks = {
                "efix": oracle.expectation(oracle.marginal(joint, 0)) == expected_fixed_points(n, r, exact=True),
                "einv": oracle.expectation(oracle.marginal(joint, 2)) == expected_inversions(n, r, exact=True),
                "edesc": oracle.expectation(oracle.marginal(joint, 1)) == expected_descents(n, r, exact=True),
                "return": laws["returned"] == return_probabilities(n, r, exact=True),
                "kpmf": all(pmf[k] == laws["distinct"].get(k, Fraction(0)) for k in range(n + 1)),
            }
            failed = [name for name, ok in checks.items() if not ok]
            reports.append(TestReport(f"brute n={n} r={r}", float(len(failed)), threshold=0,
                                      passed=not failed, config={"n": n, "r": r, "failed": failed}))
    return reports


def pathwise_suite(max_n=4, max_r=4, random_cases=1000, seed=SEEDS["pathwise"]):
    """apply_fast against apply_naive: exhaustive small cases plus random ones."""
    mismatches = 0
    total = 0
    for n in range(1, max_n + 1):
        for r in range(0, max_r + 1):
            for picks in itertools.product(range(1, n + 1), repeat=r):
                s = SelectionSequence(n, picks)
                total += 1
                mismatches += apply_fast(s) != apply_naive(s)
    exhaustive = TestReport("pathwise exhaustive", float(mismatches), threshold=0,
                            passed=mismatches == 0, config={"cases": total})
    rng = np.random.Generator(np.random.PCG64(seed))
    bad = 0
    for _ in range(random_cases):
        n = int(rng.integers(1, 51))
        r = int(rng.integers(0, 201))
        s = SelectionSequence(n, tuple(rng.integers(1, n + 1, size=r).tolist()))
        bad += apply_fast(s) != apply_naive(s)
    randomized = TestReport("pathwise random", float(bad), threshold=0, passed=bad == 0,
                            config={"cases": random_cases, "seed": seed})
    return [exhaustive, randomized]


def algebraic_suite(count=20):
    """General CLT variance fed occupancy coefficients vs the closed forms."""
    reports = []
    for c in np.linspace(0.05, 10.0, count):
        c = float(c)
        a, tau2 = occupied_clt_params(c)
        dvar, ivar = general_clt_variance(a, tau2)
        err = max(abs(dvar - descents_limit_params(c)[1]), abs(ivar - inversions_limit_params(c)[1]))
        reports.append(TestReport(f"clt variance c={c:.4f}", err, threshold=1e-12, passed=err <= 1e-12,
                                  config={"c": c}))
    return reports


def finite_law_suite(sizes=(200, 1000, 5000), c=1.0, tol=0.01):
    """Sup-norm distance of the finite-n fixed point law to its limit."""
    a = -math.expm1(-c)
    table = LimitLaw.poisson_geometric(c).pmf_table()
    dists = []
    for n in sizes:
        law = fixed_point_law_finite(n, a)
        limit = np.zeros(max(law.size, table.size))
        limit[: table.size] = table
        padded = np.zeros_like(limit)
        padded[: law.size] = law
        dists.append(float(np.max(np.abs(padded - limit))))
    monotone = all(x > y for x, y in zip(dists, dists[1:]))
    return [
        TestReport("finite law monotone", float(monotone), threshold=1, passed=monotone,
                   config={"sizes": list(sizes), "distances": dists}),
        TestReport(f"finite law sup-distance n={sizes[-1]}", dists[-1], threshold=tol,
                   passed=dists[-1] < tol, config={"distances": dists}),
    ]


# -- Monte Carlo suites -----------------------------------------------------

def decomposition_suite(n=100, r=150, trials=30000, seed=SEEDS["decomposition"], workers=None, alpha=0.001):
    reports = []
    plan = [("fixed-points", "formula-direct", "chi2"),
            ("descents", "resampled", "chi2"),
            ("inversions", "formula-direct", "ks"),
            ("occupied", "formula-direct", "chi2")]
    for statistic, sampler, kind in plan:
        engine = run_experiment(n, r, trials, statistic, "shuffle-engine", seed, workers)
        other = run_experiment(n, r, trials, statistic, sampler, seed + 1, workers)
        rep = two_sample_test(engine, other, kind, alpha=alpha,
                              name=f"{statistic}: engine vs {sampler} ({kind})")
        reports.append(rep)
    return reports


def figure1_panel(panel, trials=2000, seed=None, workers=None, tol=0.06):
    n = 10000
    r = {"top": 5000, "middle": 10000, "bottom": 20000}[panel]
    seed = SEEDS["figure1"] + PANELS.index(panel) if seed is None else seed
    e = run_experiment(n, r, trials, "fixed-points", "shuffle-engine", seed, workers)
    c = r / n
    reports = [gof_test(e, LimitLaw.poisson_geometric(c), "tv", threshold=tol,
                        name=f"figure1 {panel}: TV vs Poisson-geometric(c={c:g})")]
    if panel == "bottom":
        reports.append(gof_test(e, LimitLaw.poisson(1.0), "tv", threshold=tol,
                                name="figure1 bottom: TV vs Poisson(1)"))
    return reports


def figure2_panel(panel, trials=2000, seed=None, workers=None):
    n = 10000
    c = {"top": 0.25, "middle": 0.5, "bottom": 1.0}[panel]
    r = round(c * n)
    seed = SEEDS["figure2"] + PANELS.index(panel) if seed is None else seed
    e = run_experiment(n, r, trials, "descents", "shuffle-engine", seed, workers)
    mean_coeff, var_coeff = descents_limit_params(c)
    se = math.sqrt(e.variance / e.sample_count)
    center = expected_descents(n, r)
    z = e.standardized(center, math.sqrt(n * var_coeff))
    cfg = {"n": n, "r": r, "c": c, "trials": trials, "seed": seed,
           "centering": "exact finite-n mean", "scale": "sqrt(n * limit variance)"}
    ks = gof_test(z, LimitLaw.normal(), "ks", threshold=0.04, name=f"figure2 {panel}: KS standardized")
    ks.config.update(cfg)
    return [
        _within_se(f"figure2 {panel}: mean vs n(1-e^-c)/2", e.mean, n * mean_coeff, se, config=cfg),
        _within_rel(f"figure2 {panel}: variance vs limit", e.variance, n * var_coeff, 0.15, config=cfg),
        ks,
    ]


def figure3_panel(panel, trials=1000, seed=None, workers=None):
    n = 1000
    c = {"top": 0.1, "middle": 0.25, "bottom": 1.0}[panel]
    r = round(c * n)
    seed = SEEDS["figure3"] + PANELS.index(panel) if seed is None else seed
    e = run_experiment(n, r, trials, "inversions", "shuffle-engine", seed, workers)
    mean_coeff, var_coeff = inversions_limit_params(c)
    se = math.sqrt(e.variance / e.sample_count)
    center = expected_inversions(n, r)
    z = e.standardized(center, n**1.5 * math.sqrt(var_coeff))
    cfg = {"n": n, "r": r, "c": c, "trials": trials, "seed": seed,
           "centering": "exact finite-n mean", "scale": "n^1.5 * sqrt(limit variance)"}
    ks = gof_test(z, LimitLaw.normal(), "ks", threshold=0.06, name=f"figure3 {panel}: KS standardized")
    ks.config.update(cfg)
    return [
        ks,
        _within_se(f"figure3 {panel}: mean vs n^2(1-e^-2c)/4", e.mean, n * n * mean_coeff, se, config=cfg),
    ]


LIMIT_DEFAULTS = {  # statistic -> (trials, threshold)
    "fixed-points": (2000, {"critical": 0.06, "mixed": 0.05}),
    "descents": (2000, {"critical": 0.04, "mixed": 0.04}),
    "inversions": (1000, {"critical": 0.06, "mixed": 0.06}),
}


def limit_check(statistic, regime, n, c=None, trials=None, seed=0, workers=None, threshold=None):
    """Run one statistic in the critical (r = round(c n)) or mixed regime
    against its limit law.  Returns (r, reports); the first report is the
    pass/fail check, any others are informational.
    """
    if statistic not in LIMIT_DEFAULTS:
        raise ValueError(f"no limit law for statistic {statistic!r}")
    if regime == "critical":
        if c is None or not c > 0:
            raise ValueError("critical regime needs c > 0")
        r = round(c * n)
    elif regime == "mixed":
        if c is not None:
            raise ValueError("mixed regime takes no c; r comes from the schedule")
        r = mixed_schedule(statistic, n)
    else:
        raise ValueError(f"unknown regime {regime!r}")
    default_trials, thresholds = LIMIT_DEFAULTS[statistic]
    trials = trials or default_trials
    threshold = thresholds[regime] if threshold is None else threshold
    e = run_experiment(n, r, trials, statistic, "shuffle-engine", seed, workers)
    cfg = {"n": n, "r": r, "trials": trials, "seed": seed, "regime": regime}
    if regime == "mixed":
        cfg["schedule"] = SCHEDULE_NOTE
    else:
        cfg["c"] = c

    if statistic == "fixed-points":
        if regime == "critical":
            reports = [gof_test(e, LimitLaw.poisson_geometric(c), "tv", threshold=threshold,
                                name=f"fixed points r={r}: TV vs Poisson-geometric(c={c:g})"),
                       gof_test(e, LimitLaw.poisson(1.0), "tv",
                                name=f"fixed points r={r}: TV vs Poisson(1) (reported only)")]
        else:
            reports = [gof_test(e, LimitLaw.poisson(1.0), "tv", threshold=threshold,
                                name=f"mixed fixed points r={r}: TV vs Poisson(1)")]
    else:
        if statistic == "descents":
            var = descents_limit_params(c)[1] if regime == "critical" else 1 / 12
            center, scale = expected_descents(n, r), math.sqrt(n * var)
            label = "N(0,1/12)" if regime == "mixed" else f"N(0,{var:.6g})"
        else:
            var = inversions_limit_params(c)[1] if regime == "critical" else 1 / 36
            center, scale = expected_inversions(n, r), n**1.5 * math.sqrt(var)
            label = "N(0,1/36)" if regime == "mixed" else f"N(0,{var:.6g})"
        z = e.standardized(center, scale)
        prefix = "mixed " if regime == "mixed" else ""
        reports = [gof_test(z, LimitLaw.normal(), "ks", threshold=threshold,
                            name=f"{prefix}{statistic} r={r}: KS vs {label}")]
        cfg["centering"] = "exact finite-n mean"
    for rep in reports:
        rep.config.update(cfg)
    return r, reports


def mixed_suite(statistics=("fixed-points", "descents", "inversions"), trials=None, seed=None, workers=None):
    reports = []
    for i, statistic in enumerate(statistics):
        s = (SEEDS["mixed"] + i) if seed is None else seed
        n = 1000 if statistic == "inversions" else 10000
        reports.extend(limit_check(statistic, "mixed", n, trials=trials, seed=s, workers=workers)[1])
    return reports


def moments_suite(trials=2000, seed=SEEDS["moments"], workers=None):
    """Fixed point mean and variance at r = n against their c = 1 limits."""
    n, c = 10000, 1.0
    e = run_experiment(n, n, trials, "fixed-points", "shuffle-engine", seed, workers)
    target_mean = 1 - math.exp(-c) + 1 / math.expm1(c)
    target_var = 1 - math.exp(-c) + math.exp(c) / math.expm1(c) ** 2
    se = math.sqrt(e.variance / e.sample_count)
    cfg = {"n": n, "r": n, "trials": trials, "seed": seed}
    return [
        _within_se("fixed point mean vs limit", e.mean, target_mean, se, config=cfg),
        _within_rel("fixed point variance vs limit", e.variance, target_var, 0.15, config=cfg),
    ]


def limits_suite(figure, panel=None, workers=None):
    panels = PANELS if panel is None else (panel,)
    if figure == "1":
        return [rep for p in panels for rep in figure1_panel(p, workers=workers)]
    if figure == "2":
        return [rep for p in panels for rep in figure2_panel(p, workers=workers)]
    if figure == "3":
        return [rep for p in panels for rep in figure3_panel(p, workers=workers)]
    if figure == "mixed":
        return mixed_suite(workers=workers)
    if figure == "moments":
        return moments_suite(workers=workers)
    if figure == "finite":
        return finite_law_suite()
    if figure == "algebra":
        return algebraic_suite()
    raise ValueError(f"unknown figure {figure!r}")

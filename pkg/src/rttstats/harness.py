"""Seeded Monte Carlo runs and goodness-of-fit machinery.

Trial ``t`` of a run draws from ``make_rng(seed, t)`` and results are stored
by trial index, so a run is bitwise reproducible for any worker count.
"""
import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from . import kernels
from .decomposition import (
    resampled_deck_array,
    sample_descents_decomposed,
    sample_fixed_points_decomposed,
    sample_inversions_decomposed,
)
from .occupancy import sample_occupied
from .rng import GENERATOR_FAMILY, make_rng
from .shuffle import deck_array

STATISTICS = ("fixed-points", "descents", "inversions", "occupied")
SAMPLERS = ("shuffle-engine", "resampled", "formula-direct")
MIN_EXPECTED = 5.0


def _deck_statistic(statistic, deck, k):
    if statistic == "fixed-points":
        return kernels.count_fixed(deck)
    if statistic == "descents":
        return kernels.count_descents(deck)
    if statistic == "inversions":
        return int(kernels.count_inversions(deck))
    return int(k)


def trial_value(statistic, sampler, n, r, rng):
    if sampler == "shuffle-engine":
        deck, k = deck_array(n, r, rng)
        return _deck_statistic(statistic, deck, k)
    if sampler == "resampled":
        deck, k = resampled_deck_array(n, r, rng)
        return _deck_statistic(statistic, deck, k)
    if sampler == "formula-direct":
        if statistic == "fixed-points":
            return sample_fixed_points_decomposed(n, r, rng)
        if statistic == "descents":
            return sample_descents_decomposed(n, r, rng, channel="formula-direct")
        if statistic == "inversions":
            return sample_inversions_decomposed(n, r, rng)
        return sample_occupied(n, r, rng)
    raise ValueError(f"unknown sampler {sampler!r}")


@dataclass
class EmpiricalDistribution:
    samples: np.ndarray
    seed: object = None
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = np.asarray(self.samples)
        if self.samples.size == 0:
            raise ValueError("empty sample")

    @property
    def sample_count(self):
        return int(self.samples.size)

    @property
    def integer_valued(self):
        return np.issubdtype(self.samples.dtype, np.integer)

    @property
    def values(self):
        return np.unique(self.samples)

    @property
    def counts(self):
        return np.unique(self.samples, return_counts=True)[1]

    @property
    def mean(self):
        return float(np.mean(self.samples))

    @property
    def variance(self):
        if self.sample_count < 2:
            return 0.0
        return float(np.var(self.samples, ddof=1))

    def empirical_pmf(self, upto):
        """Relative frequencies on 0..upto (integer samples only)."""
        counts = np.bincount(self.samples.astype(np.int64), minlength=upto + 1)
        return counts[: upto + 1] / self.sample_count

    def standardized(self, center, scale):
        x = (self.samples.astype(np.float64) - center) / scale
        cfg = dict(self.config, center=float(center), scale=float(scale))
        return EmpiricalDistribution(x, seed=self.seed, config=cfg)

    def histogram_rows(self):
        vals, cnts = np.unique(self.samples, return_counts=True)
        return [(v.item(), int(c), c / self.sample_count) for v, c in zip(vals, cnts)]


@dataclass
class TestReport:
    name: str
    statistic: float
    threshold: object = None
    p_value: object = None
    passed: bool = False
    config: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def to_dict(self):
        return {
            "name": self.name,
            "stat": self.statistic,
            "threshold": self.threshold,
            "p_value": self.p_value,
            "pass": bool(self.passed),
        }


def run_experiment(n, r, trials, statistic, sampler, seed, workers=None):
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}")
    if sampler not in SAMPLERS:
        raise ValueError(f"unknown sampler {sampler!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n < 1 or r < 0:
        raise ValueError(f"need n >= 1 and r >= 0, got n={n}, r={r}")
    if statistic == "descents" and sampler == "formula-direct" and n < 2:
        raise ValueError("descents need n >= 2")
    workers = workers or os.cpu_count() or 1
    out = np.empty(trials, dtype=np.int64)

    def run_chunk(bounds):
        lo, hi = bounds
        for t in range(lo, hi):
            out[t] = trial_value(statistic, sampler, n, r, make_rng(seed, t))

    step = max(1, -(-trials // (4 * workers)))
    chunks = [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]
    if workers == 1:
        for c in chunks:
            run_chunk(c)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_chunk, chunks))
    config = {"n": n, "r": r, "trials": trials, "statistic": statistic,
              "sampler": sampler, "seed": seed, "rng": GENERATOR_FAMILY}
    return EmpiricalDistribution(out, seed=seed, config=config)


def _merge_cells(expected, minimum=MIN_EXPECTED):
    """Group consecutive cells so every group's expected count >= minimum."""
    groups, current, acc = [], [], 0.0
    for i, e in enumerate(expected):
        current.append(i)
        acc += e
        if acc >= minimum:
            groups.append(current)
            current, acc = [], 0.0
    if current:
        if groups:
            groups[-1].extend(current)
        else:
            groups.append(current)
    return groups


def _chi2_gof(e, law, alpha, name):
    if not e.integer_valued:
        raise ValueError("chi2 needs integer-valued samples")
    upto = int(e.samples.max())
    table = law.pmf_table(upto)
    probs = table.copy()
    probs[-1] += max(0.0, 1.0 - table.sum())  # last cell carries the tail
    observed = np.bincount(e.samples.astype(np.int64), minlength=probs.size)[: probs.size]
    expected = probs * e.sample_count
    groups = _merge_cells(expected)
    obs = np.array([observed[g].sum() for g in groups], dtype=float)
    exp = np.array([expected[g].sum() for g in groups])
    stat = float(np.sum((obs - exp) ** 2 / exp))
    dof = len(groups) - 1
    p = float(sps.chi2.sf(stat, dof)) if dof > 0 else 1.0
    return TestReport(name, stat, threshold=alpha, p_value=p, passed=p > alpha)


def total_variation(e, law):
    upto = int(e.samples.max())
    table = law.pmf_table(upto)
    emp = e.empirical_pmf(table.size - 1)
    tail = max(0.0, 1.0 - table.sum())
    return 0.5 * (float(np.abs(emp - table).sum()) + tail)


def ks_statistic(x, cdf_values):
    n = x.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf_values), np.max(cdf_values - (i - 1) / n)))


def gof_test(e, law, kind, threshold=None, alpha=0.001, name=None):
    """Compare a sample to a limit law.

    kind: "chi2" (discrete law, p-value > alpha), "tv" (discrete law,
    distance < threshold) or "ks" (normal law on standardized samples;
    statistic < threshold when given, else p-value > alpha).
    """
    name = name or f"{kind}:{law.kind}"
    if kind == "chi2":
        if not law.discrete:
            raise ValueError("chi2 requires a discrete law")
        report = _chi2_gof(e, law, alpha, name)
    elif kind == "tv":
        if not law.discrete:
            raise ValueError("tv requires a discrete law")
        if not e.integer_valued:
            raise ValueError("tv needs integer-valued samples")
        tv = total_variation(e, law)
        report = TestReport(name, tv, threshold=threshold, passed=threshold is None or tv < threshold)
    elif kind == "ks":
        if law.discrete:
            raise ValueError("ks requires a continuous target; standardize first")
        x = np.sort(e.samples.astype(np.float64))
        d = ks_statistic(x, law.cdf_array(x))
        p = float(sps.kstwo.sf(d, x.size))
        passed = d < threshold if threshold is not None else p > alpha
        report = TestReport(name, d, threshold=threshold if threshold is not None else alpha,
                            p_value=p, passed=passed)
    else:
        raise ValueError(f"unknown test kind {kind!r}")
    report.config = dict(e.config, law=law.describe())
    return report


def two_sample_test(e1, e2, kind, alpha=0.001, name=None):
    """Two-sample chi-square (pooled cells) or KS; passes when p > alpha."""
    name = name or f"two-sample-{kind}"
    if kind == "chi2":
        if not (e1.integer_valued and e2.integer_valued):
            raise ValueError("two-sample chi2 needs integer-valued samples")
        support = np.union1d(e1.values, e2.values)
        c1 = np.searchsorted(support, e1.values)
        c2 = np.searchsorted(support, e2.values)
        table = np.zeros((2, support.size))
        table[0, c1] = e1.counts
        table[1, c2] = e2.counts
        rows = table.sum(axis=1)
        total = rows.sum()
        min_expected = table.sum(axis=0) * rows.min() / total
        groups = _merge_cells(min_expected)
        pooled = np.array([[row[g].sum() for g in groups] for row in table])
        if pooled.shape[1] < 2:
            stat, p = 0.0, 1.0
        else:
            expected = np.outer(rows, pooled.sum(axis=0)) / total
            stat = float(np.sum((pooled - expected) ** 2 / expected))
            p = float(sps.chi2.sf(stat, pooled.shape[1] - 1))
    elif kind == "ks":
        res = sps.ks_2samp(e1.samples, e2.samples, method="asymp")
        stat, p = float(res.statistic), float(res.pvalue)
    else:
        raise ValueError(f"unknown test kind {kind!r}")
    return TestReport(name, stat, threshold=alpha, p_value=p, passed=p > alpha,
                      config={"left": e1.config, "right": e2.config})


@dataclass(frozen=True)
class Summary:
    mean: float
    variance: float
    se_mean: float
    se_variance: float
    mean_ci: tuple
    variance_ci: tuple


def summarize(e, z=1.96):
    if e.sample_count < 2:
        raise ValueError("summarize needs at least two samples")
    x = e.samples.astype(np.float64)
    n = x.size
    mean = float(x.mean())
    var = float(x.var(ddof=1))
    se_mean = math.sqrt(var / n)
    m4 = float(np.mean((x - mean) ** 4))
    se_var = math.sqrt(max(0.0, (m4 - (n - 3) / (n - 1) * var * var) / n))
    return Summary(mean, var, se_mean, se_var,
                   (mean - z * se_mean, mean + z * se_mean),
                   (var - z * se_var, var + z * se_var))


# -- output files ---------------------------------------------------------

def _config_comment(config):
    return "# " + json.dumps(config, sort_keys=True, default=str) + "\n"


def write_histogram_csv(e, path, config):
    with open(path, "w", newline="") as fh:
        fh.write(_config_comment(config))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["value", "count", "density"])
        for value, count, density in e.histogram_rows():
            w.writerow([value, count, repr(float(density))])


def write_samples_csv(e, path, config):
    with open(path, "w", newline="") as fh:
        fh.write(_config_comment(config))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trial", "value"])
        for t, v in enumerate(e.samples.tolist()):
            w.writerow([t, repr(v)])


def report_dict(experiment, e, test=None, config=None):
    cfg = dict(e.config)
    out = {
        "experiment": experiment,
        "n": cfg.get("n"),
        "r": cfg.get("r"),
        "trials": e.sample_count,
        "seed": e.seed,
        "statistic": cfg.get("statistic"),
        "sampler": cfg.get("sampler"),
        "mean": e.mean,
        "variance": e.variance,
        "test": test.to_dict() if test is not None else None,
        "config": config if config is not None else cfg,
    }
    return out


def write_report_json(report, path):
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")

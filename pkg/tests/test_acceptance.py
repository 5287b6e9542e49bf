"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` or
``python tests/test_acceptance.py``.
"""
import sys
import time

import pytest

from rttstats import experiments

CRITERIA = {
    1: ("brute-force oracle, n <= 5, r <= 4, exact", 60.0,
        lambda: experiments.brute_suite(5, 4)),
    2: ("fast path == literal shuffle, exhaustive + 1000 random", 10.0,
        lambda: experiments.pathwise_suite(4, 4, 1000)),
    3: ("decomposed samplers vs engine, n=100 r=150, p > 0.001", 30.0,
        lambda: experiments.decomposition_suite(100, 150, 30000, seed=7)),
    4: ("fixed points r=5000/10000/20000 vs Poisson-geometric (and Poisson(1)), TV < 0.06", 60.0,
        lambda: experiments.limits_suite("1")),
    5: ("descents c=0.25/0.5/1: mean 4 SE, variance 15%, KS < 0.04", 90.0,
        lambda: experiments.limits_suite("2")),
    6: ("inversions c=0.1/0.25/1: KS < 0.06, mean 4 SE", 30.0,
        lambda: experiments.limits_suite("3")),
    7: ("mixed regime: fixed points TV < 0.05, descents KS < 0.04, inversions KS < 0.06", None,
        lambda: experiments.limits_suite("mixed")),
    8: ("general CLT variance specializes at 20 values of c to 1e-12", None,
        lambda: experiments.limits_suite("algebra")),
    9: ("finite-n fixed point law -> limit, monotone, < 0.01 at n=5000", None,
        lambda: experiments.limits_suite("finite")),
    10: ("fixed point mean (4 SE) and variance (15%) at n=10000, c=1", None,
         lambda: experiments.limits_suite("moments")),
}


def _describe(rep):
    extra = f" p={rep.p_value:.3g}" if rep.p_value is not None else ""
    thr = "" if rep.threshold is None else f" thr={rep.threshold:g}"
    return f"{rep.name}: stat={rep.statistic:.4g}{thr}{extra}"


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    title, budget, run = CRITERIA[number]
    start = time.perf_counter()
    reports = run()
    elapsed = time.perf_counter() - start
    failed = [rep for rep in reports if not rep.passed]
    in_time = budget is None or elapsed < budget
    ok = bool(reports) and not failed and in_time
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        limit = f" (budget {budget:g} s)" if budget else ""
        print(f"\n[{status}] criterion {number}: {title} -- {len(reports)} checks, {elapsed:.1f} s{limit}")
        for rep in failed:
            print(f"    failed {_describe(rep)}")
    assert reports
    assert not failed, [_describe(rep) for rep in failed]
    assert in_time, f"took {elapsed:.1f} s, budget {budget} s"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

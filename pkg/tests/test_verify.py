import json

import numpy as np

from maslovkit.generators import random_framed_family
from maslovkit.verify import (
    VerifyConfig,
    _result,
    format_report,
    rho_axioms,
    run_verify,
    sample_lifts,
)


def test_report_structure_on_a_tiny_run():
    rep = run_verify(VerifyConfig(dim=2, trials=1, seed=5))
    assert rep["passed"] and rep["dim"] == 2 and rep["seed"] == 5
    names = {p["name"] for p in rep["properties"]}
    assert {"rho naturality", "lift independence", "splitting", "pair index additivity"} <= names
    for p in rep["properties"]:
        assert p["max_deviation"] <= p["threshold"] and p["passed"]
    assert json.loads(format_report(rep)) == rep


def test_zero_trials_runs_nothing():
    rep = run_verify(VerifyConfig(trials=0))
    assert rep["properties"] == [] and rep["passed"]


def test_result_flags_a_deviation_over_threshold():
    r = _result("demo", [1e-9, 2e-6], 1e-6)
    assert not r.passed and r.trials == 2 and r.max_deviation == 2e-6


def test_axiom_suite_counts_trials():
    res = rho_axioms(np.random.default_rng(0), 3, max_dim=4)
    assert all(r.trials == 3 and r.passed for r in res)


def test_sample_lifts_refines_a_coarse_start():
    fam = random_framed_family(2, 2, 3)
    loop, (a, b) = sample_lifts(fam, [None, 1], samples=2)
    assert len(loop.grid) > 3
    assert abs(a - b) <= 1e-6

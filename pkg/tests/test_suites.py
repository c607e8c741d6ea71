import pytest

from photonam.modes import build_cartesian_modeset
from photonam.report import render_report
from photonam.suites import SUITES, SuiteConfig, run_suite

KNOWN_ANCHORS = {
    "MCR1",
    "MCR2",
    "MCR3",
    "BCR1",
    "BCR2",
    "H-mode-form",
    "S-obs-form",
    "L-obs-form",
    "PM-planewave",
    "PWE-LM",
    "L-obs",
    "L-pure-S",
    "CR-spin",
    "J-obs",
    "Table-I",
    "Table-II",
    "Table-III",
    "JM-BJ",
    "Stokes",
    "Gupta1",
    "gauge-hiding",
    "xi",
    "indefinite-metric",
    "negative-norm",
    "helicity",
    "E-planewave",
    "A-split",
    "Dirac-matrices",
    "ETCR-D1",
    "S_D",
}


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes(name):
    rep = run_suite(SuiteConfig(suite=name))
    failed = [r.check_id for r in rep.checks if not r.passed]
    assert not failed, f"{name} failed: {failed}"
    assert rep.checks, "suite produced no checks"
    assert [r.check_id for r in rep.checks] == sorted(r.check_id for r in rep.checks)
    for rec in rep.checks:
        assert rec.anchor in KNOWN_ANCHORS, rec.anchor


def test_all_suite_merges_and_prefixes():
    rep = run_suite(SuiteConfig(suite="all"))
    assert rep.all_passed
    prefixes = {r.check_id.split("/")[0] for r in rep.checks}
    assert prefixes == set(SUITES)


def test_suite_with_custom_grid():
    grid = build_cartesian_modeset([(0.4, 0.1, -0.9)])
    rep = run_suite(SuiteConfig(suite="counter-rotating", grid=grid))
    assert rep.all_passed
    assert "0.4" in rep.config["grid"]


def test_suite_determinism_same_seed():
    a = render_report(run_suite(SuiteConfig(suite="gauge-hiding", seed=5)), "json")
    b = render_report(run_suite(SuiteConfig(suite="gauge-hiding", seed=5)), "json")
    assert a == b


def test_canonical_respects_custom_shell():
    rep = run_suite(SuiteConfig(suite="canonical-commutators", shell=(2.0, 2)))
    assert rep.all_passed
    assert rep.config["shell"] == "2.0,2"

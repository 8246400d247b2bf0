import math

import pytest

import fdrclass as fc


def test_laplace_calibration():
    model = fc.calibrate("scale", 1.0, fc.CanonicalParams.from_tau(2.0, 0.5), 10)
    assert model.effect == pytest.approx(4.0, rel=1e-9)
    assert model.bayes_threshold == pytest.approx(0.0625, rel=1e-9)
    assert fc.q_opt(model) == pytest.approx(4.0, rel=1e-9)
    assert fc.risk_det(model, 0.0625) == pytest.approx(0.2083333333333333, rel=1e-9)


def test_subbotin_functions():
    gauss = fc.SubbotinShape(2.0)
    assert gauss.normalizer == pytest.approx(math.sqrt(2 * math.pi))
    assert fc.upper_tail(gauss, 1.959963984540054) == pytest.approx(0.025, rel=1e-12)
    assert fc.quantile(gauss, 0.025) == pytest.approx(1.959963984540054, rel=1e-12)


def test_thresholds():
    r = fc.bh_threshold([0.01, 0.04, 0.5], 0.15)
    assert r.k_hat == 2
    assert r.value == pytest.approx(0.1)
    assert r.provenance == "BH"
    floor = fc.fdr_threshold([1.0] * 4, 0.1)
    assert floor.k_hat == 0
    assert floor.value == pytest.approx(0.025)
    assert 0.165 <= fc.alpha_opt("gaussian-location", 10**6, 0.5, 0.5) <= 0.175


def test_exact_risk_and_distribution():
    model = fc.calibrate("location", 2.0, fc.CanonicalParams.from_beta(0.5, 0.5), 100)
    dist = fc.fdr_rejection_distribution(model, 100, 0.2)
    assert len(dist) == 101
    assert sum(dist) == pytest.approx(1.0, abs=1e-9)
    report = fc.exact_fdr_risk(model, 100, 0.2)
    assert report.risk >= report.bayes_risk
    assert report.excess_rel == pytest.approx((report.risk - report.bayes_risk) / report.bayes_risk)
    assert fc.steck_prefix([0.3, 0.6])[2] == pytest.approx(0.27)


def test_simulation_is_reproducible():
    model = fc.calibrate("location", 2.0, fc.CanonicalParams.from_tau(5.0, 0.5), 10)
    a = fc.mc_risk(model, 50, "fdr", 0.2, 2000, seed=3)
    b = fc.mc_risk(model, 50, "fdr", 0.2, 2000, seed=3, threads=1)
    assert a == b
    labels, stats, pvalues = fc.sample_dataset(model, 20, seed=3)
    assert len(labels) == len(stats) == len(pvalues) == 20
    assert all(p == model.pvalue(x) for x, p in zip(stats, pvalues))
    fdp = fc.mc_fdp(model, 100, "bh", 0.1, 4000, seed=4, null_only=True)
    assert fdp["mean"] <= 0.1 + 3 * fdp["se"]


def test_errors_map_to_exceptions():
    with pytest.raises(fc.DomainError):
        fc.SubbotinShape(0.5)
    with pytest.raises(fc.CapacityError):
        model = fc.calibrate("location", 2.0, fc.CanonicalParams.from_tau(5.0, 0.5), 10)
        fc.exact_fdr_risk(model, 20000, 0.1)
    with pytest.raises(fc.Error):
        fc.calibrate("location", 1.0, fc.CanonicalParams.from_tau(5.0, 0.5), 10)

"""Expected toy8 values were computed by hand from the eight rows:
stratum x=0 has 1 of 4 treated (p = 1/4), stratum x=1 has 3 of 4 (p = 3/4);
treated outcomes are 1 + 4p and untreated outcomes are 0."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hetdiag import (Assumption2Error, ApleComponents, Dataset, GroupMoments,
                     IdentityBrokenError, aple_components, aple_effects, decompose_bias,
                     diagnose, diff_in_means_check, group_moments, ols_weights,
                     propensity_lpm)
from hetdiag import diagnostics
from hetdiag.oracle import random_dataset

from conftest import rel_close


def test_toy8_propensity(toy8):
    prop = propensity_lpm(toy8.d, toy8.X)
    np.testing.assert_allclose(prop.p, np.where(toy8.X[:, 0] == 1, 0.75, 0.25), atol=1e-14)
    assert prop.p.mean() == pytest.approx(toy8.d.mean(), abs=1e-10)


def test_toy8_moments(toy8):
    m = group_moments(propensity_lpm(toy8.d, toy8.X).p, toy8.d)
    assert m.rho == 0.5
    assert m.mean_p_1 == pytest.approx(0.625, abs=1e-12)
    assert m.mean_p_0 == pytest.approx(0.375, abs=1e-12)
    assert m.var_p_1 == pytest.approx(0.046875, abs=1e-12)
    assert m.var_p_0 == pytest.approx(0.046875, abs=1e-12)


def test_toy8_weights(toy8):
    w = ols_weights(group_moments(propensity_lpm(toy8.d, toy8.X).p, toy8.d))
    assert w.w1 == pytest.approx(0.5, abs=1e-12)
    assert w.w0 == pytest.approx(0.5, abs=1e-12)
    assert w.delta == pytest.approx(0.0, abs=1e-12)
    assert (w.w0_star, w.delta_star) == (0.5, 0.0)


def test_toy8_components_and_effects(toy8):
    p = propensity_lpm(toy8.d, toy8.X).p
    c = aple_components(toy8.y, p, toy8.d)
    np.testing.assert_allclose([c.alpha1, c.gamma1, c.alpha0, c.gamma0], [1, 4, 0, 0],
                               atol=1e-12)
    m = group_moments(p, toy8.d)
    aple, aple1, aple0 = aple_effects(c, m, p.mean())
    assert (aple, aple1, aple0) == pytest.approx((3.0, 3.5, 2.5), abs=1e-12)


def test_toy8_diff_in_means(toy8):
    r = diagnose(toy8)
    got = diff_in_means_check(toy8.y, r.propensity.p, toy8.d, r.components, r.weights)
    assert got == pytest.approx(3.0, abs=1e-12)
    assert r.tau_ols == pytest.approx(3.0, abs=1e-12)


def test_toy8_bias_ate_zero_despite_gap(toy8):
    b = decompose_bias(diagnose(toy8), "ATE")
    assert b.multiplier == pytest.approx(0.0, abs=1e-12)
    assert b.heterogeneity_gap == pytest.approx(-1.0, abs=1e-12)
    assert b.bias == pytest.approx(0.0, abs=1e-12)
    assert b.ols_minus_target == pytest.approx(0.0, abs=1e-12)


def test_orthogonal_covariate_gives_constant_p():
    # x balanced within each treatment arm, so the LPM slope is exactly zero
    d = np.array([1, 1, 1, 1, 0, 0, 0, 0, 0, 0], float)
    x = np.array([0, 1, 2, 3, 0, 1, 2, 3, 1.5, 1.5])
    prop = propensity_lpm(d, x[:, None])
    np.testing.assert_allclose(prop.p, 0.4, atol=1e-14)
    with pytest.raises(Assumption2Error):
        group_moments(prop.p, d)


def test_constant_p_fails_assumption2():
    with pytest.raises(Assumption2Error, match="Assumption 2"):
        group_moments(np.full(10, 0.3), np.r_[np.ones(3), np.zeros(7)])


def test_randomized_design_rejected_by_diagnose():
    # treatment is constant within covariate cells for one arm: p has no spread
    # among the treated when the only covariate takes one value among them
    d = np.r_[np.ones(5), np.zeros(5)]
    x = np.r_[np.full(5, 2.0), np.arange(5.0)]
    with pytest.raises(Assumption2Error):
        diagnose(Dataset(np.arange(10.0), d, x))


def test_zero_outcome_components(toy8):
    p = propensity_lpm(toy8.d, toy8.X).p
    c = aple_components(np.zeros(8), p, toy8.d)
    np.testing.assert_allclose([c.alpha1, c.gamma1, c.alpha0, c.gamma0], 0, atol=1e-14)


def test_shared_line_components(rng):
    data = random_dataset(rng, 200, 0.4)
    p = propensity_lpm(data.d, data.X).p
    c = aple_components(2.5 - 7 * p, p, data.d)
    np.testing.assert_allclose([c.alpha1, c.alpha0], 2.5, rtol=1e-10)
    np.testing.assert_allclose([c.gamma1, c.gamma0], -7, rtol=1e-10)


def test_homogeneous_slopes_collapse_effects():
    m = GroupMoments(0.3, 0.6, 0.2, 0.01, 0.02)
    c = ApleComponents(4.0, 1.5, 1.0, 1.5)
    assert aple_effects(c, m) == pytest.approx((3.0, 3.0, 3.0))


def test_exact_homogeneous_dgp(rng):
    n = 400
    x = rng.normal(size=n)
    d = (rng.random(n) < 0.3 + 0.2 * (x > 0)).astype(float)
    data = Dataset(1 + 2 * d + 3 * x, d, x)
    r = diagnose(data)
    assert r.tau_ols == pytest.approx(2.0, abs=1e-10)
    assert r.aple1 == pytest.approx(2.0, abs=1e-10)
    assert r.aple0 == pytest.approx(2.0, abs=1e-10)
    assert r.identity_residual <= 1e-10
    for target in ("ATE", "ATT"):
        assert decompose_bias(r, target).bias == pytest.approx(0.0, abs=1e-9)


def test_point_of_means(rng):
    data = random_dataset(rng, 500, 0.3)
    r = diagnose(data)
    t = data.d == 1
    c, m = r.components, r.moments
    assert rel_close(data.y[t].mean(), c.alpha1 + c.gamma1 * m.mean_p_1, 1e-8)
    assert rel_close(data.y[~t].mean(), c.alpha0 + c.gamma0 * m.mean_p_0, 1e-8)
    assert abs(m.rho * m.mean_p_1 + (1 - m.rho) * m.mean_p_0 - r.propensity.p.mean()) < 1e-10


def test_identity_guard(monkeypatch, toy8):
    monkeypatch.setattr(diagnostics, "aple_effects",
                        lambda c, m, mp=None: (0.0, 100.0, 100.0))
    with pytest.raises(IdentityBrokenError):
        diagnose(toy8)


def test_decompose_bias_att_cross_check(rng):
    data = random_dataset(rng, 800, 0.25)
    r = diagnose(data)
    for target in ("ATE", "ATT"):
        b = decompose_bias(r, target)
        assert rel_close(b.bias, b.ols_minus_target, 1e-8)
    with pytest.raises(ValueError):
        decompose_bias(r, "ATU")


def two_strata(t_a, t_b, u_a, u_b, seed=0):
    """Two-stratum sample with the given treated/untreated counts per stratum."""
    x = np.r_[np.zeros(t_a + u_a), np.ones(t_b + u_b)]
    d = np.r_[np.ones(t_a), np.zeros(u_a), np.ones(t_b), np.zeros(u_b)]
    y = np.random.default_rng(seed).normal(size=len(d)) + 2 * d * x
    return Dataset(y, d, x)


@pytest.mark.parametrize("counts", [(1, 2, 6, 3), (2, 3, 6, 4), (3, 1, 3, 9), (10, 20, 60, 30)])
def test_equal_variance_rule_of_thumb(counts):
    # counts chosen so that the treated share of stratum A equals the untreated
    # share of stratum B, which forces Var[p|d=1] = Var[p|d=0]
    t_a, t_b, u_a, u_b = counts
    assert t_a * (u_a + u_b) == u_b * (t_a + t_b)
    r = diagnose(two_strata(*counts))
    m, w = r.moments, r.weights
    assert m.rho != 0.5
    assert abs(m.var_p_1 - m.var_p_0) <= 1e-12
    assert abs(w.w0 - m.rho) < 1e-10
    assert abs(w.delta - (2 * m.rho - 1)) < 1e-10
    assert (w.w0_star, w.delta_star) == (m.rho, 2 * m.rho - 1)


def test_scaling_outcome(rng):
    data = random_dataset(rng, 600, 0.3, k=3)
    base = diagnose(data)
    scaled = diagnose(Dataset(3.5 * data.y, data.d, data.X))
    for f in ("tau_ols", "aple", "aple1", "aple0"):
        assert rel_close(getattr(scaled, f), 3.5 * getattr(base, f), 1e-9)
    for f in ("w1", "w0", "delta"):
        assert getattr(scaled.weights, f) == pytest.approx(getattr(base.weights, f), abs=1e-12)
    assert scaled.moments.rho == base.moments.rho


def test_affine_covariate_invariance(rng):
    data = random_dataset(rng, 600, 0.3, k=3)
    X = data.X.copy()
    X[:, 1] = -40 * X[:, 1] + 1000
    base, moved = diagnose(data), diagnose(Dataset(data.y, data.d, X))
    for key, v in base.as_dict().items():
        if isinstance(v, float) and key not in ("alpha1", "alpha0", "gamma1", "gamma0"):
            assert rel_close(moved.as_dict()[key], v, 1e-8), key


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(50, 2000),
       rho=st.floats(0.02, 0.98), k=st.integers(1, 6))
def test_decomposition_identities(seed, n, rho, k):
    data = random_dataset(np.random.default_rng(seed), n, rho, k=k)
    r = diagnose(data)
    w, m = r.weights, r.moments
    scale = max(1.0, abs(r.tau_ols))
    assert abs(r.tau_ols - (w.w1 * r.aple1 + w.w0 * r.aple0)) <= 1e-8 * scale
    assert abs(r.aple - (m.rho * r.aple1 + (1 - m.rho) * r.aple0)) <= 1e-8 * max(1, abs(r.aple))
    assert 0 < w.w1 < 1 and 0 < w.w0 < 1
    assert w.w0 + w.w1 == pytest.approx(1.0, abs=1e-15)
    assert w.delta == m.rho - w.w1
    assert abs(w.delta) < 1
    dim = diff_in_means_check(data.y, r.propensity.p, data.d, r.components, w)
    assert abs(dim - r.tau_ols) <= 1e-8 * scale


@pytest.mark.parametrize("spec, ols, se", [(1, -3437, 612), (2, -78, 596), (3, 623, 610),
                                           (4, 794, 619)])
def test_nsw_ols_and_robust_se_by_spec(spec, ols, se):
    from hetdiag.datasets import nswcps_dataset
    r = diagnose(nswcps_dataset(spec))
    assert r.tau_ols == pytest.approx(ols, abs=0.5)
    assert r.se_ols == pytest.approx(se, abs=0.5)
    assert r.weights.w0_star == pytest.approx(0.011, abs=5e-4)
    assert r.weights.delta_star == pytest.approx(-0.977, abs=5e-4)

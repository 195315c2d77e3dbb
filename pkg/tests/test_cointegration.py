import numpy as np
import pytest
import scipy.linalg
import statsmodels.api as sm
from hypothesis import given, settings
from hypothesis import strategies as st
from statsmodels.tsa.vector_ar.vecm import coint_johansen

from fxcomove.cointegration import (
    VecmSpec,
    default_bandwidth,
    estimate_vecm,
    hansen_lc,
    johansen_rrr,
    maxeig_stat,
    newey_west_cov,
    score_matrix,
    trace_stat,
)
from fxcomove.cointegration.tables import johansen_critical_value
from fxcomove.errors import ConfigError, DomainError, NumericalError, SizeError
from fxcomove.panel import Panel
from fxcomove.simulate import AlphaSchedule, SimSpec, default_spec, simulate_vecm

from conftest import random_walk_panel

eigen_lists = st.lists(st.floats(0.0, 0.999), min_size=1, max_size=8).map(lambda v: sorted(v, reverse=True))


def canonical_oracle(X, k, restricted_constant):
    """Squared canonical correlations via an SVD of the whitened cross moment."""
    dX = np.diff(X, axis=0)
    rows = np.arange(k + 1, X.shape[0])
    Y = dX[rows - 1]
    Z = np.column_stack([dX[rows - 1 - j] for j in range(1, k + 1)])
    L = X[rows - k]
    if restricted_constant:
        L = np.column_stack([L, np.ones(len(rows))])
    proj = Z @ np.linalg.pinv(Z)
    R0 = Y - proj @ Y
    R1 = L - proj @ L
    q0, _ = np.linalg.qr(R0)
    q1, _ = np.linalg.qr(R1)
    return np.linalg.svd(q0.T @ q1, compute_uv=False) ** 2


class TestStatistics:
    @pytest.mark.parametrize("lam, expected", [(0.1352, 44.45), (0.0826, 26.39)])
    def test_reported_maxeig(self, lam, expected):
        assert maxeig_stat(lam, 306) == pytest.approx(expected, abs=0.2)

    def test_zero_eigenvalue(self):
        assert maxeig_stat(0.0, 306) == 0.0
        assert trace_stat([0.0, 0.0, 0.0], 0, 100) == 0.0

    @pytest.mark.parametrize("lam", [1.0, 1.5, -0.1])
    def test_domain(self, lam):
        with pytest.raises(DomainError):
            maxeig_stat(lam, 10)

    def test_single_eigenvalue(self):
        assert trace_stat([0.3], 0, 50) == maxeig_stat(0.3, 50)

    @settings(max_examples=100, deadline=None)
    @given(eigen_lists, st.integers(10, 1000))
    def test_telescoping(self, lams, T):
        for r in range(len(lams) - 1):
            gap = trace_stat(lams, r, T) - trace_stat(lams, r + 1, T)
            assert abs(gap - maxeig_stat(lams[r], T)) <= 1e-12 * max(1.0, trace_stat(lams, r, T))
            assert trace_stat(lams, r, T) >= maxeig_stat(lams[r], T)


class TestCriticalValues:
    @pytest.mark.parametrize(
        "stat, trends, expected",
        [("maxeig", 6, 37.45), ("maxeig", 5, 31.66), ("trace", 6, 97.18), ("trace", 5, 71.86)],
    )
    def test_reported_ten_percent(self, stat, trends, expected):
        assert johansen_critical_value(stat, trends, "intercept", 0.10) == expected

    def test_levels_increase(self):
        for stat in ("trace", "maxeig"):
            for det in ("intercept", "none"):
                cv = [johansen_critical_value(stat, 3, det, lv) for lv in (0.10, 0.05, 0.01)]
                assert cv == sorted(cv)

    def test_outside_table(self):
        assert np.isnan(johansen_critical_value("trace", 40, "none", 0.05))


class TestJohansen:
    def test_matches_statsmodels_without_deterministics(self, sim_panel):
        _, p = sim_panel
        res = johansen_rrr(p, VecmSpec(lag_k=2, deterministic="none"))
        ref = coint_johansen(p.values, -1, 2)
        np.testing.assert_allclose(res.eigenvalues, ref.eig, rtol=1e-9)
        np.testing.assert_allclose(res.trace_stats, ref.lr1, rtol=1e-9)
        np.testing.assert_allclose(res.maxeig_stats, ref.lr2, rtol=1e-9)
        np.testing.assert_allclose(res.critical_values["trace"][0.05], ref.cvt[:, 1])

    @pytest.mark.parametrize("k", [1, 3])
    def test_restricted_constant_matches_svd_oracle(self, sim_panel, k):
        _, p = sim_panel
        res = johansen_rrr(p, VecmSpec(lag_k=k))
        ref = canonical_oracle(p.values, k, True)[: p.m]
        np.testing.assert_allclose(res.eigenvalues, ref, atol=1e-10)

    def test_result_invariants(self, sim_panel):
        _, p = sim_panel
        res = johansen_rrr(p, VecmSpec(rank_r=1))
        lam = res.eigenvalues
        assert np.all(np.diff(lam) <= 0) and np.all((lam >= 0) & (lam < 1))
        assert np.all(res.trace_stats >= res.maxeig_stats - 1e-12)
        beta = res.beta(1)
        assert beta[0, 0] == pytest.approx(1.0)
        assert np.linalg.matrix_rank(beta) == 1
        assert res.alpha(1).shape == (3, 1)
        assert res.effective_T == p.T - 2

    def test_beta_normalisation_rank_two(self, sim_panel):
        _, p = sim_panel
        b = johansen_rrr(p).beta(2)
        np.testing.assert_allclose(b[:2], np.eye(2), atol=1e-12)

    def test_recovers_true_direction(self):
        spec = default_spec(seed=4, T=2000)
        b = johansen_rrr(simulate_vecm(spec), VecmSpec(rank_r=1)).beta(1)[:, 0]
        np.testing.assert_allclose(b, spec.beta_true[:, 0], atol=0.05)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10_000))
    def test_invariant_to_recombination(self, seed):
        g = np.random.default_rng(seed)
        p = simulate_vecm(default_spec(seed=seed % 50, T=200))
        M = g.standard_normal((3, 3)) + 3 * np.eye(3)
        q = Panel.from_array(p.values @ M.T)
        for det in ("intercept", "none"):
            a = johansen_rrr(p, VecmSpec(deterministic=det)).eigenvalues
            b = johansen_rrr(q, VecmSpec(deterministic=det)).eigenvalues
            np.testing.assert_allclose(a, b, atol=1e-9)

    def test_white_noise_levels_signal_full_rank(self):
        hits = 0
        lam_min = []
        for s in range(20):
            x = np.random.default_rng(s).standard_normal((300, 3))
            res = johansen_rrr(Panel.from_array(x))
            hits += res.select_rank() == 3
            lam_min.append(res.eigenvalues[-1])
        # stationary levels: every canonical correlation is far from zero
        assert hits == 20
        assert min(lam_min) > 0.2

    def test_size_error(self):
        with pytest.raises(SizeError):
            johansen_rrr(random_walk_panel(0, 30, 3))

    def test_lag_validation(self):
        with pytest.raises(ConfigError):
            johansen_rrr(random_walk_panel(0, 40, 1), VecmSpec(lag_k=10))


def noise_free_ecm(T=40, seed=0):
    g = np.random.default_rng(seed)
    alpha = np.array([[-0.3], [0.2]])
    beta = np.array([[1.0], [-1.0]])
    gamma = np.array([[0.2, -0.1], [0.05, 0.3]])
    mu = np.array([0.01, -0.02])
    X = np.zeros((T, 2))
    X[:2] = g.standard_normal((2, 2))
    for t in range(2, T):
        X[t] = X[t - 1] + mu + gamma @ (X[t - 1] - X[t - 2]) + alpha @ (beta.T @ X[t - 1])
    return Panel.from_array(X), alpha, beta, gamma, mu


class TestVecm:
    def test_noise_free_recovery(self):
        p, alpha, beta, gamma, mu = noise_free_ecm()
        fit = estimate_vecm(p, VecmSpec(1), beta=beta)
        np.testing.assert_allclose(fit.gamma, gamma, atol=1e-8)
        np.testing.assert_allclose(fit.alpha, alpha, atol=1e-8)
        np.testing.assert_allclose(fit.intercept, mu, atol=1e-8)

    def test_noise_free_unrestricted(self):
        p, alpha, beta, gamma, mu = noise_free_ecm(seed=3)
        fit = estimate_vecm(p, VecmSpec(1))
        # the levels stay linearly independent over a short transient path
        np.testing.assert_allclose(fit.pi, alpha @ beta.T, atol=1e-8)

    def test_effective_sample(self):
        p = random_walk_panel(1, 308, 6, 0.02)
        fit = estimate_vecm(p, VecmSpec(1))
        assert fit.effective_T == 306
        assert fit.residuals.shape == (306, 6)

    def test_reconstruction_and_orthogonality(self, sim_panel):
        spec, p = sim_panel
        fit = estimate_vecm(p, VecmSpec(2), beta=spec.beta_true)
        assert np.abs(fit.fitted + fit.residuals - fit.response).max() <= 1e-9
        assert np.abs(fit.design.T @ fit.residuals).max() <= 1e-9

    def test_matches_statsmodels_ols(self, sim_panel):
        spec, p = sim_panel
        fit = estimate_vecm(p, VecmSpec(1))
        for i in range(p.m):
            ols = sm.OLS(fit.response[:, i], fit.design).fit()
            np.testing.assert_allclose(fit.coef[:, i], ols.params, rtol=1e-8, atol=1e-12)
            assert fit.adj_r2[i] == pytest.approx(ols.rsquared_adj, abs=1e-10)
            hac = ols.get_robustcov_results("HAC", maxlags=fit.bandwidth, use_correction=False)
            np.testing.assert_allclose(fit.se[:, i], hac.bse, rtol=1e-8)

    def test_collinear_columns_named(self):
        x = np.cumsum(np.random.default_rng(0).standard_normal((100, 1)), axis=0)
        p = Panel.from_array(np.hstack([x, 2 * x]), ["a", "b"])
        with pytest.raises(NumericalError, match="l\\.(a|b)"):
            estimate_vecm(p, VecmSpec(1))

    def test_bad_beta(self, sim_panel):
        _, p = sim_panel
        with pytest.raises(ConfigError):
            estimate_vecm(p, beta=np.zeros((3, 1)))

    def test_alpha_consistency(self):
        beta = np.array([[1.0], [-1.0]])
        est = []
        for s in range(200):
            spec = SimSpec(2, 1, beta, AlphaSchedule.constant([[-0.2], [0.1]]), noise_scale=0.02, T=2000, seed=s)
            est.append(estimate_vecm(simulate_vecm(spec), VecmSpec(1), beta=beta).alpha[:, 0])
        med = np.median(est, axis=0)
        np.testing.assert_allclose(med, [-0.2, 0.1], atol=0.05)


class TestNeweyWest:
    def test_zero_bandwidth_is_white(self, rng):
        X = rng.standard_normal((80, 3))
        e = rng.standard_normal(80) * (1 + X[:, 0] ** 2)
        ref = sm.OLS(e, X).fit(cov_type="HC0").cov_params()
        # HC0 depends on the OLS residuals; feed those residuals to both routes
        res = sm.OLS(e, X).fit()
        np.testing.assert_allclose(newey_west_cov(X, res.resid, 0), ref, atol=1e-12)

    def test_matches_statsmodels_hac(self, rng):
        X = rng.standard_normal((150, 2))
        y = X @ [1.0, -0.5] + np.convolve(rng.standard_normal(151), [1, 0.6], "valid")
        res = sm.OLS(y, X).fit()
        ref = res.get_robustcov_results("HAC", maxlags=5, use_correction=False).cov_params()
        np.testing.assert_allclose(newey_west_cov(X, res.resid, 5), ref, rtol=1e-10)

    def test_default_bandwidth(self):
        assert default_bandwidth(306) == 5
        assert default_bandwidth(100) == 4

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.integers(0, 8))
    def test_symmetric_psd(self, seed, L):
        g = np.random.default_rng(seed)
        X = g.standard_normal((40, 3))
        cov = newey_west_cov(X, g.standard_normal(40), L)
        assert np.abs(cov - cov.T).max() <= 1e-12
        assert np.linalg.eigvalsh(cov).min() >= -1e-12 * np.abs(cov).max()

    def test_dimension_mismatch(self):
        with pytest.raises(SizeError):
            newey_west_cov(np.ones((5, 2)), np.ones(4))

    def test_iid_close_to_classical(self):
        ratios = []
        for s in range(200):
            g = np.random.default_rng(s)
            X = np.column_stack([np.ones(1000), g.standard_normal(1000)])
            res = sm.OLS(X @ [0.5, 1.0] + g.standard_normal(1000), X).fit()
            hac = np.sqrt(np.diag(newey_west_cov(X, res.resid)))
            ratios.append(hac / res.bse)
        assert np.all(np.abs(np.median(ratios, axis=0) - 1) <= 0.10)


def break_pair(seed):
    beta = np.array([[1.0], [-1.0]])
    stable = SimSpec(2, 1, beta, AlphaSchedule.constant([[-0.1], [0.1]]), noise_scale=0.02, T=300, seed=seed)
    broken = stable.replace(alpha_path_true=AlphaSchedule.step([[-0.1], [0.1]], [[-0.6], [0.4]]))
    return beta, simulate_vecm(stable), simulate_vecm(broken)


class TestHansen:
    def test_parameter_count(self):
        p = random_walk_panel(2, 308, 6, 0.02)
        res = hansen_lc(estimate_vecm(p, VecmSpec(1)))
        assert res.parameter_count == 6 * (6 + 1 + 6 + 1)
        assert res.includes_variance and res.lc_statistic >= 0

    def test_full_sample_score_sum_vanishes(self, sim_panel):
        spec, p = sim_panel
        fit = estimate_vecm(p, VecmSpec(1), beta=spec.beta_true)
        f = score_matrix(fit)
        total = f.sum(axis=0)
        assert np.abs(total).max() <= 1e-8 * np.abs(f).sum(axis=0).max()

    def test_matches_direct_formula(self, sim_panel):
        spec, p = sim_panel
        fit = estimate_vecm(p, VecmSpec(1), beta=spec.beta_true)
        f = score_matrix(fit)
        S = np.cumsum(f, axis=0)
        ref = np.trace(np.linalg.solve(f.T @ f, S.T @ S)) / f.shape[0]
        assert hansen_lc(fit).lc_statistic == pytest.approx(ref, rel=1e-9)

    def test_break_raises_statistic(self):
        wins = 0
        for s in range(200):
            beta, a, b = break_pair(s)
            la = hansen_lc(estimate_vecm(a, VecmSpec(1), beta=beta)).lc_statistic
            lb = hansen_lc(estimate_vecm(b, VecmSpec(1), beta=beta)).lc_statistic
            wins += lb > la
        assert wins >= 190

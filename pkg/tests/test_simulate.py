import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fxcomove.errors import ConfigError, SimulationError
from fxcomove.simulate import (
    AlphaSchedule,
    SimSpec,
    check_feasible,
    default_spec,
    levels_companion,
    simulate_vecm,
    spawn_seeds,
    true_zeta_path,
)
from fxcomove.unitroot import adf_gls_test

BETA2 = np.array([[1.0], [-1.0]])


def dense_zeta(a):
    return float(np.sqrt(np.linalg.eigvalsh(a @ a.T).max()))


class TestSpec:
    def test_explosive_rejected(self):
        with pytest.raises(SimulationError):
            SimSpec(2, 1, BETA2, [[0.5], [-0.5]])

    def test_wrong_unit_root_count(self):
        # alpha orthogonal to beta adds a second unit root
        with pytest.raises(SimulationError):
            SimSpec(2, 1, BETA2, [[0.0], [0.0]])

    def test_negative_noise(self):
        with pytest.raises(ConfigError):
            SimSpec(2, 1, BETA2, [[-0.2], [0.2]], noise_scale=-1.0)

    def test_companion_unit_roots(self):
        spec = default_spec()
        roots = np.abs(np.linalg.eigvals(levels_companion([[-0.15], [0.05], [0.05]], spec.beta_true, spec.gamma_true)))
        assert np.sum(np.isclose(roots, 1.0, atol=1e-9)) == 2
        check_feasible([[-0.15], [0.05], [0.05]], spec.beta_true, spec.gamma_true, 1)

    def test_step_schedule_checked_per_segment(self):
        with pytest.raises(SimulationError):
            SimSpec(2, 1, BETA2, AlphaSchedule.step([[-0.2], [0.2]], [[0.5], [-0.5]]))

    def test_schedule_validation(self):
        with pytest.raises(ConfigError):
            AlphaSchedule("step", ([[0.1]], [[0.2]]), (1.2,))


class TestSimulate:
    def test_bit_reproducible(self):
        a = simulate_vecm(default_spec(seed=42))
        b = simulate_vecm(default_spec(seed=42))
        assert a.values.tobytes() == b.values.tobytes()
        assert not np.array_equal(a.values, simulate_vecm(default_spec(seed=43)).values)

    def test_shape_and_dates(self):
        p = simulate_vecm(default_spec(T=123))
        assert p.values.shape == (123, 3)
        assert p.dates == tuple(range(123))

    def test_overflow_guard(self):
        spec = SimSpec(1, 0, np.zeros((1, 0)), np.zeros((1, 0)), noise_scale=1e11, T=5000, seed=1)
        with pytest.raises(SimulationError, match="exceed"):
            simulate_vecm(spec)

    def test_independent_random_walks(self):
        spec0 = SimSpec(2, 0, np.zeros((2, 0)), np.zeros((2, 0)), T=300)
        kept = 0
        for s in range(200):
            p = simulate_vecm(spec0.replace(seed=s))
            kept += all(not adf_gls_test(p.values[:, j]).reject_at_1pct for j in range(2))
        # both series must survive, so the joint rate is roughly the square of the per-series rate
        assert kept / 200 >= 0.97**2

    def test_error_correction_term_stationary(self):
        spec = SimSpec(2, 1, BETA2, [[-0.2], [0.2]], T=500)
        hits = 0
        for s in range(200):
            p = simulate_vecm(spec.replace(seed=s))
            hits += adf_gls_test(p.values @ BETA2[:, 0]).reject_at_1pct
        assert hits >= 180

    def test_spawned_streams_depend_on_index_only(self):
        a = [np.random.Generator(np.random.PCG64(s)).standard_normal(3) for s in spawn_seeds(5, 4)]
        b = [np.random.Generator(np.random.PCG64(s)).standard_normal(3) for s in spawn_seeds(5, 8)[:4]]
        np.testing.assert_array_equal(a, b)


class TestTrueZeta:
    def test_constant(self):
        a = AlphaSchedule.constant([[0.3], [0.4]])
        assert all(np.linalg.norm(a.at(t, 20), 2) == pytest.approx(0.5, abs=1e-15) for t in range(20))

    def test_constant_spec_path(self):
        spec = SimSpec(2, 1, BETA2, [[-0.24], [0.32]], T=30)
        np.testing.assert_allclose(true_zeta_path(spec), 0.4, atol=1e-15)

    def test_step(self):
        spec = SimSpec(2, 1, BETA2, AlphaSchedule.step([[-0.1], [0.0]], [[-0.5], [0.0]]), T=100)
        z = true_zeta_path(spec)
        np.testing.assert_allclose(z[:50], 0.1, atol=1e-15)
        np.testing.assert_allclose(z[50:], 0.5, atol=1e-15)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_matches_dense_eigensolver(self, seed):
        g = np.random.default_rng(seed)
        beta = np.vstack([np.eye(2), g.uniform(-0.5, 0.5, (1, 2))])
        a0 = -0.1 * beta + 0.02 * g.standard_normal((3, 2))
        a1 = -0.3 * beta + 0.02 * g.standard_normal((3, 2))
        try:
            spec = SimSpec(3, 2, beta, AlphaSchedule("linear", (a0, a1)), T=40)
        except SimulationError:
            return
        z = true_zeta_path(spec)
        for t in range(40):
            assert abs(z[t] - dense_zeta(spec.alpha_path_true.at(t, 40))) <= 1e-12

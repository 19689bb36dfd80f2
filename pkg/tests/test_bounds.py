import numpy as np
import pytest
from numpy.testing import assert_allclose

from qfilqu import (
    InitialCondition,
    ModelParams,
    ScanConfig,
    bell_init,
    delta_surface,
    evaluate_sample,
    extremize_deltas,
    monte_carlo_scan,
    precision_bound,
)
from qfilqu.bounds import BoundSample, BoundViolationError, delta_grid, guarantees_lqu_below_qfi


def sample_with(lqu, qfi=1.0, J=0.0):
    d = qfi - lqu
    return BoundSample(ModelParams(1.0, 0.1, J), bell_init(), 1.0, qfi, lqu, d, 2 * lqu - qfi)


class TestEvaluateSample:
    def test_bell_initial(self):
        s = evaluate_sample(ModelParams(), bell_init(), 0.0)
        assert_allclose([s.qfi, s.lqu, s.delta1, s.delta2], [1, 1, 0, 1], atol=1e-15)

    def test_decoupled_chain(self, draws):
        for params, init, t in draws[:300]:
            p = ModelParams(1.0, params.lam, 0.0)
            if abs(propagate_x(p, t)) ** 2 <= 1e-14:
                continue
            s = evaluate_sample(p, init, t)
            assert s.delta1 >= -1e-12 and s.delta2 >= -1e-12

    def test_bell_violation_witness(self):
        p = ModelParams(1.0, 0.15, 1.5)
        worst = min(
            evaluate_sample(p, bell_init(th), t).delta2
            for t in np.linspace(0.1, 20, 200)
            for th in (0.0, np.pi / 2)
        )
        assert worst < -1e-9


def propagate_x(params, t):
    from qfilqu import compute_x

    return compute_x(params, t)


class TestDeltaSurface:
    def test_no_excitation(self):
        pt = delta_surface(0.5, 0.0)
        assert pt.raw_delta1 == -1
        assert pt.delta1 == 0
        assert pt.branch == "U2"

    def test_interior(self):
        m, n = 0.625, 0.8
        pt = delta_surface(m, n)
        assert pt.branch == "U1"
        assert_allclose(pt.delta1, 0.25, atol=1e-15)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            delta_surface(1.2, 0.5)

    def test_grid_extremes(self):
        ext = extremize_deltas(2001)
        assert abs(ext["max_delta1"] - 0.25) <= 1e-4
        assert_allclose(ext["argmax_delta1"], [0.625, 0.8], atol=1e-3)
        assert ext["min_delta2_all"] >= -1e-12

    def test_stationary_curve_minimum(self):
        # along each n the minimum of raw delta2 over m sits at m* = (s + n)/(2n), s = sqrt(n(1-n))
        for n in (0.55, 0.7, 0.85, 0.95):
            s = np.sqrt(n * (1 - n))
            m_star = (s + n) / (2 * n)
            pt = delta_surface(m_star, n)
            assert_allclose(pt.raw_delta2, (np.sqrt(1 - n) - np.sqrt(n)) ** 2, atol=1e-14)
            ms = np.linspace(0, 1, 2001)
            assert min(delta_surface(m, n).raw_delta2 for m in ms) >= pt.raw_delta2 - 1e-12

    def test_grid_shapes(self):
        m, n, d1, d2, active = delta_grid(5)
        assert m.shape == n.shape == d1.shape == d2.shape == active.shape == (5, 5)


class TestScan:
    def test_decoupled_ranges(self):
        samples = monte_carlo_scan(ScanConfig(10_000, seed=0, constraint="j_zero"))
        d1 = np.array([s.delta1 for s in samples])
        d2 = np.array([s.delta2 for s in samples])
        assert d1.min() >= -1e-12 and d1.max() <= 0.25 + 1e-9
        assert d2.min() >= -1e-12 and d2.max() <= 1 + 1e-9

    def test_bell_lower_bound_and_violation(self):
        samples = monte_carlo_scan(ScanConfig(2000, seed=1, constraint="bell_init"))
        assert min(s.delta1 for s in samples) >= -1e-12
        assert any(s.qfi > 2 * s.lqu + 1e-9 for s in samples)

    def test_deterministic(self):
        cfg = ScanConfig(1, seed=42, constraint="unconstrained")
        assert monte_carlo_scan(cfg) == monte_carlo_scan(cfg)

    def test_prefix(self):
        short = monte_carlo_scan(ScanConfig(50, seed=7, constraint="unconstrained"))
        long = monte_carlo_scan(ScanConfig(200, seed=7, constraint="unconstrained"))
        assert short == long[:50]

    def test_seeds_differ(self):
        a = monte_carlo_scan(ScanConfig(5, seed=1))
        b = monte_carlo_scan(ScanConfig(5, seed=2))
        assert a != b

    def test_custom_range(self):
        samples = monte_carlo_scan(ScanConfig(100, constraint="unconstrained", ranges={"J": (1.0, 1.0)}))
        assert all(s.params.J == 1.0 for s in samples)

    def test_degenerate_samples_flagged(self):
        samples = monte_carlo_scan(ScanConfig(2000, seed=0, ranges={"lam": (1.9, 2.0), "t": (19.0, 20.0)}))
        flagged = [s for s in samples if s.degenerate]
        assert flagged
        assert all(s.lqu == 0 and s.delta2 >= -1e-12 for s in flagged)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(n_samples=0), dict(seed=-1), dict(constraint="x"), dict(ranges={"q": (0, 1)}), dict(ranges={"t": (2, 1)})],
    )
    def test_config_validation(self, kwargs):
        with pytest.raises(ValueError):
            ScanConfig(**kwargs)


class TestPrecisionBound:
    def test_bell_initial(self):
        assert_allclose(precision_bound(evaluate_sample(ModelParams(), bell_init(), 0.0)), 1.0, rtol=1e-15)

    def test_arithmetic(self):
        assert_allclose(precision_bound(sample_with(0.64)), 1.25, rtol=1e-15)

    def test_decoupled_samples(self):
        for s in monte_carlo_scan(ScanConfig(500, seed=3)):
            if s.lqu > 0:
                # U carries ~1e-16 absolute error, so compare U <= F rather than the inverse roots
                precision_bound(s)
                assert s.qfi >= s.lqu - 1e-12
                # on the U2 branch F = U exactly, so the inverse roots only agree to round-off
                if s.lqu > 1e-6:
                    assert 1 / np.sqrt(s.qfi) <= precision_bound(s) * (1 + 1e-9)
                if s.lqu > 0.1:
                    assert 1 / np.sqrt(s.qfi) <= precision_bound(s) + 1e-12

    def test_vacuous(self):
        with pytest.raises(ValueError):
            precision_bound(sample_with(0.0))

    def test_guaranteed_class_violation(self):
        with pytest.raises(BoundViolationError):
            precision_bound(sample_with(0.9, qfi=0.5))

    def test_unguaranteed_class(self):
        s = BoundSample(ModelParams(1.0, 0.1, 1.0), InitialCondition.from_a0(0.3), 1.0, 0.2, 0.3, -0.1, 0.4)
        assert not guarantees_lqu_below_qfi(s)
        assert_allclose(precision_bound(s), 1 / np.sqrt(0.3))

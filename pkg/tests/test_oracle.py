import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad, trapezoid

from qfilqu import (
    InitialCondition,
    ModelParams,
    bell_init,
    compare_oracles,
    compute_x,
    discretize_bath,
    discretized_bath_evolve,
    lorentzian_kernel,
    propagate,
    pseudomode_evolve,
)
from qfilqu.oracle import BathDiscretization, lorentzian_density

REF = ModelParams(1.0, 0.15, 1.5)


def kernel_quadrature(params, s, half_width=np.inf):
    """int I(w) exp(-i w s) dw; I is even so only the cosine part survives."""
    if np.isinf(half_width):
        if s == 0:
            value, _ = quad(lambda w: lorentzian_density(params, w), 0, np.inf)
        else:
            value, _ = quad(lambda w: lorentzian_density(params, w), 0, np.inf, weight="cos", wvar=s)
        return 2 * value
    value, _ = quad(lambda w: lorentzian_density(params, w) * np.cos(w * s), -half_width, half_width, limit=500, points=[0.0])
    return value


def exact_amplitudes(params, init, times):
    states = [propagate(params, init, t) for t in times]
    return np.array([s.a for s in states]), np.array([s.b for s in states])


class TestKernel:
    @pytest.mark.parametrize("s", [0.0, 0.5, 1 / 0.1, 30.0])
    def test_matches_full_line_quadrature(self, s):
        p = ModelParams(1.0, 0.1, 0.0)
        assert_allclose(lorentzian_kernel(p, s), kernel_quadrature(p, s), rtol=1e-6)

    def test_values(self):
        p = ModelParams(1.0, 0.1, 0.0)
        assert lorentzian_kernel(p, 0.0) == 0.05
        assert_allclose(lorentzian_kernel(p, 10.0), 0.05 * np.exp(-1), rtol=1e-15)
        assert lorentzian_kernel(p, 1e4) < 1e-300

    def test_finite_window_fraction(self):
        # a window of +/- 50 lam captures (2/pi) arctan(50) of the spectral weight
        p = ModelParams(1.0, 0.1, 0.0)
        windowed = kernel_quadrature(p, 0.0, 50 * p.lam)
        assert_allclose(windowed, 2 / np.pi * np.arctan(50) * lorentzian_kernel(p, 0.0), rtol=1e-10)

    def test_rejects_negative_lag(self):
        with pytest.raises(ValueError):
            lorentzian_kernel(REF, -1.0)


class TestPseudomode:
    def test_decoupled(self):
        p = ModelParams(1.0, 0.1, 0.0)
        traj = pseudomode_evolve(p, InitialCondition(1.0, 0.0), 5.0, 1e-3)
        assert_allclose(traj.a[-1], compute_x(p, 5.0), atol=1e-6)
        assert_allclose(traj.t[-1], 5.0)

    def test_bell_trajectory(self):
        init = bell_init()
        traj = pseudomode_evolve(REF, init, 20.0, 1e-3, t_eval=np.linspace(0, 20, 401))
        a, b = exact_amplitudes(REF, init, traj.t)
        assert max(np.abs(traj.a - a).max(), np.abs(traj.b - b).max()) < 1e-6

    def test_zero_duration(self):
        init = InitialCondition(0.6, 0.8, 0.4)
        traj = pseudomode_evolve(REF, init, 0.0, 1e-3)
        assert len(traj.t) == 1
        assert traj.a[0] == init.phased_a0 and traj.b[0] == init.b0
        assert traj.z_a[0] == 0 and traj.z_b[0] == 0

    @pytest.mark.parametrize("dt", [0.0, -1e-3, np.nan])
    def test_rejects_bad_step(self, dt):
        with pytest.raises(ValueError):
            pseudomode_evolve(REF, bell_init(), 1.0, dt)

    def test_blowup_detected(self):
        # far outside the RK4 stability region the state overflows
        with np.errstate(all="ignore"), pytest.raises(FloatingPointError):
            pseudomode_evolve(ModelParams(1.0, 1e3, 0.0), bell_init(), 200.0, 1.0)

    def test_fourth_order(self):
        init = bell_init()
        times = np.linspace(0, 10, 11)
        a, _ = exact_amplitudes(REF, init, times)
        errors = [np.abs(pseudomode_evolve(REF, init, 10.0, dt, t_eval=times).a - a).max() for dt in (0.2, 0.1, 0.05)]
        for coarse, fine in zip(errors, errors[1:]):
            assert 12 < coarse / fine < 20

    def test_memory_integral(self):
        init = bell_init(0.3)
        traj = pseudomode_evolve(REF, init, 4.0, 1e-4)
        t = traj.t[-1]
        direct = trapezoid(lorentzian_kernel(REF, t - traj.t) * traj.a, traj.t)
        assert abs(direct - traj.z_a[-1]) < 1e-8


class TestDiscretizedBath:
    def test_spectral_weight(self):
        p = ModelParams(1.0, 0.15, 1.5)
        disc = discretize_bath(p)
        expected = p.gamma0 * p.lam / np.pi * np.arctan(40.0)
        assert_allclose(np.sum(disc.gs**2), expected, rtol=1e-3)
        assert disc.omegas.shape == disc.gs.shape == (4000,)
        assert_allclose(disc.window, (-6.0, 6.0))

    def test_matches_analytic(self):
        init = bell_init()
        disc = discretize_bath(REF, 4000, 40.0)
        times = np.linspace(0, 10, 51)
        traj = discretized_bath_evolve(REF, init, disc, 10.0, 1e-2, t_eval=times)
        a, b = exact_amplitudes(REF, init, times)
        assert max(np.abs(traj.a - a).max(), np.abs(traj.b - b).max()) < 5e-2

    def test_norm_conserved(self):
        disc = discretize_bath(REF, 1000, 40.0)
        traj = discretized_bath_evolve(REF, bell_init(), disc, 10.0, 1e-3, t_eval=np.linspace(0, 10, 21))
        assert np.abs(traj.norm - 1).max() < 1e-6
        assert_allclose(traj.final.norm, traj.norm[-1], rtol=1e-14)

    def test_uncoupled(self):
        init = InitialCondition(0.6, 0.8j, 0.9)
        n = 8
        disc = BathDiscretization(n, (-1.0, 1.0), np.linspace(-1, 1, n), np.zeros(n))
        times = np.linspace(0, 5, 11)
        traj = discretized_bath_evolve(REF, init, disc, 5.0, 1e-3, t_eval=times)
        J = REF.J
        a = np.cos(J * times) * init.phased_a0 - 1j * np.sin(J * times) * init.b0
        b = np.cos(J * times) * init.b0 - 1j * np.sin(J * times) * init.phased_a0
        assert_allclose(traj.a, a, atol=1e-10)
        assert_allclose(traj.b, b, atol=1e-10)
        assert_allclose(np.abs(traj.a) ** 2 + np.abs(traj.b) ** 2, 1.0, atol=1e-10)

    def test_converges_with_modes(self):
        # coarse grids, where mode spacing rather than the finite window limits accuracy
        init = bell_init()
        times = np.linspace(0, 10, 51)
        a, b = exact_amplitudes(REF, init, times)
        errors = []
        for n in (24, 48, 96, 192):
            traj = discretized_bath_evolve(REF, init, discretize_bath(REF, n, 40.0), 10.0, 1e-2, t_eval=times)
            errors.append(max(np.abs(traj.a - a).max(), np.abs(traj.b - b).max()))
        assert all(fine < coarse for coarse, fine in zip(errors, errors[1:]))

    def test_rejects_coarse_step(self):
        with pytest.raises(ValueError):
            discretized_bath_evolve(REF, bell_init(), discretize_bath(REF, 100), 1.0, 0.1)

    def test_recurrence_warning(self):
        disc = discretize_bath(REF, 20, 40.0)
        assert disc.recurrence_time < 12
        with pytest.warns(RuntimeWarning, match="recurrence"):
            discretized_bath_evolve(REF, bell_init(), disc, 12.0, 1e-2)

    def test_no_warning_inside_window(self):
        disc = discretize_bath(REF, 200, 40.0)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            discretized_bath_evolve(REF, bell_init(), disc, 1.0, 1e-2)


class TestCompareOracles:
    def test_initial_time_only(self):
        report = compare_oracles(REF, bell_init(), [0.0])
        for pair in report.errors.values():
            assert pair == {"max": 0.0, "rms": 0.0}

    def test_defaults(self):
        report = compare_oracles(REF, bell_init(), np.linspace(0, 10, 101), bath_dt=1e-2)
        assert report.max_error("analytic_vs_pseudomode") < 1e-6
        assert report.max_error("analytic_vs_bath") < 5e-2
        assert report.errors["analytic_vs_bath"]["rms"] <= report.max_error("analytic_vs_bath")

import numpy as np
import pytest

from oracles import airy_wavenumber
from wavecho.errors import InvalidSeaStateError, ResolutionError
from wavecho.flume.spectrum import (
    F_MAX,
    F_MIN,
    GRAVITY,
    discretize_spectrum,
    dispersion_wavenumber,
    frequency_grid,
    pm_spectrum,
)


class TestPmSpectrum:
    def test_tails_vanish(self):
        assert pm_spectrum(1.0, 10.0, 1e-6) < 1e-300
        assert pm_spectrum(1.0, 10.0, 1e3) < 1e-12

    def test_peak_at_inverse_tp(self):
        tp = 10.0
        f = np.linspace(0.01, 0.5, 20000)
        dens = pm_spectrum(1.0, tp, f)
        assert abs(f[np.argmax(dens)] - 1.0 / tp) < 2.5e-5

    def test_analytic_normalization(self):
        # integral over all f equals (Hs/4)^2
        hs, tp = 2.0, 12.0
        f = np.linspace(1e-4, 3.0, 400001)
        m0 = np.trapezoid(pm_spectrum(hs, tp, f), f)
        np.testing.assert_allclose(m0, (hs / 4.0) ** 2, rtol=1e-6)

    def test_invalid_sea_state(self):
        with pytest.raises(InvalidSeaStateError):
            pm_spectrum(0.0, 10.0, 0.1)
        with pytest.raises(InvalidSeaStateError):
            pm_spectrum(1.0, -3.0, 0.1)


class TestFrequencyGrid:
    def test_two_hour_run_bin_width(self):
        _, df = frequency_grid(7200.0)
        assert round(df, 6) == 0.000139
        np.testing.assert_allclose(df, 1.389e-4, atol=5e-8)

    def test_two_hour_run_bin_count(self):
        freqs, _ = frequency_grid(7200.0)
        assert freqs.size == 921

    def test_range_endpoints(self):
        freqs, df = frequency_grid(7200.0)
        assert freqs[0] == F_MIN == 1.0 / 30.0
        assert F_MAX == 1.0 / 6.21
        assert freqs[-2] <= F_MAX <= freqs[-1]
        assert freqs[-1] - F_MAX < df

    def test_cutoff_frequency_solves_kh_pi(self):
        # kh = pi at 30 m depth corresponds to ~1/6.21 Hz
        k = np.pi / 30.0
        omega = np.sqrt(GRAVITY * k * np.tanh(np.pi))
        f_cut = omega / (2.0 * np.pi)
        assert abs(f_cut - 1.0 / 6.21) < 5e-5


class TestDispersionWavenumber:
    @pytest.mark.parametrize("period", [6.21, 8.0, 10.0, 14.0, 20.0, 30.0])
    @pytest.mark.parametrize("depth", [5.0, 30.0])
    def test_matches_bisection_oracle(self, period, depth):
        omega = 2.0 * np.pi / period
        k = dispersion_wavenumber(omega, depth)
        np.testing.assert_allclose(k, airy_wavenumber(omega, depth), rtol=1e-9)

    def test_residual_below_tolerance(self):
        omega = 2.0 * np.pi / 9.0
        k = dispersion_wavenumber(omega, 30.0)
        assert abs(GRAVITY * k * np.tanh(k * 30.0) - omega ** 2) < 1e-10


class TestDiscretizeSpectrum:
    def test_two_hour_component_count(self):
        spec = discretize_spectrum(1.0, 10.0, 7200.0, seed=1)
        assert spec.n_components == 921
        np.testing.assert_allclose(spec.df, 1.0 / 7200.0)

    def test_discrete_m0_matches_hs_exactly(self):
        for hs, tp in [(0.5, 8.0), (2.0, 10.0), (6.5, 20.0)]:
            spec = discretize_spectrum(hs, tp, 3600.0, seed=2)
            m0 = np.sum(spec.amplitudes ** 2 / 2.0)
            np.testing.assert_allclose(4.0 * np.sqrt(m0), hs, rtol=1e-12)

    def test_wavenumbers_satisfy_dispersion(self):
        spec = discretize_spectrum(1.0, 10.0, 1800.0, seed=3)
        resid = GRAVITY * spec.wavenumbers * np.tanh(spec.wavenumbers * 30.0) - spec.omegas ** 2
        assert np.max(np.abs(resid)) < 1e-9

    def test_phases_shared_across_sea_states(self):
        a = discretize_spectrum(1.0, 10.0, 1800.0, seed=4)
        b = discretize_spectrum(2.0, 12.0, 1800.0, seed=4)
        np.testing.assert_array_equal(a.phases, b.phases)

    def test_phases_depend_on_seed(self):
        a = discretize_spectrum(1.0, 10.0, 1800.0, seed=4)
        b = discretize_spectrum(1.0, 10.0, 1800.0, seed=5)
        assert not np.array_equal(a.phases, b.phases)

    def test_short_duration_rejected(self):
        with pytest.raises(ResolutionError):
            discretize_spectrum(1.0, 10.0, 120.0, seed=1)

    def test_desk_scale_duration_allowed(self):
        spec = discretize_spectrum(1.0, 10.0, 600.0, seed=1)
        assert spec.n_components >= 50

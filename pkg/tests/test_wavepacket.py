"""Grids, Gaussian construction and spectral synthesis."""

import math

import numpy as np
import pytest

from kgbohm.wavepacket import (
    SimulationParams,
    conjugate_grids_from_axes,
    gaussian_spectral,
    make_conjugate_grids,
    position_norm,
    synthesize,
    to_momentum,
    to_position,
)

GAUSS_PEAK = 0.3989422804014327  # (2 pi)^(-1/2)


class TestConjugateGrids:
    def test_conjugacy_small_grid(self):
        grids = conjugate_grids_from_axes(8, (0.0, 8.0), hbar=1.0)
        assert grids.dx == pytest.approx(1.0)
        assert grids.dp == pytest.approx(2.0 * math.pi / 8.0)
        assert grids.dx * grids.dp * grids.n == pytest.approx(2.0 * math.pi, rel=1e-15)

    def test_conjugacy_default_grid(self, params3, grids3):
        assert grids3.dx == pytest.approx(0.125)
        assert grids3.dp == pytest.approx(0.04908738521234052)
        assert grids3.dx * grids3.dp * grids3.n == pytest.approx(
            2.0 * math.pi * params3.hbar, rel=1e-15
        )

    def test_p_grid_centered(self, grids3):
        assert grids3.p[grids3.n // 2] == 0.0
        assert np.allclose(grids3.p[1:][::-1][: grids3.n // 2], -grids3.p[1 : grids3.n // 2 + 1])

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError, match="power of two"):
            conjugate_grids_from_axes(100, (0.0, 10.0))
        with pytest.raises(ValueError, match="power of two"):
            SimulationParams(n_modes=100)

    def test_rejects_small_n_modes(self):
        with pytest.raises(ValueError, match=">= 64"):
            SimulationParams(n_modes=32)

    def test_rejects_short_span(self):
        params = SimulationParams.__new__(SimulationParams)
        # bypass __post_init__ to hand make_conjugate_grids an 11-sigma span
        object.__setattr__(params, "hbar", 1.0)
        object.__setattr__(params, "c", 1.0)
        object.__setattr__(params, "m", 1.0)
        object.__setattr__(params, "p0", 0.0)
        object.__setattr__(params, "x0", 0.0)
        object.__setattr__(params, "sigma", 1.0)
        object.__setattr__(params, "n_modes", 64)
        object.__setattr__(params, "x_span", (-5.5, 5.5))
        with pytest.raises(ValueError, match="12 sigma"):
            make_conjugate_grids(params)

    def test_params_rejects_span_missing_packet(self):
        with pytest.raises(ValueError, match="6 sigma"):
            SimulationParams(x0=10.0, x_span=(-8.0, 8.0))

    @pytest.mark.parametrize("field", ["hbar", "c", "m", "sigma"])
    def test_params_rejects_nonpositive_constants(self, field):
        with pytest.raises(ValueError, match="positive"):
            SimulationParams(**{field: 0.0})

    def test_weights_are_phase_space_measure(self, grids3):
        # w = dp/(2 pi hbar) = 1/(N dx); this is what makes Parseval exact
        assert np.allclose(grids3.weights, grids3.dp / (2.0 * math.pi * grids3.hbar), rtol=1e-14)

    def test_dispersion_table(self, grids3):
        e = grids3.dispersion.energies
        assert np.all(e >= grids3.dispersion.rest_energy)
        assert np.allclose(e, np.sqrt(grids3.p**2 + 1.0), rtol=1e-15)
        # even in p (the node at -p_max has no mirror partner)
        assert np.array_equal(e[1:], e[1:][::-1])


class TestGaussianSpectral:
    def test_real_and_even_for_centered_packet(self, g0, grids0):
        assert np.max(np.abs(g0.g.imag)) == 0.0
        sym = g0.g[1:][::-1]  # p -> -p (node at -p_max has no mirror)
        assert np.max(np.abs(sym - g0.g[1:])) < 1e-12

    def test_normalization(self, g3):
        assert abs(g3.norm - 1.0) < 1e-12

    @pytest.mark.parametrize("p0,sigma", [(0.0, 1.0), (3.0, 1.0), (-2.0, 0.5), (1.0, 2.0)])
    def test_normalization_across_params(self, p0, sigma):
        params = SimulationParams(p0=p0, sigma=sigma)
        grids = make_conjugate_grids(params)
        g = gaussian_spectral(params, grids)
        assert abs(g.norm - 1.0) < 1e-12

    def test_momentum_distribution_against_fft_oracle(self, params3, grids3, g3):
        # oracle: numerically Fourier transform the analytic position-space
        # Gaussian sampled on the grid, then compare amplitudes and moments
        x = grids3.x
        phi0 = (2.0 * math.pi * params3.sigma**2) ** (-0.25) * np.exp(
            -((x - params3.x0) ** 2) / (4.0 * params3.sigma**2)
            + 1j * params3.p0 * (x - params3.x0) / params3.hbar
        )
        g_fft = to_momentum(phi0, grids3)
        g_fft = g_fft / math.sqrt(float(np.sum(grids3.weights * np.abs(g_fft) ** 2)))
        # constructed amplitudes match the transform up to a global phase
        phase = g_fft[grids3.n // 2] / g3.g[grids3.n // 2]
        assert abs(abs(phase) - 1.0) < 1e-10
        assert np.max(np.abs(g_fft - phase * g3.g)) < 1e-10
        w2 = grids3.weights * np.abs(g_fft) ** 2
        mean = float(np.sum(w2 * grids3.p))
        std = math.sqrt(float(np.sum(w2 * (grids3.p - mean) ** 2)))
        assert mean == pytest.approx(3.0, abs=1e-9)
        assert std == pytest.approx(0.5, abs=1e-9)

    def test_peak_momentum_density(self, grids3, g3):
        peak_idx = int(np.argmax(np.abs(g3.g) ** 2))
        assert grids3.p[peak_idx] == pytest.approx(3.0, abs=grids3.dp)

    def test_aliasing_guard(self):
        # sigma_p = 10 needs coverage to |p| = 60; the default box only
        # reaches ~25
        params = SimulationParams(sigma=0.05, x_span=(-32.0, 32.0))
        grids = make_conjugate_grids(params)
        with pytest.raises(ValueError, match="aliasing"):
            gaussian_spectral(params, grids)


class TestSynthesize:
    def test_single_mode_is_plane_wave(self, grids3):
        from kgbohm.wavepacket import SpectralAmplitudes

        g = np.zeros(grids3.n, dtype=np.complex128)
        j = grids3.n // 2 + 40
        g[j] = 1.0 / math.sqrt(grids3.weights[j])
        amps = SpectralAmplitudes(g=g, grids=grids3)
        xs = np.array([-3.0, 0.0, 1.7, 25.0])
        for t in (0.0, 1.5):
            vals = synthesize(amps, xs, t)
            assert np.max(np.abs(np.abs(vals) - np.abs(vals[0]))) < 1e-12
        expected = grids3.weights[j] * g[j] * np.exp(
            -1j * (grids3.dispersion.energies[j] * 1.5 - grids3.p[j] * 0.7)
        )
        assert synthesize(amps, 0.7, 1.5) == pytest.approx(expected, abs=1e-12)

    def test_gaussian_peak_value(self, params3, g3):
        val = synthesize(g3, params3.x0, 0.0)
        assert abs(val) ** 2 == pytest.approx(GAUSS_PEAK, rel=1e-9)

    def test_time_derivative_against_finite_difference(self, g3, grids3, rng):
        xs = rng.uniform(-4.0, 8.0, size=8)
        t, dt = 1.0, 1e-4
        d_exact = synthesize(g3, xs, t, time_derivative_order=1)
        d_fd = (synthesize(g3, xs, t + dt) - synthesize(g3, xs, t - dt)) / (2.0 * dt)
        scale = np.max(np.abs(d_exact))
        assert np.max(np.abs(d_exact - d_fd)) / scale < 1e-6

    def test_rejects_negative_time_and_nonfinite_x(self, g3):
        with pytest.raises(ValueError):
            synthesize(g3, 0.0, -1.0)
        with pytest.raises(ValueError):
            synthesize(g3, np.inf, 0.0)


class TestInvariants:
    def test_conjugacy_fft_matches_pointwise(self, g3, grids3):
        phi_fft = to_position(g3.g, grids3)
        phi_pt = synthesize(g3, grids3.x, 0.0)
        err = np.max(np.abs(phi_fft - phi_pt)) / np.max(np.abs(phi_fft))
        assert err < 1e-10

    def test_parseval(self, g3, grids3):
        phi = to_position(g3.g, grids3)
        assert abs(position_norm(phi, grids3) - g3.norm) < 1e-10

    def test_parity_of_centered_packet(self, g0):
        xs = np.array([0.3, 1.1, 2.9, 5.5])
        for t in (0.0, 1.0, 3.0):
            plus = np.abs(synthesize(g0, xs, t))
            minus = np.abs(synthesize(g0, -xs, t))
            assert np.max(np.abs(plus - minus)) < 1e-10

    @pytest.mark.parametrize("t", [0.0, 0.7, 2.0])
    def test_norm_constant_in_time(self, g3, grids3, t):
        phi_t = to_position(g3.g, grids3, t=t)
        assert abs(position_norm(phi_t, grids3) - 1.0) < 1e-10

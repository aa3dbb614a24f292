"""
Tests for lib.dispersion: amplification factor, both phase backends,
group velocity and its finite-difference oracle, and the caustic scan.
"""
import math

import numpy as np
import pytest

from lib.dispersion import dispersion_relation
from lib.dispersion.caustics import (
    REFERENCE_ROOTS,
    CausticKind,
    CausticRay,
    caustic_ray,
    compare_with_reference,
    find_caustics,
)
from lib.dispersion.dispersion_relation import (
    amplification_factor,
    damping_rate,
    dispersion_profile,
    group_velocity,
    group_velocity_curvature,
    group_velocity_fd,
    group_velocity_slope,
    log_relation_phase,
    phase_frequency,
)
from lib.dispersion.grid import DispersionBackend, GridSpec, phi_to_k
from lib.errors import DegenerateAmplificationError, DomainError
from lib.scheme_synthesis.drp_scheme import synthesize_drp
from lib.wavepacket.fd_simulation import step_scheme

RNG = np.random.default_rng(0)

GENERAL = DispersionBackend.GENERAL_LOG
CLOSED = DispersionBackend.THREE_POINT_CLOSED_FORM
GAMMA1 = 2 / math.pi


class TestGridSpec:

    def test_tau(self):
        grid = GridSpec(c=2.0, h=0.01, sigma=0.9)
        np.testing.assert_allclose(grid.tau, 0.0045, rtol=1e-15)

    @pytest.mark.parametrize("kwargs", [
        dict(c=0.0, h=0.01, sigma=0.5),
        dict(c=1.0, h=0.0, sigma=0.5),
        dict(c=1.0, h=0.01, sigma=-1.0),
        dict(c=math.inf, h=0.01, sigma=0.5),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            GridSpec(**kwargs)

    def test_phi_to_k(self, grid09):
        np.testing.assert_allclose(phi_to_k(grid09, 0.950935), 95.0935, rtol=1e-12)
        assert phi_to_k(grid09, 0.0) == 0.0

    def test_backend_names(self):
        assert DispersionBackend.from_name("general") is GENERAL
        assert DispersionBackend.from_name("THREE_POINT_CLOSED_FORM") is CLOSED
        with pytest.raises(DomainError):
            DispersionBackend.from_name("spectral")


class TestAmplificationFactor:

    def test_zero_mode(self, three_point, grid05):
        assert amplification_factor(three_point, grid05, 0.0) == 1 + 0j

    def test_quarter_wave(self, three_point, grid05):
        np.testing.assert_allclose(amplification_factor(three_point, grid05, math.pi / 2), 1 - 1j * GAMMA1,
                                   rtol=1e-14)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_odd_even_mode(self, m, grid09):
        np.testing.assert_allclose(amplification_factor(synthesize_drp(m), grid09, math.pi), 1 + 0j, atol=1e-14)

    def test_one_step_multiplier(self, five_point, grid09):
        phi = 2 * math.pi * 5 / 64
        mode = np.exp(1j * phi * np.arange(64))
        stepped = step_scheme(mode, five_point, grid09)
        np.testing.assert_allclose(stepped, amplification_factor(five_point, grid09, phi) * mode, atol=1e-13)


class TestPhaseFrequency:

    def test_closed_form_values(self, three_point, grid09):
        assert phase_frequency(three_point, grid09, CLOSED, 0.0) == 0.0
        value = phase_frequency(three_point, grid09, CLOSED, math.pi / 2)
        np.testing.assert_allclose(value, math.atan(-(1 + 0.9 * GAMMA1)), rtol=1e-12)
        assert abs(value - (-1.0045)) < 1e-4

    def test_general_value(self, three_point, grid05):
        value = phase_frequency(three_point, grid05, GENERAL, math.pi / 4)
        np.testing.assert_allclose(value, math.atan(2 * 0.5 * GAMMA1 * math.sin(math.pi / 4)), rtol=1e-14)
        assert abs(value - 0.42299) < 1e-5

    def test_closed_form_needs_three_point(self, five_point, grid09):
        with pytest.raises(DomainError):
            phase_frequency(five_point, grid09, CLOSED, 0.3)
        with pytest.raises(DomainError):
            group_velocity(five_point, grid09, "threepoint", 0.3)

    @pytest.mark.parametrize("backend", [GENERAL, CLOSED])
    def test_parity(self, three_point, grid09, backend):
        phi = np.linspace(0, math.pi, 1001)
        np.testing.assert_allclose(phase_frequency(three_point, grid09, backend, -phi),
                                   -phase_frequency(three_point, grid09, backend, phi), atol=1e-12)
        np.testing.assert_allclose(group_velocity(three_point, grid09, backend, -phi),
                                   group_velocity(three_point, grid09, backend, phi), atol=1e-12)

    @pytest.mark.parametrize("m", [2, 3])
    def test_parity_wider(self, m, grid05):
        coeffs = synthesize_drp(m)
        phi = np.linspace(0, math.pi, 1001)
        np.testing.assert_allclose(phase_frequency(coeffs, grid05, GENERAL, -phi),
                                   -phase_frequency(coeffs, grid05, GENERAL, phi), atol=1e-12)
        np.testing.assert_allclose(group_velocity(coeffs, grid05, GENERAL, -phi),
                                   group_velocity(coeffs, grid05, GENERAL, phi), atol=1e-12)

    def test_log_relation_sign(self, five_point, grid05):
        phi = np.linspace(-math.pi, math.pi, 101)
        np.testing.assert_allclose(log_relation_phase(five_point, grid05, phi),
                                   -phase_frequency(five_point, grid05, GENERAL, phi), atol=1e-15)


class TestDampingRate:

    def test_zero_mode(self, three_point, grid09):
        assert damping_rate(three_point, grid09, 0.0) == 0.0

    @pytest.mark.parametrize("sigma, expected", [(0.5, 0.17012), (0.9, 0.41930)])
    def test_quarter_wave(self, three_point, sigma, expected):
        grid = GridSpec(c=1.0, h=0.01, sigma=sigma)
        value = damping_rate(three_point, grid, math.pi / 2)
        np.testing.assert_allclose(value, 0.5 * math.log(1 + (2 * sigma * GAMMA1) ** 2), rtol=1e-13)
        assert abs(value - expected) < 1e-5

    def test_nonnegative(self, five_point, grid09):
        eta = damping_rate(five_point, grid09, np.linspace(-math.pi, math.pi, 501))
        assert np.all(eta >= 0)

    def test_degenerate(self, three_point, grid05, monkeypatch):
        # Re G = 1 for every scheme, so |G| = 0 is only reachable by substitution
        monkeypatch.setattr(dispersion_relation, "amplification_factor", lambda coeffs, grid, phi: 0j)
        with pytest.raises(DegenerateAmplificationError):
            dispersion_relation.damping_rate(three_point, grid05, 0.3)


class TestGroupVelocity:

    @pytest.mark.parametrize("sigma", [0.1, 0.5, 0.9])
    def test_general_ends(self, three_point, sigma):
        grid = GridSpec(c=1.0, h=0.01, sigma=sigma)
        np.testing.assert_allclose(group_velocity(three_point, grid, GENERAL, 0.0), 4 / math.pi, rtol=1e-14)
        np.testing.assert_allclose(group_velocity(three_point, grid, GENERAL, math.pi), -4 / math.pi, rtol=1e-14)

    def test_fd_examples(self, three_point, grid09):
        np.testing.assert_allclose(group_velocity_fd(three_point, grid09, GENERAL, 0.3),
                                   group_velocity(three_point, grid09, GENERAL, 0.3), atol=1e-6)
        np.testing.assert_allclose(group_velocity_fd(three_point, grid09, CLOSED, 0.950935),
                                   group_velocity(three_point, grid09, CLOSED, 0.950935), atol=1e-6)
        np.testing.assert_allclose(group_velocity_fd(three_point, grid09, GENERAL, 0.0), 4 / math.pi, atol=1e-6)

    @pytest.mark.parametrize("m, backend", [(1, GENERAL), (1, CLOSED), (2, GENERAL), (3, GENERAL)])
    def test_fd_agrees_everywhere(self, grid09, m, backend):
        coeffs = synthesize_drp(m)
        phi = np.linspace(0.01, math.pi - 0.01, 2001)
        deviation = np.abs(group_velocity_fd(coeffs, grid09, backend, phi) - group_velocity(coeffs, grid09, backend, phi))
        assert deviation.max() < 1e-6

    @pytest.mark.parametrize("m, backend", [(1, GENERAL), (1, CLOSED), (3, GENERAL)])
    def test_slope_is_derivative(self, grid09, m, backend):
        coeffs = synthesize_drp(m)
        phi = np.linspace(0.05, math.pi - 0.05, 101)
        step = 1e-5
        fd = (group_velocity(coeffs, grid09, backend, phi + step)
              - group_velocity(coeffs, grid09, backend, phi - step)) / (2 * step)
        np.testing.assert_allclose(group_velocity_slope(coeffs, grid09, backend, phi), fd, atol=1e-7)

    def test_curvature_units(self, three_point):
        coarse = group_velocity_curvature(three_point, GridSpec(c=1.0, h=0.02, sigma=0.5), GENERAL, 0.0)
        fine = group_velocity_curvature(three_point, GridSpec(c=1.0, h=0.01, sigma=0.5), GENERAL, 0.0)
        np.testing.assert_allclose(coarse, 4 * fine, rtol=1e-12)
        # V/c = 2 g cos(phi) / (1 + 4 s^2 g^2 sin^2 phi), second derivative at 0 is -2 g (1 + 8 s^2 g^2)
        expected = 2 * GAMMA1 * (1 + 8 * 0.25 * GAMMA1 ** 2) * 0.01 ** 2
        np.testing.assert_allclose(fine, expected, rtol=1e-6)


class TestSteppedDispersion:

    def test_one_step_rotation(self):
        for _ in range(20):
            m = int(RNG.integers(1, 4))
            sigma = float(RNG.uniform(0.05, 1.0))
            phi = float(RNG.uniform(-math.pi, math.pi))
            coeffs = synthesize_drp(m)
            grid = GridSpec(c=1.0, h=0.01, sigma=sigma)
            i = np.arange(64)
            u = np.cos(phi * i) + 1j * np.sin(phi * i)
            ratio = (step_scheme(u, coeffs, grid) / u)[m:-m]
            np.testing.assert_allclose(-np.angle(ratio), phase_frequency(coeffs, grid, GENERAL, phi), atol=1e-10)
            np.testing.assert_allclose(np.log(np.abs(ratio)), damping_rate(coeffs, grid, phi), atol=1e-10)


class TestDispersionProfile:

    def test_profile(self, five_point, grid09):
        profile = dispersion_profile(five_point, grid09, "general", n=11)
        assert len(profile) == 11
        assert profile.phi[0] == -math.pi and profile.phi[-1] == math.pi
        sample = profile[5]
        assert abs(sample.phi) < 1e-15
        assert abs(sample.xi_tau) < 1e-15
        assert abs(sample.eta_tau) < 1e-15
        np.testing.assert_allclose(sample.vg_over_c, 2 * sum(k * g for k, g in enumerate(five_point.gamma, 1)),
                                   rtol=1e-12)

    def test_too_few_samples(self, five_point, grid09):
        with pytest.raises(DomainError):
            dispersion_profile(five_point, grid09, GENERAL, n=1)


class TestFindCaustics:

    def test_three_point_general(self, three_point, grid09):
        report = find_caustics(three_point, grid09, GENERAL)
        assert report.interior == ()
        assert [p.kind for p in report.stationary_points] == [CausticKind.BOUNDARY] * 2
        start, end = report.stationary_points
        assert start.phi_c == 0.0 and end.phi_c == math.pi
        np.testing.assert_allclose([start.U_c, end.U_c], [4 / math.pi, -4 / math.pi], rtol=1e-14)
        np.testing.assert_allclose(end.k_c, math.pi / 0.01, rtol=1e-14)

    def test_speed_scales_ray_slope(self, three_point):
        report = find_caustics(three_point, GridSpec(c=2.0, h=0.01, sigma=0.9), GENERAL)
        np.testing.assert_allclose(report.stationary_points[0].U_c, 8 / math.pi, rtol=1e-14)

    @pytest.mark.parametrize("m, sigma", [(2, 0.5), (3, 0.5), (3, 0.9), (4, 0.3)])
    def test_interior_points_are_stationary(self, m, sigma):
        coeffs = synthesize_drp(m)
        grid = GridSpec(c=1.0, h=0.01, sigma=sigma)
        report = find_caustics(coeffs, grid, GENERAL)
        assert report.stationary_points[0].phi_c == 0.0
        assert report.stationary_points[-1].phi_c == math.pi
        assert list(report.phis) == sorted(report.phis)
        step = 1e-5
        for point in report.interior:
            assert 0.0 < point.phi_c < math.pi
            slope = (group_velocity(coeffs, grid, GENERAL, point.phi_c + step)
                     - group_velocity(coeffs, grid, GENERAL, point.phi_c - step)) / (2 * step)
            assert abs(slope) < 1e-6
            assert point.kind in (CausticKind.MIN, CausticKind.MAX, CausticKind.INFLECTION_DEGENERATE)

    def test_deterministic(self, five_point, grid05):
        assert find_caustics(five_point, grid05, GENERAL) == find_caustics(five_point, grid05, GENERAL)

    def test_closed_form_comparison(self, three_point, grid09):
        report = find_caustics(three_point, grid09, CLOSED)
        assert report.interior == ()
        records = compare_with_reference(report)
        assert [r.reference_phi for r in records] == list(REFERENCE_ROOTS)
        assert [r.agree for r in records] == [True, False, False]
        assert records == compare_with_reference(find_caustics(three_point, grid09, CLOSED))

    def test_too_few_scan_points(self, three_point, grid09):
        with pytest.raises(DomainError):
            find_caustics(three_point, grid09, GENERAL, scan_points=2)


class TestCausticRay:

    def test_ray_from_report(self, three_point, grid09):
        report = find_caustics(three_point, grid09, GENERAL)
        ray = caustic_ray(report, 0.0)
        np.testing.assert_allclose(ray.x([0.0, 2.0]), [0.0, 8 / math.pi], rtol=1e-14)
        with pytest.raises(DomainError):
            caustic_ray(report, 1.0)

    def test_reference_slope(self):
        np.testing.assert_allclose(CausticRay(phi_c=0.0, U_c=-2.68381).x(10.0), -26.8381, rtol=1e-15)

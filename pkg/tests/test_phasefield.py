"""Diffuse perimeter energy, its gradient, and the sharp-interface measure."""

import numpy as np
import pytest

from topoblend import (PhaseFieldParams, SHARP_INTERFACE_CONSTANT, build_grid,
                       eval_P0, eval_P_gamma, grad_P_gamma,
                       optimal_interface_profile, vertical_interface_field)
from topoblend.elasticity import DensityField
from topoblend.verify import profile_energy_per_length


def field(values, grid):
    return DensityField(np.asarray(values, dtype=float), grid)


class TestEvalPGamma:
    def test_pure_phases_vanish(self):
        g = build_grid(10, 5, 2.0, 1.0)
        p = PhaseFieldParams(gamma=0.01, eta=1.0)
        assert eval_P_gamma(field(np.zeros(g.n_elements), g), p) == 0.0
        assert eval_P_gamma(field(np.ones(g.n_elements), g), p) == 0.0

    def test_constant_half_double_well_only(self):
        """phi = 1/2 on the 2x1 m domain at gamma = 0.01: (1/0.01)(1/16)(2) = 12.5."""
        g = build_grid(20, 10, 2.0, 1.0)
        p = PhaseFieldParams(gamma=0.01, eta=1.0)
        value = eval_P_gamma(field(np.full(g.n_elements, 0.5), g), p)
        assert value == pytest.approx(12.5, rel=1e-12)

    def test_profile_energy_matches_quadrature_oracle(self):
        """The discrete energy of the equipartition profile reproduces the 1D
        quadrature value (eta sqrt(2)/6 per meter of interface) within 2%."""
        gamma = 0.02
        g = build_grid(1000, 4, 2.0, 1.0)  # h = 0.002, 10 cells per gamma
        f = vertical_interface_field(g, 1.0, gamma)
        P = eval_P_gamma(f, PhaseFieldParams(gamma, eta=1.0))
        oracle = profile_energy_per_length(gamma) * g.ly
        assert P == pytest.approx(oracle, rel=0.02)
        assert oracle == pytest.approx(np.sqrt(2.0) / 6.0, rel=1e-6)

    def test_eta_scaling(self):
        g = build_grid(40, 20, 2.0, 1.0)
        rng = np.random.default_rng(2)
        f = field(rng.uniform(0, 1, g.n_elements), g)
        p1 = eval_P_gamma(f, PhaseFieldParams(0.05, eta=1.0))
        p3 = eval_P_gamma(f, PhaseFieldParams(0.05, eta=3.0))
        assert p3 == pytest.approx(3 * p1, rel=1e-14)

    def test_rejects_nonpositive_gamma(self):
        g = build_grid(2, 2, 1.0, 1.0)
        with pytest.raises(ValueError):
            eval_P_gamma(field(np.zeros(4), g), PhaseFieldParams(0.0))


class TestGradPGamma:
    def test_symmetric_well_point_is_critical(self):
        g = build_grid(8, 4, 2.0, 1.0)
        grad = grad_P_gamma(field(np.full(g.n_elements, 0.5), g),
                            PhaseFieldParams(0.02))
        np.testing.assert_array_equal(grad, np.zeros(g.n_elements))

    def test_pure_phase_is_critical(self):
        g = build_grid(8, 4, 2.0, 1.0)
        grad = grad_P_gamma(field(np.zeros(g.n_elements), g), PhaseFieldParams(0.02))
        np.testing.assert_array_equal(grad, np.zeros(g.n_elements))

    def test_matches_directional_finite_differences(self):
        g = build_grid(12, 6, 2.0, 1.0)
        p = PhaseFieldParams(gamma=0.05, eta=2.0)
        rng = np.random.default_rng(4)
        phi = rng.uniform(0.2, 0.8, g.n_elements)
        grad = grad_P_gamma(field(phi, g), p)
        h = 1e-6
        for _ in range(20):
            d = rng.standard_normal(g.n_elements)
            d /= np.abs(d).max() * 5  # keep phi +- h d inside [0,1]
            plus = eval_P_gamma(field(phi + h * d, g), p)
            minus = eval_P_gamma(field(phi - h * d, g), p)
            fd = (plus - minus) / (2 * h)
            assert grad @ d == pytest.approx(fd, rel=1e-6)


class TestEvalP0:
    def test_vertical_half_split(self):
        g = build_grid(20, 10, 2.0, 1.0)
        phi = (g.centroids()[:, 0] < 1.0).astype(float)
        value = eval_P0(field(phi, g), PhaseFieldParams(gamma=0.0, eta=1.0))
        assert value == pytest.approx(SHARP_INTERFACE_CONSTANT * 1.0, rel=1e-12)
        assert value == pytest.approx(0.4714, rel=1e-4)

    def test_interface_free_binary_is_zero(self):
        g = build_grid(6, 6, 1.0, 1.0)
        p = PhaseFieldParams(gamma=0.0)
        assert eval_P0(field(np.ones(g.n_elements), g), p) == 0.0
        assert eval_P0(field(np.zeros(g.n_elements), g), p) == 0.0

    def test_single_solid_element(self):
        g = build_grid(9, 9, 0.9, 0.9)  # h = 0.1 square cells
        phi = np.zeros(g.n_elements)
        phi[g.element_id(4, 4)] = 1.0
        value = eval_P0(field(phi, g), PhaseFieldParams(gamma=0.0, eta=2.0))
        assert value == pytest.approx(2.0 * SHARP_INTERFACE_CONSTANT * 4 * 0.1, rel=1e-12)

    def test_translation_invariance(self):
        g = build_grid(16, 16, 1.6, 1.6)
        p = PhaseFieldParams(gamma=0.0)

        def block(i0, j0):
            phi = np.zeros(g.n_elements)
            for i in range(i0, i0 + 3):
                for j in range(j0, j0 + 2):
                    phi[g.element_id(i, j)] = 1.0
            return eval_P0(field(phi, g), p)

        assert block(2, 3) == pytest.approx(block(7, 9), rel=1e-14)
        assert block(2, 3) == pytest.approx(block(10, 4), rel=1e-14)

    def test_rejects_gray_field(self):
        g = build_grid(4, 4, 1.0, 1.0)
        phi = np.zeros(g.n_elements)
        phi[0] = 0.4
        with pytest.raises(ValueError, match="binary"):
            eval_P0(field(phi, g), PhaseFieldParams(gamma=0.0))


class TestProfileUtilities:
    def test_profile_limits_and_midpoint(self):
        x = np.array([-1e3, 0.0, 1e3])
        p = optimal_interface_profile(x, 0.0, 0.05)
        np.testing.assert_allclose(p, [0.0, 0.5, 1.0], atol=1e-12)

    def test_profile_energies_converge_to_oracle_limit(self):
        """With the mesh resolving each width, discrete energies track the
        quadrature oracle for every gamma in the ladder."""
        for gamma in (0.08, 0.04, 0.02, 0.01):
            nx = int(round(2.0 / (gamma / 10.0)))
            g = build_grid(nx, 4, 2.0, 1.0)
            f = vertical_interface_field(g, 1.0, gamma)
            P = eval_P_gamma(f, PhaseFieldParams(gamma))
            assert P == pytest.approx(profile_energy_per_length(gamma) * g.ly,
                                      rel=0.01)

    def test_nonnegativity_random_fields(self):
        g = build_grid(15, 7, 2.0, 1.0)
        rng = np.random.default_rng(8)
        p = PhaseFieldParams(gamma=0.03)
        for _ in range(20):
            f = field(rng.uniform(0, 1, g.n_elements), g)
            assert eval_P_gamma(f, p) >= 0.0

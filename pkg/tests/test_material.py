"""Constitutive matrix and the power-law stiffness interpolation."""

import numpy as np
import pytest

from topoblend import MaterialModel, plane_stress_tensor


class TestPlaneStressTensor:
    def test_benchmark_entries(self):
        C = plane_stress_tensor(10e9, 0.25)
        assert C[0, 1] == pytest.approx(10e9 * 0.25 / (1 - 0.0625), rel=1e-12)
        assert C[0, 1] == pytest.approx(2.6667e9, rel=1e-4)
        assert C[0, 0] == pytest.approx(10e9 / (1 - 0.0625), rel=1e-12)
        assert C[2, 2] == pytest.approx(10e9 / (2 * 1.25), rel=1e-12)

    def test_zero_poisson_is_diagonal(self):
        E = 7.3e8
        np.testing.assert_allclose(plane_stress_tensor(E, 0.0),
                                   np.diag([E, E, E / 2]), rtol=1e-14)

    def test_positive_definite_on_random_admissible(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            E = 10 ** rng.uniform(6, 11)
            nu = rng.uniform(0.0, 0.499)
            eigs = np.linalg.eigvalsh(plane_stress_tensor(E, nu))
            assert eigs.min() > 0

    @pytest.mark.parametrize("E,nu", [(1.0, 0.5), (1.0, -0.1), (0.0, 0.3), (-2.0, 0.3)])
    def test_rejects_inadmissible(self, E, nu):
        with pytest.raises(ValueError):
            plane_stress_tensor(E, nu)


class TestStiffnessScale:
    mat = MaterialModel(E=10e9, nu=0.25, q=3.0, rho0=1e-3)

    def test_solid_phase(self):
        assert self.mat.scale(1.0) == pytest.approx(1.0, rel=1e-15)

    def test_void_phase(self):
        assert self.mat.scale(0.0) == pytest.approx(1e-3, rel=1e-15)

    def test_midpoint_values(self):
        # 1e-3 + 0.125 * 0.999 and 3 * 0.25 * 0.999, by hand
        assert self.mat.scale(0.5) == pytest.approx(0.125875, rel=1e-12)
        assert self.mat.d_scale(0.5) == pytest.approx(0.74925, rel=1e-12)

    def test_derivative_against_central_differences(self):
        rng = np.random.default_rng(3)
        h = 1e-5
        m = rng.uniform(0.01, 0.99, 100)
        fd = (self.mat.scale(m + h) - self.mat.scale(m - h)) / (2 * h)
        assert np.abs(self.mat.d_scale(m) - fd).max() <= 1e-6

    def test_strictly_increasing(self):
        m = np.linspace(0.0, 1.0, 101)
        s = self.mat.scale(m)
        assert np.all(np.diff(s) > 0)

    def test_bounds(self):
        m = np.linspace(0.0, 1.0, 101)
        s = self.mat.scale(m)
        assert s.min() >= self.mat.rho0 - 1e-15
        assert s.max() <= 1.0 + 1e-15

    def test_scalar_factorization_eigen_bounds(self):
        """C(m) = scale(m) C1 pins the eigenvalues between rho0 and 1 times C1's."""
        C1 = self.mat.solid_tensor()
        lo, hi = np.linalg.eigvalsh(C1)[[0, -1]]
        for m in (0.0, 0.3, 0.8, 1.0):
            eigs = np.linalg.eigvalsh(self.mat.scale(m) * C1)
            assert eigs.min() >= self.mat.rho0 * lo * (1 - 1e-12)
            assert eigs.max() <= hi * (1 + 1e-12)

    @pytest.mark.parametrize("kwargs", [dict(E=1.0, nu=0.25, q=0.5),
                                        dict(E=1.0, nu=0.25, rho0=0.0),
                                        dict(E=1.0, nu=0.25, rho0=1.0),
                                        dict(E=1.0, nu=0.6)])
    def test_rejects_inadmissible_model(self, kwargs):
        with pytest.raises(ValueError):
            MaterialModel(**kwargs)

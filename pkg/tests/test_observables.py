import numpy as np
import pytest

import magherm as mh
from magherm.hamiltonian import SpectralForm
from magherm.observables import record
from magherm.grid import derivative_values


class TestMomentum:
    def test_real_field_is_zero(self, grid64, packet64):
        assert abs(mh.momentum(packet64)) < 1e-12

    def test_plane_wave(self, grid64):
        kappa = grid64.kappa[6]
        vals = np.exp(1j * kappa * grid64.x)
        vals /= np.linalg.norm(vals) * np.sqrt(grid64.dx)
        u = mh.WaveField(vals, grid64)
        assert mh.momentum(u) == pytest.approx(2.0 * kappa, rel=1e-12)

    def test_modulated_gaussian(self, grid64):
        # u = g(x) e^{i kappa x} with real g: momentum is 2 kappa ||u||^2
        kappa = grid64.kappa[3]
        envelope = np.exp(-((grid64.x + 2.0) ** 2))
        u = mh.WaveField(envelope * np.exp(1j * kappa * grid64.x), grid64)
        expected = 2.0 * kappa * mh.l2_norm(u) ** 2
        assert mh.momentum(u) == pytest.approx(expected, rel=1e-10)

    def test_matrix_state_is_nan(self):
        u = mh.WaveField(np.ones(4, dtype=complex), None)
        assert np.isnan(mh.momentum(u))


class TestHamiltonianEnergy:
    def test_zero_field(self, grid64):
        model = SpectralForm(grid=grid64, v0=np.zeros(64), lam=10.0)
        u = mh.WaveField(np.zeros(64, dtype=complex), grid64)
        assert mh.hamiltonian_energy(u, model) == 0.0

    def test_plane_wave_kinetic_only(self, grid64):
        model = SpectralForm(grid=grid64, v0=np.zeros(64), lam=0.0)
        kappa = grid64.kappa[5]
        vals = np.exp(1j * kappa * grid64.x)
        vals /= np.linalg.norm(vals) * np.sqrt(grid64.dx)
        u = mh.WaveField(vals, grid64)
        assert mh.hamiltonian_energy(u, model) == pytest.approx(kappa**2, rel=1e-12)

    def test_gp_preset_against_direct_sums(self):
        # independent evaluation: |du/dx|^2 for the kinetic part, plain sums
        # for the potential and quartic parts
        p = mh.make_preset("gp-defocusing-driven", n=256)
        u, model, g = p.u0, p.model, p.model.grid
        t = 0.22
        ux = derivative_values(g, u.values)
        density = np.abs(u.values) ** 2
        oracle = (
            np.sum(np.abs(ux) ** 2) * g.dx
            + np.sum((model.v0 + model.external_values(t)) * density) * g.dx
            + 0.5 * model.lam * np.sum(density**2) * g.dx
        )
        got = mh.hamiltonian_energy(u, model, t)
        assert got == pytest.approx(oracle, rel=1e-10)

    def test_matrix_energy_eigenvector(self):
        l0 = np.diag([2.0, -1.0, 4.0]).astype(complex)
        u = np.array([0.0, 3.0, 0.0], dtype=complex)
        assert mh.matrix_energy(u, l0) == pytest.approx(-9.0, rel=1e-14)

    def test_matrix_energy_zero(self):
        assert mh.matrix_energy(np.zeros(3, dtype=complex), np.eye(3, dtype=complex)) == 0.0

    def test_matrix_energy_against_dense_oracle(self, rng):
        l0 = mh.make_random_hermitian(32, seed=9)
        u = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        oracle = float(np.real(np.sum(np.conj(u) * (l0 @ u))))
        assert mh.matrix_energy(u, l0) == pytest.approx(oracle, rel=1e-12)


class TestRecord:
    def test_spectral_record_fields(self):
        p = mh.make_preset("gp-defocusing-driven", n=64)
        rec = record(p.u0, p.model, 0.1)
        assert rec.t == 0.1
        assert rec.norm == pytest.approx(1.0, rel=1e-12)
        assert np.isfinite(rec.energy)
        # the static part excludes the drive
        static = mh.hamiltonian_energy(
            p.u0, SpectralForm(grid=p.model.grid, v0=p.model.v0, lam=0.0), 0.0
        )
        assert rec.energy_linear == pytest.approx(static, rel=1e-12)

    def test_matrix_record_uses_quadratic_form(self):
        p = mh.make_preset("matrix-static", seed=1)
        rec = record(p.u0, p.model, 0.0)
        assert rec.energy_linear == pytest.approx(
            mh.matrix_energy(p.u0.values, p.model.l0), rel=1e-13
        )
        assert np.isnan(rec.momentum)

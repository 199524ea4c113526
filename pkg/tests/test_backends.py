import numpy as np
import pytest
import scipy.linalg as la

import magherm as mh
from magherm.backends import (
    ExpBackend,
    LanczosConvergenceError,
    bm_values,
    central_exponential,
    chin_chen_values,
    strang_values,
)
from magherm.hamiltonian import SpectralForm
from conftest import dense_laplacian, loglog_slope


def random_state(n, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


class TestExpDense:
    def test_zero_matrix(self):
        v = random_state(8)
        assert np.allclose(mh.exp_dense(np.zeros((8, 8)), v), v)

    def test_diagonal(self):
        d = np.array([0.3 - 1j, -0.2 + 0.5j, 1.0])
        v = random_state(3, 1)
        assert np.allclose(mh.exp_dense(np.diag(d), v), np.exp(d) * v, rtol=1e-12)

    def test_skew_hermitian_unitarity(self):
        h = mh.make_random_hermitian(32, seed=2)
        v = random_state(32, 2)
        out = mh.exp_dense(-1j * h, v)
        assert np.linalg.norm(out) == pytest.approx(np.linalg.norm(v), rel=1e-12)

    def test_non_normal_fallback(self):
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        v = np.array([1.0, 1.0], dtype=complex)
        # exp of a nilpotent matrix: I + A
        assert np.allclose(mh.exp_dense(a, v), np.array([2.0, 1.0]), rtol=1e-12)

    def test_guard_rail(self):
        with pytest.raises(ValueError, match="256"):
            mh.exp_dense(np.zeros((300, 300)), np.zeros(300))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mh.exp_dense(np.zeros((4, 4)), np.zeros(5))


class TestExpLanczos:
    def test_eigenvector_converges_immediately(self):
        h = mh.make_random_hermitian(64, seed=4)
        evals, q = np.linalg.eigh(h)
        v = q[:, 10].astype(complex)
        out = mh.exp_lanczos(lambda x: -1j * (h @ x), v, tol=1e-10)
        assert np.linalg.norm(out - np.exp(-1j * evals[10]) * v) <= 1e-12

    def test_against_dense(self):
        h = mh.make_random_hermitian(128, seed=5)
        v = random_state(128, 5)
        exact = mh.exp_dense(-1j * h, v)
        out = mh.exp_lanczos(lambda x: -1j * (h @ x), v, tol=1e-8)
        assert np.linalg.norm(out - exact) <= 1e-8

    def test_tolerance_scaling(self):
        # tightening tol by 10x shrinks the error at least 5x; sampled per
        # decade over two decades and several right-hand sides, since a
        # single superlinear convergence curve is lumpy
        ratios = []
        for seed in (5, 6, 7):
            h = mh.make_random_hermitian(128, seed=seed)
            v = random_state(128, seed)
            exact = mh.exp_dense(-1j * h, v)
            errs = [
                np.linalg.norm(
                    mh.exp_lanczos(lambda x: -1j * (h @ x), v, tol=tol) - exact
                )
                for tol in (1e-4, 1e-6)
            ]
            ratios.append(np.sqrt(errs[0] / errs[1]))  # per-decade factor
        assert np.exp(np.mean(np.log(ratios))) >= 5.0

    def test_m_max_exhaustion(self):
        h = mh.make_random_hermitian(128, seed=7)
        v = random_state(128, 7)
        with pytest.raises(LanczosConvergenceError) as info:
            mh.exp_lanczos(lambda x: -1j * (h @ x), v, tol=1e-14, m_max=3)
        assert info.value.estimate > 0

    def test_zero_vector(self):
        out = mh.exp_lanczos(lambda x: x, np.zeros(5, dtype=complex), tol=1e-8)
        assert np.all(out == 0)

    def test_norm_preservation(self):
        h = mh.make_random_hermitian(96, seed=8)
        v = random_state(96, 8)
        out = mh.exp_lanczos(lambda x: -1j * (h @ x), v, tol=1e-10)
        assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-10)


@pytest.fixture(scope="module")
def frozen_setup():
    """A smooth frozen linear problem with its dense propagator."""
    g = mh.make_grid(-10.0, 10.0, 64)
    w = 2.0 * np.cos(np.pi * g.x / 10.0) + 0.5 * np.sin(2 * np.pi * g.x / 10.0)
    model = SpectralForm(grid=g, v0=w, lam=0.0)
    lap = dense_laplacian(g)
    u0 = mh.preset_initial_condition(g)
    propagator = lambda h: la.expm(-1j * h * (-lap + np.diag(w)))
    return g, w, model, u0, propagator


class TestStrang:
    def test_free_flow_exact(self, grid64, packet64):
        model = SpectralForm(grid=grid64, v0=np.zeros(64), lam=0.0)
        h = 0.3
        out = mh.strang_step(packet64, 0.0, h, model)
        exact = mh.exp_dense(1j * h * dense_laplacian(grid64), packet64.values)
        assert np.linalg.norm(out.values - exact) <= 1e-11

    def test_norm_preserved(self):
        p = mh.make_preset("gp-defocusing-driven", n=128)
        out = mh.strang_step(p.u0, 0.0, 0.05, p.model)
        assert mh.l2_norm(out) == pytest.approx(1.0, abs=1e-12)

    def test_second_order_frozen(self, frozen_setup):
        g, w, model, u0, propagator = frozen_setup
        hs = [0.2, 0.1, 0.05, 0.025]
        errs = []
        for h in hs:
            exact = propagator(h) @ u0.values
            got = strang_values(model, u0.values, 0.0, h, "linear-frozen", w)
            errs.append(np.linalg.norm(exact - got))
        assert loglog_slope(hs, errs) == pytest.approx(3.0, abs=0.3)  # local order


class TestBlanesMoan:
    def test_frozen_matches_dense(self, frozen_setup):
        g, w, model, u0, propagator = frozen_setup
        h = 0.01
        exact = propagator(h) @ u0.values
        got = bm_values(model, u0.values, 0.0, h, "linear-frozen", w)
        assert np.linalg.norm(exact - got) <= 1e-9

    def test_local_fifth_order_frozen(self, frozen_setup):
        g, w, model, u0, propagator = frozen_setup
        hs = [0.1, 0.05, 0.025, 0.0125]
        errs = []
        for h in hs:
            exact = propagator(h) @ u0.values
            got = bm_values(model, u0.values, 0.0, h, "linear-frozen", w)
            errs.append(np.linalg.norm(exact - got))
        assert loglog_slope(hs, errs) == pytest.approx(5.0, abs=0.3)

    def test_palindromic_reversibility(self):
        p = mh.make_preset("gp-defocusing", n=128)
        h = 0.02
        forward = mh.blanes_moan_step(p.u0, 0.0, h, p.model)
        back = mh.blanes_moan_step(forward, h, -h, p.model)
        assert np.linalg.norm(back.values - p.u0.values) * np.sqrt(
            p.u0.weight
        ) <= 1e-10

    def test_norm_preserved(self):
        p = mh.make_preset("gp-focusing", n=128)
        out = mh.blanes_moan_step(p.u0, 0.0, 0.05, p.model)
        assert mh.l2_norm(out) == pytest.approx(1.0, abs=1e-12)


class TestChinChen:
    def test_free_flow_exact(self, grid64, packet64):
        h = 0.3
        out = mh.chin_chen_step(packet64, h, np.zeros(64), grid64)
        exact = mh.exp_dense(1j * h * dense_laplacian(grid64), packet64.values)
        assert np.linalg.norm(out.values - exact) <= 1e-11

    def test_harmonic_oscillator_fourth_order(self):
        # 256 points keep the wrap kink of x**2 from polluting the tail
        g = mh.make_grid(-10.0, 10.0, 256)
        w = g.x**2
        lap = dense_laplacian(g)
        u0 = mh.preset_initial_condition(g)
        hs = [0.08, 0.04, 0.02, 0.01]
        errs = []
        for h in hs:
            exact = la.expm(-1j * h * (-lap + np.diag(w))) @ u0.values
            got = chin_chen_values(g, u0.values, h, w)
            errs.append(np.linalg.norm(exact - got))
        # local error of the single step: order five
        assert loglog_slope(hs, errs) == pytest.approx(5.0, abs=0.3)

    def test_norm_preserved(self, grid64, packet64):
        w = grid64.x**2
        out = mh.chin_chen_step(packet64, 0.05, w, grid64)
        assert mh.l2_norm(out) == pytest.approx(1.0, abs=1e-12)

    def test_gradient_identity_on_matrices(self):
        # the five-factor identity with the full matrix double bracket:
        # exp(x(A+B)) = e^{xB/6} e^{xA/2} e^{2xB/3 + x^3 [B,[A,B]]/72}
        #               e^{xA/2} e^{xB/6} + O(x^5)
        rng = np.random.default_rng(0)
        n = 16

        def herm():
            m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            return (m + m.conj().T) / 2

        a, b = herm(), herm()
        bracket = b @ (a @ b - b @ a) - (a @ b - b @ a) @ b
        v = random_state(n, 3)
        hs = [0.08, 0.04, 0.02, 0.01]
        errs = []
        for h in hs:
            x = -1j * h
            exact = la.expm(x * (a + b)) @ v
            mid = la.expm(2 * x / 3 * b + x**3 / 72 * bracket)
            got = (
                la.expm(x / 6 * b)
                @ (la.expm(x / 2 * a) @ (mid @ (la.expm(x / 2 * a) @ (la.expm(x / 6 * b) @ v))))
            )
            errs.append(np.linalg.norm(exact - got))
        assert loglog_slope(hs, errs) == pytest.approx(5.0, abs=0.3)

    def test_rejects_bad_potential_shape(self, grid64, packet64):
        with pytest.raises(ValueError, match="shape"):
            mh.chin_chen_step(packet64, 0.1, np.zeros(10), grid64)


class TestBackendSelector:
    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown backend"):
            ExpBackend("pade")

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError, match="tol"):
            ExpBackend("lanczos", tol=0.0)

    def test_rejects_bad_m_max(self):
        with pytest.raises(ValueError, match="m_max"):
            ExpBackend("lanczos", m_max=1)

    def test_central_exponential_unknown_kind(self, grid64):
        with pytest.raises(ValueError, match="splitting"):
            central_exponential(grid64, np.zeros(64, dtype=complex), 0.1, np.zeros(64), "dense")


class TestBackendEquivalence:
    """All splittings converge to the dense answer on a frozen problem."""

    @pytest.mark.parametrize(
        "kind,order", [("strang", 2), ("bm", 4), ("chinchen", 4)]
    )
    def test_global_order_frozen(self, frozen_setup, kind, order):
        g, w, model, u0, propagator = frozen_setup
        T = 0.5
        exact = propagator(T) @ u0.values
        errs, hs = [], []
        for n_steps in (10, 20, 40):
            h = T / n_steps
            v = u0.values
            for _ in range(n_steps):
                v = central_exponential(g, v, h, w, kind)
            errs.append(np.linalg.norm(v - exact))
            hs.append(h)
        assert loglog_slope(hs, errs) == pytest.approx(order, abs=0.3)

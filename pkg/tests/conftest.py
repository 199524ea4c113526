"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

import magherm as mh
from magherm.grid import laplacian_values
from magherm.hamiltonian import apply_values


def loglog_slope(h_values, errors) -> float:
    """Least-squares slope of log(err) against log(h)."""
    h_values = np.asarray(h_values, dtype=float)
    errors = np.asarray(errors, dtype=float)
    return float(np.polyfit(np.log(h_values), np.log(errors), 1)[0])


def fd_laplacian(values: np.ndarray, dx: float) -> np.ndarray:
    """Fourth-order centred finite-difference second derivative (periodic)."""
    vp1, vm1 = np.roll(values, -1), np.roll(values, 1)
    vp2, vm2 = np.roll(values, -2), np.roll(values, 2)
    return (-vp2 + 16 * vp1 - 30 * values + 16 * vm1 - vm2) / (12 * dx * dx)


def fd_derivative(values: np.ndarray, dx: float) -> np.ndarray:
    """Fourth-order centred finite-difference first derivative (periodic)."""
    vp1, vm1 = np.roll(values, -1), np.roll(values, 1)
    vp2, vm2 = np.roll(values, -2), np.roll(values, 2)
    return (8 * (vp1 - vm1) - (vp2 - vm2)) / (12 * dx)


def dense_hamiltonian(model, t: float, density: np.ndarray | None = None) -> np.ndarray:
    """Assemble H(u, t) as a dense matrix, column by column.

    ``density`` supplies the frozen |u|^2 samples for the cubic term (zero
    when omitted), so the assembled matrix is linear and comparable with
    operator applications.
    """
    if hasattr(model, "grid"):
        n = model.grid.n
    else:
        n = model.n
    out = np.empty((n, n), dtype=complex)
    unit = np.zeros(n, dtype=complex)
    for j in range(n):
        unit[j] = 1.0
        col = apply_values(model, unit, t)
        # remove the cubic self-interaction of the unit vector itself
        col[j] -= model.lam * 1.0
        out[:, j] = col
        unit[j] = 0.0
    if density is not None:
        out += model.lam * np.diag(density)
    return out


def dense_laplacian(grid) -> np.ndarray:
    out = np.empty((grid.n, grid.n), dtype=complex)
    unit = np.zeros(grid.n, dtype=complex)
    for j in range(grid.n):
        unit[j] = 1.0
        out[:, j] = laplacian_values(grid, unit)
        unit[j] = 0.0
    return out


def ivp_solution(model, u0_values: np.ndarray, t_span, rtol=1e-12, atol=1e-12):
    """High-order adaptive integration of the full nonlinear system."""
    from scipy.integrate import solve_ivp

    n = u0_values.shape[0]

    def rhs(t, y):
        u = y[:n] + 1j * y[n:]
        du = -1j * apply_values(model, u, t)
        return np.concatenate([du.real, du.imag])

    y0 = np.concatenate([u0_values.real, u0_values.imag])
    sol = solve_ivp(rhs, t_span, y0, method="DOP853", rtol=rtol, atol=atol)
    return sol.y[:n, -1] + 1j * sol.y[n:, -1]


@pytest.fixture(scope="session")
def grid64():
    return mh.make_grid(-10.0, 10.0, 64)


@pytest.fixture(scope="session")
def packet64(grid64):
    return mh.preset_initial_condition(grid64)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)

"""Conserved-quantity diagnostics: l2 norm, momentum, Hamiltonian energies."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import WaveField, derivative_values, l2_norm, laplacian_values
from .hamiltonian import HamiltonianModel, SpectralForm

__all__ = ["ObservableRecord", "momentum", "hamiltonian_energy", "matrix_energy", "record"]

_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class ObservableRecord:
    """Snapshot of the tracked functionals at one time.

    ``energy`` is the full model Hamiltonian (including the drive at time t);
    ``energy_linear`` is the static linear part <u, L0 u>, the quantity whose
    conservation the matrix-mode experiments monitor.  ``momentum`` is NaN
    for abstract (matrix-model) states, where no spatial derivative exists.
    """

    t: float
    norm: float
    momentum: float
    energy: float
    energy_linear: float


def momentum(u: WaveField) -> float:
    """Momentum functional i * integral(conj(u)_x u - conj(u) u_x) dx."""
    if u.grid is None:
        return float("nan")
    ux = derivative_values(u.grid, u.values)
    # i*(<u_x, u> - <u, u_x>) collapses to -2 Im <u_x, u>
    cross = np.vdot(ux, u.values) * u.grid.dx
    value = -2.0 * cross.imag
    residue = abs(2.0 * cross.real)
    if residue > _IMAG_TOL * max(1.0, abs(value)):
        raise FloatingPointError(f"momentum integrand left a real residue {residue:.3e}")
    return float(value)


def hamiltonian_energy(u: WaveField, model: HamiltonianModel, t: float = 0.0) -> float:
    """Hamiltonian energy <-Lap u, u> + (lam/2) <|u|^2 u, u> plus potential terms.

    Linear potentials (static and, when present, the drive at time t) enter
    as integral V |u|^2 dx; the matrix form uses the quadratic forms of L0
    and L1 instead.
    """
    parts = _energy_parts(u, model, t)
    return parts[0] + parts[1]


def matrix_energy(u: np.ndarray, l0: np.ndarray) -> float:
    """Real quadratic form <u, L0 u> with the imaginary residue asserted away."""
    value = complex(np.vdot(u, l0 @ u))
    if abs(value.imag) > _IMAG_TOL * max(1.0, abs(value.real)):
        raise FloatingPointError(f"<u, L0 u> has imaginary residue {value.imag:.3e}")
    return float(value.real)


def _energy_parts(
    u: WaveField, model: HamiltonianModel, t: float
) -> tuple[float, float]:
    """(static linear energy, drive-plus-quartic remainder) of the state."""
    if isinstance(model, SpectralForm):
        if not model.grid.compatible(u.grid):
            raise ValueError("field grid does not match the model grid")
        dx = model.grid.dx
        density = np.abs(u.values) ** 2
        kinetic = -np.vdot(laplacian_values(model.grid, u.values), u.values).real * dx
        linear = float(kinetic + np.sum(model.v0 * density) * dx)
        rest = 0.5 * model.lam * float(np.sum(density * density) * dx)
        ext = model.external_values(t)
        if ext is not None:
            rest += float(np.sum(ext * density) * dx)
        return linear, rest
    linear = matrix_energy(u.values, model.l0)
    rest = 0.5 * model.lam * float(np.sum(np.abs(u.values) ** 4))
    if model.l1 is not None:
        rest += model.coeff(t) * matrix_energy(u.values, model.l1)
    return linear, rest


def record(u: WaveField, model: HamiltonianModel, t: float) -> ObservableRecord:
    """All tracked functionals of the state at time t."""
    linear, rest = _energy_parts(u, model, t)
    return ObservableRecord(
        t=float(t),
        norm=l2_norm(u),
        momentum=momentum(u),
        energy=linear + rest,
        energy_linear=linear,
    )

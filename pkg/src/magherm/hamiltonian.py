"""Split Hamiltonian models for cubic NLS / Gross-Pitaevskii dynamics.

A model describes H(u, t) = L0 + L1(t) + lam*|u|^2 acting on a state, in one
of two forms:

* ``SpectralForm``: L0 = -Laplacian + V0(x) on a periodic grid, L1(t) the
  pointwise external field V_e(x, t);
* ``MatrixForm``: L0 and L1 dense Hermitian matrices with a scalar drive
  coefficient, L1(t) = coeff(t) * L1.

The cubic nonlinearity is the only one implemented; its pointwise time
derivative under the flow i du/dt = H u is what the Hermite quadrature
consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .grid import Grid, WaveField, laplacian_values

__all__ = [
    "ExternalField",
    "SpectralForm",
    "MatrixForm",
    "HamiltonianModel",
    "preset_static_potential",
    "preset_external_field",
    "preset_initial_condition",
    "nonlinear_potential",
    "apply_hamiltonian",
    "nonlinear_potential_rate",
    "make_random_hermitian",
]

_HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class ExternalField:
    """Real scalar field (x, t) -> value, with an optional analytic time derivative."""

    eval: Callable[[np.ndarray, float], np.ndarray]
    dt_eval: Callable[[np.ndarray, float], np.ndarray] | None = None


@dataclass(frozen=True, eq=False)
class SpectralForm:
    """Hamiltonian -Laplacian + V0(x) + V_e(x, t) + lam*|u|^2 on a periodic grid."""

    grid: Grid
    v0: np.ndarray
    lam: float
    external: ExternalField | None = None

    def __post_init__(self) -> None:
        v0 = np.asarray(self.v0, dtype=float)
        if v0.shape != (self.grid.n,):
            raise ValueError(f"v0 has shape {v0.shape}, expected ({self.grid.n},)")
        if not np.all(np.isfinite(v0)):
            raise ValueError("v0 contains non-finite entries")
        v0.setflags(write=False)
        object.__setattr__(self, "v0", v0)

    def external_values(self, t: float) -> np.ndarray | None:
        if self.external is None:
            return None
        return np.asarray(self.external.eval(self.grid.x, t), dtype=float)


def _check_hermitian(m: np.ndarray, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    scale = np.linalg.norm(m)
    if scale > 0 and np.linalg.norm(m - m.conj().T) > _HERMITIAN_TOL * scale:
        raise ValueError(f"{name} is not Hermitian to tolerance {_HERMITIAN_TOL:g}")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class MatrixForm:
    """Hamiltonian L0 + coeff(t)*L1 + lam*|u|^2 with dense Hermitian matrices."""

    l0: np.ndarray
    lam: float
    l1: np.ndarray | None = None
    coeff: Callable[[float], float] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "l0", _check_hermitian(self.l0, "l0"))
        if (self.l1 is None) != (self.coeff is None):
            raise ValueError("l1 and coeff must be supplied together")
        if self.l1 is not None:
            l1 = _check_hermitian(self.l1, "l1")
            if l1.shape != self.l0.shape:
                raise ValueError("l0 and l1 have different shapes")
            object.__setattr__(self, "l1", l1)

    @property
    def n(self) -> int:
        return self.l0.shape[0]


HamiltonianModel = Union[SpectralForm, MatrixForm]


def preset_static_potential(x):
    """Double-well quartic confinement x^4 - 10 x^2."""
    return x**4 - 10.0 * x**2


def preset_external_field(x, t):
    """Separable drive 5 sin(5 pi t) sin(pi x)."""
    return 5.0 * np.sin(5.0 * np.pi * t) * np.sin(np.pi * x)


def preset_initial_condition(grid: Grid) -> WaveField:
    """Normalised Gaussian packet centred at x0 = -2 with sigma^2 = 0.25."""
    x0, sigma2 = -2.0, 0.25
    values = np.exp(-((grid.x - x0) ** 2) / (2.0 * sigma2)).astype(np.complex128)
    values /= np.linalg.norm(values) * np.sqrt(grid.dx)
    return WaveField(values, grid)


def nonlinear_potential(u: WaveField, lam: float) -> np.ndarray:
    """Pointwise cubic potential lam*|u|^2."""
    return lam * np.abs(u.values) ** 2


def apply_values(model: HamiltonianModel, values: np.ndarray, t: float) -> np.ndarray:
    """H(u, t) applied to raw samples, nonlinearity evaluated on ``values``."""
    if isinstance(model, SpectralForm):
        potential = model.v0 + model.lam * np.abs(values) ** 2
        ext = model.external_values(t)
        if ext is not None:
            potential = potential + ext
        return -laplacian_values(model.grid, values) + potential * values
    out = model.l0 @ values
    if model.l1 is not None:
        out = out + model.coeff(t) * (model.l1 @ values)
    return out + (model.lam * np.abs(values) ** 2) * values


def apply_hamiltonian(model: HamiltonianModel, u: WaveField, t: float) -> WaveField:
    """Return H(u, t) u."""
    if isinstance(model, SpectralForm):
        if not model.grid.compatible(u.grid):
            raise ValueError("field grid does not match the model grid")
    else:
        if u.grid is not None:
            raise ValueError("matrix models act on abstract fields (grid=None)")
        if u.values.shape[0] != model.n:
            raise ValueError(
                f"field length {u.values.shape[0]} does not match matrix size {model.n}"
            )
    return WaveField(apply_values(model, u.values, t), u.grid)


def rate_values(model: HamiltonianModel, values: np.ndarray, t: float) -> np.ndarray:
    """Pointwise time derivative of lam*|u|^2 on raw samples.

    Chain rule for the flow i du/dt = H u: d|u|^2/dt = 2 Re(conj(u) du/dt)
    = 2 Im(conj(u) (H u)), a real array.
    """
    lam = model.lam
    if lam == 0.0:
        return np.zeros(values.shape[0])
    hu = apply_values(model, values, t)
    return 2.0 * lam * np.imag(np.conj(values) * hu)


def nonlinear_potential_rate(
    model: HamiltonianModel, u: WaveField, t: float
) -> np.ndarray:
    """Time derivative of the nonlinear potential along the flow at time t."""
    return rate_values(model, u.values, t)


def make_random_hermitian(n: int, seed: int) -> np.ndarray:
    """Seeded dense Hermitian matrix rescaled to spectral radius 10."""
    if n < 1:
        raise ValueError(f"matrix size must be positive, got n={n}")
    rng = np.random.default_rng(seed)
    a = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    h = (a + a.conj().T) / 2.0
    radius = float(np.max(np.abs(np.linalg.eigvalsh(h)))) if n > 1 else abs(h[0, 0])
    if radius > 0:
        h *= 10.0 / radius
    return h

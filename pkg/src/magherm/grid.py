"""Periodic Fourier discretisation: grids, complex fields, spectral operators.

Fields are sampled on a uniform grid over [a, b) and transforms use the FFT
ordering of ``scipy.fft``.  Conventions, pinned by the property tests:
forward transforms are unnormalised, inverse transforms divide by n, and
inner products carry the uniform weight dx (exact for trigonometric
polynomials below the Nyquist mode).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as _fft

__all__ = [
    "Grid",
    "WaveField",
    "make_grid",
    "apply_laplacian",
    "spectral_derivative",
    "inner_product",
    "l2_norm",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform periodic grid on [a, b) with angular wavenumbers in FFT order.

    ``kappa[m]`` is ``2*pi*m/(b - a)`` in the ordering produced by
    ``scipy.fft.fftfreq``; ``k2 = kappa**2`` and ``ik`` (the first-derivative
    multiplier, Nyquist mode zeroed) are precomputed once.
    """

    a: float
    b: float
    n: int
    dx: float
    x: np.ndarray
    kappa: np.ndarray
    k2: np.ndarray
    ik: np.ndarray

    def compatible(self, other: "Grid | None") -> bool:
        if other is None:
            return False
        return self is other or (
            self.a == other.a and self.b == other.b and self.n == other.n
        )


def make_grid(a: float, b: float, n: int) -> Grid:
    """Build the periodic grid on [a, b) with n points.

    Raises ValueError for n < 2 or b <= a.
    """
    if n < 2:
        raise ValueError(f"need at least 2 grid points, got n={n}")
    if not b > a:
        raise ValueError(f"need b > a, got a={a}, b={b}")
    dx = (b - a) / n
    x = a + dx * np.arange(n)
    kappa = 2.0 * np.pi * _fft.fftfreq(n, d=dx)
    ik = 1j * kappa
    if n % 2 == 0:
        # odd-derivative multiplier has no consistent sign at the Nyquist mode
        ik = ik.copy()
        ik[n // 2] = 0.0
    return Grid(
        a=float(a),
        b=float(b),
        n=int(n),
        dx=dx,
        x=_frozen(x),
        kappa=_frozen(kappa),
        k2=_frozen(kappa**2),
        ik=_frozen(ik),
    )


@dataclass(frozen=True, eq=False)
class WaveField:
    """Complex state vector, either on a Grid or on an abstract index set.

    ``grid is None`` marks the abstract (matrix-model) case, where inner
    products carry unit weight instead of dx.
    """

    values: np.ndarray
    grid: Grid | None = None

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.complex128)
        if v.ndim != 1:
            raise ValueError(f"field values must be 1-D, got shape {v.shape}")
        if self.grid is not None and v.shape[0] != self.grid.n:
            raise ValueError(
                f"field length {v.shape[0]} does not match grid.n={self.grid.n}"
            )
        if not np.all(np.isfinite(v.view(np.float64))):
            raise ValueError("field contains non-finite entries")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def weight(self) -> float:
        return self.grid.dx if self.grid is not None else 1.0


def _check_same_grid(u: WaveField, v: WaveField) -> None:
    if (u.grid is None) != (v.grid is None):
        raise ValueError("cannot combine a gridded field with an abstract one")
    if u.grid is not None and not u.grid.compatible(v.grid):
        raise ValueError("fields live on different grids")
    if u.values.shape != v.values.shape:
        raise ValueError("fields have different lengths")


def laplacian_values(grid: Grid, values: np.ndarray) -> np.ndarray:
    """Second spectral derivative of raw samples (no wrapping)."""
    return _fft.ifft(-grid.k2 * _fft.fft(values))


def derivative_values(grid: Grid, values: np.ndarray) -> np.ndarray:
    """First spectral derivative of raw samples (Nyquist mode dropped)."""
    return _fft.ifft(grid.ik * _fft.fft(values))


def apply_laplacian(u: WaveField) -> WaveField:
    """Return the spectral Laplacian of u (the second derivative, unsigned)."""
    if u.grid is None:
        raise ValueError("apply_laplacian needs a gridded field")
    return WaveField(laplacian_values(u.grid, u.values), u.grid)


def spectral_derivative(u: WaveField) -> WaveField:
    """Return the first spectral derivative of u."""
    if u.grid is None:
        raise ValueError("spectral_derivative needs a gridded field")
    return WaveField(derivative_values(u.grid, u.values), u.grid)


def inner_product(u: WaveField, v: WaveField) -> complex:
    """dx-weighted l2 inner product, conjugate-linear in the first argument."""
    _check_same_grid(u, v)
    return complex(np.vdot(u.values, v.values) * u.weight)


def l2_norm(u: WaveField) -> float:
    """dx-weighted l2 norm of the field."""
    return float(np.linalg.norm(u.values) * np.sqrt(u.weight))

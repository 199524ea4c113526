"""The six named experiment setups exposed to the CLI.

Four spectral presets share the double-well confinement, the separable
sinusoidal drive and the normalised Gaussian packet on the periodic grid
[-10, 10) with 1000 points; two matrix presets draw seeded dense Hermitian
operators of size 128 with a weak defocusing cubic term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import WaveField, make_grid
from .hamiltonian import (
    ExternalField,
    HamiltonianModel,
    MatrixForm,
    SpectralForm,
    make_random_hermitian,
    preset_external_field,
    preset_initial_condition,
    preset_static_potential,
)

__all__ = ["Preset", "PRESET_NAMES", "SPECTRAL_PRESETS", "MATRIX_PRESETS", "make_preset"]

SPECTRAL_PRESETS = (
    "gp-defocusing-driven",
    "gp-defocusing",
    "gp-focusing",
    "nls-defocusing",
)
MATRIX_PRESETS = ("matrix-driven", "matrix-static")
PRESET_NAMES = SPECTRAL_PRESETS + MATRIX_PRESETS

_DOMAIN = (-10.0, 10.0)
_DEFAULT_SPECTRAL_N = 1000
_DEFAULT_MATRIX_N = 128
# Keeps the cubic term weak enough that the static linear energy of the
# matrix examples stays flat at the plotted scale; the drive and the error
# measurements are unaffected by the overall amplitude.
_MATRIX_STATE_SCALE = 0.1


@dataclass(frozen=True)
class Preset:
    """A named model with its initial state."""

    name: str
    model: HamiltonianModel
    u0: WaveField

    @property
    def is_spectral(self) -> bool:
        return isinstance(self.model, SpectralForm)


def _spectral_preset(name: str, n: int) -> Preset:
    grid = make_grid(_DOMAIN[0], _DOMAIN[1], n)
    u0 = preset_initial_condition(grid)
    lam = {"gp-focusing": -10.0}.get(name, 10.0)
    if name == "nls-defocusing":
        v0 = np.zeros(n)
        external = None
    else:
        v0 = preset_static_potential(grid.x)
        external = (
            ExternalField(eval=preset_external_field)
            if name == "gp-defocusing-driven"
            else None
        )
    model = SpectralForm(grid=grid, v0=v0, lam=lam, external=external)
    return Preset(name=name, model=model, u0=u0)


def _matrix_preset(name: str, n: int, seed: int) -> Preset:
    l0 = make_random_hermitian(n, seed)
    if name == "matrix-driven":
        l1 = make_random_hermitian(n, seed + 1)
        coeff = lambda t: np.sin(5.0 * np.pi * t)  # noqa: E731
    else:
        l1, coeff = None, None
    rng = np.random.default_rng(seed + 2)
    raw = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    u0 = WaveField(_MATRIX_STATE_SCALE * raw / np.linalg.norm(raw), grid=None)
    model = MatrixForm(l0=l0, l1=l1, coeff=coeff, lam=1.0)
    return Preset(name=name, model=model, u0=u0)


def make_preset(name: str, n: int | None = None, seed: int = 0) -> Preset:
    """Build a named preset; ``n`` overrides the grid or matrix size."""
    if name in SPECTRAL_PRESETS:
        return _spectral_preset(name, n or _DEFAULT_SPECTRAL_N)
    if name in MATRIX_PRESETS:
        return _matrix_preset(name, n or _DEFAULT_MATRIX_N, seed)
    raise ValueError(
        f"unknown preset {name!r}; available presets: {', '.join(PRESET_NAMES)}"
    )

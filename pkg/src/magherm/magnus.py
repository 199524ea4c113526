"""Fourth-order Magnus exponent of the linearised step and its commutator-free form.

With L0 the static operator and (mu00, mu11) the accumulated line integrals
of the time-dependent potential, the exponent is

    Theta2 = -i h L0 - i mu00 + [L0, mu11].

When mu00 and mu11 are multiplication operators (spectral mode), conjugating
by the pointwise phase exp(sigma) with sigma = (i/h) mu11 removes the
commutator up to O(h^5):

    exp(Theta2) = exp(-sigma) o exp(-i h L0 - i mu00) o exp(sigma) + O(h^5),

leaving a central exponential of kinetic-plus-potential shape that any
splitting can handle.  The generator (i/h) mu11 is fixed by matching the
first BCH cross term -i h [L0, sigma-generator] to [L0, mu11].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, laplacian_values
from .hamiltonian import HamiltonianModel, SpectralForm
from .quadrature import MagnusTerms

__all__ = ["Theta2Operator", "SandwichFactors", "assemble_theta2", "eliminate_commutator"]

_DENSE_LIMIT = 256


@dataclass(frozen=True, eq=False)
class Theta2Operator:
    """Applicable snapshot of the Magnus exponent for one (step, iteration)."""

    model: HamiltonianModel
    terms: MagnusTerms
    h: float

    @property
    def n(self) -> int:
        if isinstance(self.model, SpectralForm):
            return self.model.grid.n
        return self.model.n

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Theta2 applied to raw samples."""
        if values.shape[0] != self.n:
            raise ValueError(
                f"vector length {values.shape[0]} does not match operator size {self.n}"
            )
        h, mu00, mu11 = self.h, self.terms.mu00, self.terms.mu11
        if isinstance(self.model, SpectralForm):
            grid = self.model.grid
            lap = laplacian_values(grid, values)
            commutator = laplacian_values(grid, mu11 * values) - mu11 * lap
            return (
                1j * h * lap
                - 1j * (h * self.model.v0 + mu00) * values
                - commutator
            )
        l0 = self.model.l0
        l0v = l0 @ values
        return -1j * (h * l0v + mu00 @ values) + l0 @ (mu11 @ values) - mu11 @ l0v

    def as_dense(self) -> np.ndarray:
        """Assemble the operator as a dense matrix (small sizes only)."""
        if self.n > _DENSE_LIMIT:
            raise ValueError(
                f"dense assembly limited to n <= {_DENSE_LIMIT}, got n={self.n}"
            )
        out = np.empty((self.n, self.n), dtype=np.complex128)
        unit = np.zeros(self.n, dtype=np.complex128)
        for j in range(self.n):
            unit[j] = 1.0
            out[:, j] = self.apply(unit)
            unit[j] = 0.0
        return out


@dataclass(frozen=True, eq=False)
class SandwichFactors:
    """Commutator-free factorisation of exp(Theta2) in spectral mode.

    ``sigma`` is the purely imaginary multiplication exponent (size O(h^2));
    ``core_potential`` is the real effective potential W = V0 + mu00/h of the
    central exponential exp(-i h (-Laplacian + W)).
    """

    sigma: np.ndarray
    core_potential: np.ndarray
    h: float
    grid: Grid

    def apply(self, values: np.ndarray, core) -> np.ndarray:
        """exp(-sigma) o core o exp(sigma) applied to raw samples.

        ``core`` evaluates the central exponential on raw samples.
        """
        return np.exp(-self.sigma) * core(np.exp(self.sigma) * values)


def assemble_theta2(
    model: HamiltonianModel, terms: MagnusTerms, h: float
) -> Theta2Operator:
    """Bundle the model and accumulated line integrals into an applicable exponent."""
    if h <= 0:
        raise ValueError(f"step size must be positive, got h={h}")
    n = model.grid.n if isinstance(model, SpectralForm) else model.n
    expected = (n,) if isinstance(model, SpectralForm) else (n, n)
    if np.shape(terms.mu00) != expected or np.shape(terms.mu11) != expected:
        raise ValueError(
            f"terms have shape {np.shape(terms.mu00)}/{np.shape(terms.mu11)}, "
            f"expected {expected}"
        )
    return Theta2Operator(model=model, terms=terms, h=h)


def eliminate_commutator(op: Theta2Operator) -> SandwichFactors:
    """Rewrite exp(Theta2) as phase-conjugated commutator-free exponentials.

    Only valid when the mu terms are multiplication operators, i.e. in
    spectral mode.
    """
    if not isinstance(op.model, SpectralForm):
        raise ValueError(
            "commutator elimination needs multiplication-operator mu terms "
            "(spectral mode); matrix mode exponentiates Theta2 directly"
        )
    sigma = (1j / op.h) * op.terms.mu11
    core_potential = op.model.v0 + op.terms.mu00 / op.h
    return SandwichFactors(
        sigma=sigma, core_potential=core_potential, h=op.h, grid=op.model.grid
    )

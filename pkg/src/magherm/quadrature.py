"""Bernoulli-weighted line integrals of a time-dependent potential over one step.

Two integrals of a potential path P(t) over [t_n, t_n + h] are needed:

    mu00 = integral of P(t_n + z) dz            over z in [0, h]
    mu11 = integral of (z - h/2) P(t_n + z) dz  over z in [0, h]

For potentials known only through endpoint values and time derivatives
(the nonlinear potential of an iterate) the integrals are evaluated by
integrating the cubic Hermite interpolant exactly; for fields known in
closed form a two-point Gauss rule is used instead.  Both routes carry an
O(h^5) error for smooth paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "EndpointData",
    "MagnusTerms",
    "hermite_mu00",
    "hermite_mu11",
    "gauss_mu",
    "gauss_terms",
    "combine_terms",
]

# Gauss-Legendre 2 nodes on [0, 1]
_GAUSS_OFFSET = np.sqrt(3.0) / 6.0


@dataclass(frozen=True)
class EndpointData:
    """Values and time derivatives of a potential path at both step endpoints."""

    p0: np.ndarray
    p1: np.ndarray
    d0: np.ndarray
    d1: np.ndarray
    h: float

    def __post_init__(self) -> None:
        if self.h <= 0:
            raise ValueError(f"step size must be positive, got h={self.h}")
        shapes = {np.shape(self.p0), np.shape(self.p1), np.shape(self.d0), np.shape(self.d1)}
        if len(shapes) != 1:
            raise ValueError(f"endpoint arrays have mismatched shapes: {shapes}")


@dataclass(frozen=True)
class MagnusTerms:
    """The accumulated pair of line integrals (mu00, mu11).

    Real arrays in spectral mode, Hermitian matrices in matrix mode.
    """

    mu00: np.ndarray
    mu11: np.ndarray


def hermite_mu00(e: EndpointData) -> np.ndarray:
    """Unweighted integral of the cubic Hermite interpolant of P over [0, h].

    Exact for polynomials of degree <= 3, O(h^5) otherwise.
    """
    h = e.h
    return (h / 2.0) * (e.p0 + e.p1) + (h * h / 12.0) * (e.d0 - e.d1)


def hermite_mu11(e: EndpointData) -> np.ndarray:
    """Integral of the cubic Hermite interpolant of P against (z - h/2).

    The h^2/10 leading coefficient is forced by exactness on linear P
    (integral (z - h/2) z dz = h^3/12 over [0, h]); the rule is exact for
    polynomials of degree <= 3.
    """
    h = e.h
    return (h * h / 10.0) * (e.p1 - e.p0) - (h**3 / 120.0) * (e.d0 + e.d1)


def gauss_mu(
    field: Callable[[float], np.ndarray | float],
    t_n: float,
    h: float,
    which: str,
) -> np.ndarray | float:
    """Two-point Gauss rule for mu00 or mu11 of a field known in closed form.

    ``field`` maps absolute time to the potential sample (array in spectral
    mode, scalar coefficient in matrix mode).  ``which`` selects ``"mu00"``
    or ``"mu11"``.
    """
    if h <= 0:
        raise ValueError(f"step size must be positive, got h={h}")
    z_minus = h * (0.5 - _GAUSS_OFFSET)
    z_plus = h * (0.5 + _GAUSS_OFFSET)
    f_minus = field(t_n + z_minus)
    f_plus = field(t_n + z_plus)
    if which == "mu00":
        return (h / 2.0) * (f_minus + f_plus)
    if which == "mu11":
        return (h / 2.0) * ((z_minus - h / 2.0) * f_minus + (z_plus - h / 2.0) * f_plus)
    raise ValueError(f"which must be 'mu00' or 'mu11', got {which!r}")


def gauss_terms(
    field: Callable[[float], np.ndarray | float], t_n: float, h: float
) -> MagnusTerms:
    """Both Gauss integrals from one pair of field evaluations."""
    if h <= 0:
        raise ValueError(f"step size must be positive, got h={h}")
    offset = h * _GAUSS_OFFSET
    f_minus = np.asarray(field(t_n + h / 2.0 - offset), dtype=float)
    f_plus = np.asarray(field(t_n + h / 2.0 + offset), dtype=float)
    mu00 = (h / 2.0) * (f_minus + f_plus)
    mu11 = (h / 2.0) * offset * (f_plus - f_minus)
    return MagnusTerms(mu00=mu00, mu11=mu11)


def combine_terms(nl: MagnusTerms, ext: MagnusTerms) -> MagnusTerms:
    """Componentwise sum of the nonlinear and external contributions."""
    if np.shape(nl.mu00) != np.shape(ext.mu00) or np.shape(nl.mu11) != np.shape(ext.mu11):
        raise ValueError("cannot combine terms of different shapes")
    return MagnusTerms(mu00=nl.mu00 + ext.mu00, mu11=nl.mu11 + ext.mu11)

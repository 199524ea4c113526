"""Iterated-linearisation Magnus-Hermite integrators for cubic NLS and GP equations.

The package solves i du/dt = H(u, t) u for the cubic nonlinear Schroedinger
and Gross-Pitaevskii equations by iterating linear Schroedinger solves whose
potential is frozen from the previous iterate.  Each linear solve uses a
fourth-order Magnus exponent built from Bernoulli-weighted line integrals
(Hermite endpoint rules for the nonlinear potential, Gauss for the known
drive) and an interchangeable exponential backend: dense, Lanczos, Strang,
Blanes-Moan or Chin-Chen.
"""

__version__ = "0.1.0"

from .backends import (
    ExpBackend,
    LanczosConvergenceError,
    blanes_moan_step,
    chin_chen_step,
    exp_dense,
    exp_lanczos,
    strang_step,
)
from .grid import (
    Grid,
    WaveField,
    apply_laplacian,
    inner_product,
    l2_norm,
    make_grid,
    spectral_derivative,
)
from .hamiltonian import (
    ExternalField,
    MatrixForm,
    SpectralForm,
    apply_hamiltonian,
    make_random_hermitian,
    nonlinear_potential,
    nonlinear_potential_rate,
    preset_external_field,
    preset_initial_condition,
    preset_static_potential,
)
from .magnus import SandwichFactors, Theta2Operator, assemble_theta2, eliminate_commutator
from .observables import ObservableRecord, hamiltonian_energy, matrix_energy, momentum
from .presets import PRESET_NAMES, Preset, make_preset
from .quadrature import (
    EndpointData,
    MagnusTerms,
    combine_terms,
    gauss_mu,
    hermite_mu00,
    hermite_mu11,
)
from .stepper import StepConfig, Trajectory, evolve, mh_step, reference_solution

__all__ = [
    "__version__",
    "Grid",
    "WaveField",
    "make_grid",
    "apply_laplacian",
    "spectral_derivative",
    "inner_product",
    "l2_norm",
    "ExternalField",
    "SpectralForm",
    "MatrixForm",
    "apply_hamiltonian",
    "nonlinear_potential",
    "nonlinear_potential_rate",
    "make_random_hermitian",
    "preset_static_potential",
    "preset_external_field",
    "preset_initial_condition",
    "EndpointData",
    "MagnusTerms",
    "hermite_mu00",
    "hermite_mu11",
    "gauss_mu",
    "combine_terms",
    "Theta2Operator",
    "SandwichFactors",
    "assemble_theta2",
    "eliminate_commutator",
    "ExpBackend",
    "LanczosConvergenceError",
    "exp_dense",
    "exp_lanczos",
    "strang_step",
    "blanes_moan_step",
    "chin_chen_step",
    "StepConfig",
    "Trajectory",
    "mh_step",
    "evolve",
    "reference_solution",
    "ObservableRecord",
    "momentum",
    "hamiltonian_energy",
    "matrix_energy",
    "Preset",
    "PRESET_NAMES",
    "make_preset",
]

"""Singlet S-state spectra and radial wavefunctions of the two-body Breit equation."""

from .core import (
    BreitError,
    ConvergenceError,
    DimensionlessContext,
    DomainError,
    MassMode,
    MassModeError,
    PhysicalSystem,
    QuantumState,
    binding_energy,
    build_context,
    frobenius_exponent,
    indicial_roots,
    kummer_m,
    kummer_polynomial,
    total_energy,
)
from .eigensolver import (
    BindingSeries,
    BracketError,
    DiracComparison,
    EnergyLevel,
    ToleranceError,
    binding_series,
    breit_dirac_comparison,
    dirac_conditions,
    dirac_ground_state,
    equal_mass_level,
    quantization_residual,
    solve_level,
)
from .radial import (
    FirstOrderCorrection,
    RadialGrid,
    ResidualStats,
    SeriesExpansion,
    StaleContextError,
    UnequalMassTerms,
    assemble_components,
    asymptotic_series,
    correction_closed_form_ground,
    correction_quadrature,
    leading_wavefunction,
    negative_pole_series,
    ode_residual,
    origin_series,
    reduced_ode_coefficients,
    residual_orders,
    schrodinger_context,
    singlet_ode_coefficients,
)

__version__ = "0.1.0"

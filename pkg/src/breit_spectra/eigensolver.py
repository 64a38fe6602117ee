"""Bound-state energies of the singlet S-wave and the Dirac comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .core import (
    BreitError,
    DimensionlessContext,
    DomainError,
    MassMode,
    MassModeError,
    PhysicalSystem,
    binding_energy,
    build_context,
    frobenius_exponent,
    total_energy,
)

DEFAULT_TOL = 1e-12
SCAN_POINTS = 64
MAX_ITER = 200


class BracketError(BreitError, RuntimeError):
    """No sign change of the quantization residual was found."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


class ToleranceError(BreitError, RuntimeError):
    """The root finder stopped before reaching the requested tolerance."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class EnergyLevel:
    """A solved bound state.

    Attributes:
        n: principal quantum number.
        q: momentum parameter at the eigenvalue.
        energy: total CM energy E.
        binding: m + M - E.
        n_bar: n + s.
        diagnostics: solver bookkeeping (bracket, iterations, extra roots).
    """

    n: int
    q: float
    energy: float
    binding: float
    n_bar: float
    diagnostics: dict = field(default_factory=dict, compare=False, repr=False)


@dataclass(frozen=True)
class BindingSeries:
    coefficients: list[float]
    expansion_parameter: float
    partial_sums: list[float]
    convention: str = "exact"


@dataclass(frozen=True)
class DiracComparison:
    s_dirac: float
    s_breit: float
    N_dirac: float
    N_breit: float
    delta_breit: float
    delta_dirac: float
    q_dirac: float
    q_breit: float


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"principal quantum number must be a positive integer, got {n}")


def equal_mass_level(system: PhysicalSystem, n: int) -> EnergyLevel:
    """Closed-form level of the equal-mass singlet S state.

    ``E_n = 2 m sqrt(1 - alpha^2 / ((2(n+s))^2 + alpha^2))``.
    """
    if not system.is_equal_mass:
        raise MassModeError("equal_mass_level requires mass_1 == mass_2")
    _check_n(n)
    m, alpha = system.mass_1, system.coupling
    n_bar = n + frobenius_exponent(alpha)
    root = math.sqrt(4.0 * n_bar * n_bar + alpha * alpha)
    q = alpha * m / root
    energy = 2.0 * m * (2.0 * n_bar) / root
    binding = 2.0 * m * alpha * alpha / (root * (root + 2.0 * n_bar))
    return EnergyLevel(n=n, q=q, energy=energy, binding=binding, n_bar=n_bar,
                       diagnostics={"method": "closed-form"})


def quantization_residual(ctx: DimensionlessContext, n: int) -> float:
    """``N_param - (n - 1)``; vanishes at the n-th eigenvalue."""
    _check_n(n)
    return ctx.N_param - (n - 1)


def _residual_at(system: PhysicalSystem, n: int, q: float) -> float:
    return quantization_residual(build_context(system, q, MassMode.UNEQUAL), n)


def solve_level(system: PhysicalSystem, n: int, tol: float = DEFAULT_TOL,
                max_iter: int = MAX_ITER) -> EnergyLevel:
    """Find the momentum ``q_n`` where the quantization residual vanishes.

    The residual is scanned on a logarithmic grid of ``SCAN_POINTS`` points
    spanning ``(0, min(m, M))``; the sign change closest to the
    nonrelativistic seed ``mu alpha / (n + s)`` is refined with Brent's
    method.  Works for any mass ratio, equal masses included.

    Raises:
        BracketError: if the scan finds no sign change.
        ToleranceError: if ``|residual| >= tol`` after refinement.
    """
    _check_n(n)
    if not tol >= 1e-14:
        raise DomainError(f"tol must be >= 1e-14, got {tol}")
    q_max = system.q_max
    n_bar = n + frobenius_exponent(system.coupling)
    seed = system.reduced_mass * system.coupling / n_bar

    grid = np.geomspace(1e-8 * q_max, (1 - 1e-8) * q_max, SCAN_POINTS)
    values = np.array([_residual_at(system, n, q) for q in grid])
    changes = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)[0]
    diagnostics: dict = {"seed": seed, "scan_points": SCAN_POINTS}
    if changes.size == 0:
        diagnostics["scan_min"] = float(values.min())
        diagnostics["scan_max"] = float(values.max())
        raise BracketError(f"no sign change of the residual for n={n}", diagnostics)
    mids = np.sqrt(grid[changes] * grid[changes + 1])
    order = np.argsort(np.abs(np.log(mids / seed)))
    chosen = changes[order[0]]
    lo, hi = float(grid[chosen]), float(grid[chosen + 1])
    diagnostics["bracket"] = (lo, hi)
    if changes.size > 1:
        diagnostics["other_brackets"] = [
            (float(grid[i]), float(grid[i + 1])) for i in changes[order[1:]]
        ]

    f = lambda q: _residual_at(system, n, q)  # noqa: E731
    if values[chosen] == 0:
        q, iterations = lo, 0
    elif values[chosen + 1] == 0:
        q, iterations = hi, 0
    else:
        q, info = brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                         maxiter=max_iter, full_output=True, disp=False)
        iterations = info.iterations
        diagnostics["converged"] = info.converged
    residual = f(q)
    diagnostics.update(iterations=iterations, residual=residual)
    if not abs(residual) < tol:
        raise ToleranceError(
            f"|residual|={abs(residual):.3e} >= tol={tol:.1e} for n={n}", diagnostics
        )
    return EnergyLevel(
        n=n,
        q=q,
        energy=total_energy(system, q),
        binding=binding_energy(system, q),
        n_bar=n_bar,
        diagnostics=diagnostics,
    )


def _series_coefficients(m: float, M: float, convention: str) -> list[float]:
    r = m * M / (m + M) ** 2
    e1 = 2.0 * m * M / (m + M)
    if convention == "exact":
        # re-expansion of the exact quantization condition in (alpha / 2 n_bar)^2
        e2 = -3.0 * e1 * (1.0 - 3.0 * r)
        e3 = 10.0 * e1 * (1.0 - 7.0 * r + 13.0 * r * r)
    elif convention == "printed":
        e2 = e1 * (1.0 - 3.0 * r)
        e3 = 2.0 * e1 * (1.0 - 5.0 * r + 5.0 * r * r)
    else:
        raise DomainError(f"unknown convention {convention!r}")
    return [e1, e2, e3]


def binding_series(system: PhysicalSystem, n: int, order: int = 3,
                   convention: str = "exact") -> BindingSeries:
    """Binding energy as a power series in ``(alpha / 2 n_bar)^2``.

    ``e_1 = 2 m M / (m + M)`` is the reduced-mass Coulomb term.  With
    ``convention="exact"`` the higher coefficients come from expanding the
    quantization condition itself, so the truncation error is
    ``O((alpha/2 n_bar)^(2 order + 2))``.  ``convention="printed"`` returns
    the historical coefficients ``e_2 = e_1 (1 - 3 mM/(m+M)^2)`` and
    ``e_3 = 2 e_1 (1 - 5 mM/(m+M)^2 + 5 (mM)^2/(m+M)^4)``, which for
    equal masses are the expansion in ``alpha^2 / (4 n_bar^2 + alpha^2)``
    instead.
    """
    _check_n(n)
    if order not in (1, 2, 3):
        raise DomainError(f"order must be 1, 2 or 3, got {order}")
    coefficients = _series_coefficients(system.mass_1, system.mass_2, convention)[:order]
    n_bar = n + frobenius_exponent(system.coupling)
    x = (system.coupling / (2.0 * n_bar)) ** 2
    partial, total = [], 0.0
    for j, e in enumerate(coefficients, start=1):
        total += e * x**j
        partial.append(total)
    return BindingSeries(coefficients=coefficients, expansion_parameter=x,
                         partial_sums=partial, convention=convention)


def dirac_frobenius_exponent(alpha: float) -> float:
    return -(alpha * alpha) / (1.0 + math.sqrt(1.0 - alpha * alpha))


def _check_dirac_alpha(alpha: float) -> None:
    if not (0 < alpha < 1):
        raise DomainError(f"Dirac ground state requires 0 < alpha < 1, got {alpha}")


def dirac_conditions(mass: float, alpha: float, q: float) -> tuple[float, float]:
    """The two ground-state conditions ``alpha E/q - 1 - s`` and ``1/2 + s y``."""
    _check_dirac_alpha(alpha)
    s = dirac_frobenius_exponent(alpha)
    energy = math.sqrt(mass * mass - q * q)
    y = (energy + mass) / (2.0 * alpha * q)
    return alpha * energy / q - 1.0 - s, 0.5 + s * y


def dirac_ground_state(mass: float, alpha: float) -> EnergyLevel:
    """Ground state of the Dirac-Coulomb problem, ``q = alpha m``."""
    _check_dirac_alpha(alpha)
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    root = math.sqrt(1.0 - alpha * alpha)
    q = alpha * mass
    s = dirac_frobenius_exponent(alpha)
    return EnergyLevel(
        n=1,
        q=q,
        energy=mass * root,
        binding=mass * alpha * alpha / (1.0 + root),
        n_bar=1.0 + s,
        diagnostics={"conditions": dirac_conditions(mass, alpha, q)},
    )


def breit_dirac_comparison(mass: float, alpha: float) -> DiracComparison:
    """Contrast the Dirac ground state with the equal-mass Breit ground state.

    In the Dirac case both ``N = 0`` and ``delta = 0`` hold at the same
    ``q``; at the Breit ``n = 1`` root ``delta`` stays near 1/4.
    """
    _check_dirac_alpha(alpha)
    dirac = dirac_ground_state(mass, alpha)
    n_dirac, delta_dirac = dirac_conditions(mass, alpha, dirac.q)
    breit = equal_mass_level(PhysicalSystem(mass, mass, alpha), 1)
    ctx = build_context(PhysicalSystem(mass, mass, alpha), breit.q, MassMode.EQUAL)
    return DiracComparison(
        s_dirac=dirac_frobenius_exponent(alpha),
        s_breit=frobenius_exponent(alpha),
        N_dirac=n_dirac,
        N_breit=ctx.N_param,
        delta_breit=ctx.delta,
        delta_dirac=delta_dirac,
        q_dirac=dirac.q,
        q_breit=breit.q,
    )

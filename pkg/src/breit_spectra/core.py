"""Physical system, kinematics and dimensionless variables of the singlet problem.

Everything downstream works with a :class:`DimensionlessContext` evaluated at a
trial momentum parameter ``q``.  The formulas are homogeneous in the masses, so
any consistent unit works; the CLI uses ``mass_1`` as the scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

#: Relative mass mismatch below which two masses count as equal.
EQUAL_MASS_RTOL = 1e-12

#: Largest |rho| accepted by :func:`kummer_m` for a non-terminating series.
KUMMER_SERIES_BOUND = 50.0


class BreitError(Exception):
    """Base class for errors raised by this package."""


class DomainError(BreitError, ValueError):
    """An argument lies outside the domain of the formula."""


class MassModeError(BreitError, ValueError):
    """The requested mass mode contradicts the masses of the system."""


class ConvergenceError(BreitError, ArithmeticError):
    """A series or iteration failed to converge."""


class MassMode(str, Enum):
    EQUAL = "equal"
    UNEQUAL = "unequal"


@dataclass(frozen=True)
class PhysicalSystem:
    """Two oppositely charged spin-1/2 particles bound by the static Coulomb force.

    Attributes:
        mass_1: mass of the particle with charge -e.
        mass_2: mass of the particle with charge +e.
        coupling: fine-structure constant; must lie in (0, 2).
    """

    mass_1: float
    mass_2: float
    coupling: float

    def __post_init__(self) -> None:
        if not (self.mass_1 > 0 and self.mass_2 > 0):
            raise DomainError(f"masses must be positive, got {self.mass_1}, {self.mass_2}")
        if not (0 < self.coupling < 2):
            raise DomainError(f"coupling must lie in (0, 2), got {self.coupling}")

    @property
    def total_mass(self) -> float:
        return self.mass_1 + self.mass_2

    @property
    def reduced_mass(self) -> float:
        return self.mass_1 * self.mass_2 / (self.mass_1 + self.mass_2)

    @property
    def q_max(self) -> float:
        """Upper end of the admissible momentum range."""
        return min(self.mass_1, self.mass_2)

    @property
    def is_equal_mass(self) -> bool:
        return abs(self.mass_1 - self.mass_2) / self.total_mass < EQUAL_MASS_RTOL

    @property
    def frobenius_exponent(self) -> float:
        return frobenius_exponent(self.coupling)


@dataclass(frozen=True)
class QuantumState:
    n: int
    l: int = 0
    multiplicity: str = "singlet"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"principal quantum number must be >= 1, got {self.n}")
        if self.l < 0:
            raise DomainError(f"orbital angular momentum must be >= 0, got {self.l}")
        if self.multiplicity != "singlet":
            raise DomainError("only singlet states are supported")


@dataclass(frozen=True)
class DimensionlessContext:
    """Dimensionless quantities of the radial problem at momentum ``q``.

    ``lambda_`` and ``nu`` are the large and small coefficients of the
    F/K relation; ``N_param`` is the Coulomb-like parameter whose integer
    values ``n - 1`` are the bound states.
    """

    system: PhysicalSystem
    mass_mode: MassMode
    q: float
    E: float
    y: float
    lambda_: float
    nu: float
    m_bar: float
    M_bar: float
    s: float
    gamma: float
    delta: float
    N_param: float
    # sqrt(m^2 - q^2) and sqrt(M^2 - q^2), kept for cancellation-free formulas
    root_1: float
    root_2: float

    @property
    def alpha(self) -> float:
        return self.system.coupling

    @property
    def binding(self) -> float:
        return binding_energy(self.system, self.q)


def frobenius_exponent(alpha: float) -> float:
    """Accepted root ``-1 + sqrt(1 - alpha^2/4)`` of the indicial equation at rho=0."""
    if not (0 < alpha < 2):
        raise DomainError(f"coupling must lie in (0, 2), got {alpha}")
    # rationalised to avoid cancellation at small alpha
    return -(alpha * alpha / 4.0) / (1.0 + math.sqrt(1.0 - alpha * alpha / 4.0))


def indicial_roots(alpha: float) -> tuple[float, float]:
    """Both roots of ``s^2 + 2 s + alpha^2/4 = 0``; the first is the regular one."""
    root = math.sqrt(1.0 - alpha * alpha / 4.0)
    return frobenius_exponent(alpha), -1.0 - root


def _check_q(system: PhysicalSystem, q: float) -> None:
    if not (0 < q < system.q_max):
        raise DomainError(f"q must lie in (0, {system.q_max}), got {q}")


def total_energy(system: PhysicalSystem, q: float) -> float:
    """Total CM energy ``sqrt(m^2 - q^2) + sqrt(M^2 - q^2)``."""
    _check_q(system, q)
    return math.sqrt(system.mass_1**2 - q * q) + math.sqrt(system.mass_2**2 - q * q)


def binding_energy(system: PhysicalSystem, q: float) -> float:
    """``m + M - E`` evaluated without subtractive cancellation."""
    _check_q(system, q)
    q2 = q * q
    m, M = system.mass_1, system.mass_2
    return q2 / (m + math.sqrt(m * m - q2)) + q2 / (M + math.sqrt(M * M - q2))


def build_context(
    system: PhysicalSystem, q: float, mass_mode: MassMode | str = MassMode.UNEQUAL
) -> DimensionlessContext:
    """Evaluate every dimensionless quantity at momentum ``q``.

    Raises:
        DomainError: if ``q`` is outside ``(0, min(m, M))``.
        MassModeError: if ``mass_mode`` is ``equal`` but the masses differ.
    """
    mode = MassMode(mass_mode)
    _check_q(system, q)
    if mode is MassMode.EQUAL and not system.is_equal_mass:
        raise MassModeError(
            f"equal-mass mode requested for m={system.mass_1}, M={system.mass_2}"
        )
    alpha = system.coupling
    m, M = system.mass_1, system.mass_2
    a = math.sqrt(m * m - q * q)
    b = math.sqrt(M * M - q * q)
    E = a + b
    scale = 2.0 * alpha * q
    y = E / scale
    binding = binding_energy(system, q)
    s = frobenius_exponent(alpha)
    if mode is MassMode.EQUAL:
        # alpha^2 y / 2 = alpha E / (4 q)
        coulomb = alpha * E / (4.0 * q)
    else:
        # alpha^2 y/2 * (1 - ((m^2 - M^2)/E^2)^2) == alpha a b / (q E)
        coulomb = alpha * a * b / (q * E)
    return DimensionlessContext(
        system=system,
        mass_mode=mode,
        q=q,
        E=E,
        y=y,
        lambda_=(m + M + E) / scale,
        nu=binding / scale,
        m_bar=m / scale,
        M_bar=M / scale,
        s=s,
        gamma=2.0 + 2.0 * s,
        delta=0.5 + s * y,
        N_param=coulomb - 1.0 - s,
        root_1=a,
        root_2=b,
    )


def _is_nonpositive_integer(a: float) -> bool:
    return a <= 0 and float(a).is_integer()


def kummer_m(a: float, c: float, rho, *, rtol: float = 1e-17, max_terms: int = 500):
    """Confluent hypergeometric function 1F1(a; c; rho) from its power series.

    Terms follow ``t_{k+1} = t_k (a+k) rho / ((c+k)(k+1))``.  For a
    non-positive integer ``a`` the sum is the exact polynomial of degree
    ``-a``; otherwise summation stops once every term is below ``rtol``
    relative to the partial sum.

    Args:
        a: numerator parameter.
        c: denominator parameter; must not be a non-positive integer.
        rho: scalar or array argument.

    Raises:
        DomainError: if ``c`` is a non-positive integer.
        ConvergenceError: for a non-terminating series with ``|rho|`` beyond
            :data:`KUMMER_SERIES_BOUND` or when ``max_terms`` is exhausted.
    """
    if _is_nonpositive_integer(c):
        raise DomainError(f"c must not be a non-positive integer, got {c}")
    x = np.asarray(rho, dtype=float)
    terminating = _is_nonpositive_integer(a)
    if not terminating and np.any(np.abs(x) > KUMMER_SERIES_BOUND):
        raise ConvergenceError(
            f"non-terminating 1F1 series requested at |rho| > {KUMMER_SERIES_BOUND}"
        )
    term = np.ones_like(x)
    total = np.ones_like(x)
    n_terms = int(-a) if terminating else max_terms
    for k in range(n_terms):
        term = term * (a + k) * x / ((c + k) * (k + 1))
        total = total + term
        if not terminating and np.all(np.abs(term) <= rtol * np.abs(total)):
            break
    else:
        if not terminating:
            raise ConvergenceError(f"1F1({a}; {c}; rho) did not converge in {max_terms} terms")
    return total if total.ndim else float(total)


def kummer_polynomial(k: int, c: float) -> np.polynomial.Polynomial:
    """The terminating series 1F1(-k; c; rho) as a numpy polynomial."""
    if k < 0:
        raise DomainError(f"degree must be non-negative, got {k}")
    coef = [1.0]
    for j in range(k):
        coef.append(coef[-1] * (j - k) / ((c + j) * (j + 1)))
    return np.polynomial.Polynomial(coef)

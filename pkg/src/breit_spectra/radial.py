"""Radial wavefunctions of the singlet S state.

The combination ``F + K = exp(-rho/2) rho^s h(rho)`` carries all the
information; ``h`` obeys

    h'' + (-1 + gamma/rho + P) h' + (N/rho - delta P) h = 0,
    P = 1 / (rho (1 + y rho)),

in the equal-mass case.  Since ``y ~ 1/alpha^2`` the ``P`` terms are a small
perturbation away from the origin, and ``h`` is expanded as the Kummer
polynomial ``F(-N, gamma, rho)`` plus an O(alpha^2) correction.
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad, solve_ivp

from .core import (
    BreitError,
    DimensionlessContext,
    DomainError,
    MassMode,
    PhysicalSystem,
    build_context,
    kummer_polynomial,
)

STALE_TOL = 1e-6
INFINITY = "infinity"


class StaleContextError(BreitError, ValueError):
    """The context is not evaluated at an eigenvalue of the requested level."""


class UnsupportedError(BreitError, NotImplementedError):
    pass


class QuadratureError(BreitError, ArithmeticError):
    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class SeriesExpansion:
    """Truncated series about ``expansion_point``.

    For a finite point the series is ``sum_k c_k x^k`` with ``x = rho -
    expansion_point``; at infinity it is ``rho^exponent sum_k c_k rho^-k``.
    ``relation(k, c)`` evaluates the generating recurrence at index ``k``.
    """

    expansion_point: float | str
    coefficients: np.ndarray
    validity_radius: float
    normalization: float
    exponent: float = 0.0
    relation: Callable[[int, np.ndarray], float] | None = field(default=None, repr=False)
    relation_indices: range = range(0)

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        c = self.coefficients
        if self.expansion_point == INFINITY:
            inv = 1.0 / rho
            return rho**self.exponent * np.polynomial.polynomial.polyval(inv, c)
        return np.polynomial.polynomial.polyval(rho - self.expansion_point, c)

    def derivative(self, rho, order: int = 1):
        """Term-by-term derivative of the truncated series."""
        rho = np.asarray(rho, dtype=float)
        c = self.coefficients
        if self.expansion_point != INFINITY:
            poly = np.polynomial.Polynomial(c).deriv(order)
            return poly(rho - self.expansion_point)
        powers = self.exponent - np.arange(len(c))
        factor = np.ones_like(powers)
        for j in range(order):
            factor = factor * (powers - j)
        terms = (c * factor)[:, None] * rho.ravel()[None, :] ** (powers - order)[:, None]
        out = terms.sum(axis=0).reshape(rho.shape)
        return out if out.ndim else float(out)

    def recurrence_residuals(self) -> np.ndarray:
        """Relative residual of the generating recurrence at each index."""
        c = self.coefficients
        out = []
        for k in self.relation_indices:
            scale = max(np.max(np.abs(c[max(k - 2, 0):k + 3])), np.finfo(float).tiny)
            out.append(abs(self.relation(k, c)) / scale)
        return np.array(out)


@dataclass(frozen=True)
class RadialGrid:
    rho: np.ndarray
    h0: np.ndarray
    f_correction: np.ndarray
    h: np.ndarray
    F_plus_K: np.ndarray
    F: np.ndarray
    K: np.ndarray
    G: np.ndarray
    order: int

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "rho": self.rho, "h0": self.h0, "f1": self.f_correction, "h": self.h,
            "F_plus_K": self.F_plus_K, "F": self.F, "K": self.K, "G": self.G,
        }


@dataclass(frozen=True)
class ResidualStats:
    max_abs: float
    rms_abs: float
    max_normalized: float
    rms_normalized: float
    residuals: np.ndarray = field(repr=False)


# -- ODE coefficients -----------------------------------------------------


def _coupling_P(ctx: DimensionlessContext, rho):
    return 1.0 / (rho * (1.0 + ctx.y * rho))


def singlet_ode_coefficients(ctx: DimensionlessContext, l: int = 0,
                             mass_mode: MassMode | str | None = None):
    """Coefficients ``(p, q1)`` of ``h~'' + p h~' + q1 h~ = 0`` for ``h~ = exp(rho/2)(F+K)``.

    Equal masses accept any ``l``; unequal masses only ``l = 0``.
    """
    mode = MassMode(mass_mode or ctx.mass_mode)
    alpha, y = ctx.alpha, ctx.y
    if l < 0:
        raise DomainError(f"l must be non-negative, got {l}")
    if mode is MassMode.EQUAL:
        def p(rho):
            return -1.0 + 2.0 / rho + _coupling_P(ctx, rho)

        def q1(rho):
            return ((alpha**2 * y / 2 - 1) / rho + (alpha**2 / 4 - l * (l + 1)) / rho**2
                    - 0.5 * _coupling_P(ctx, rho))

        return p, q1
    if l != 0:
        raise UnsupportedError("unequal masses are supported for l = 0 only")
    diff2 = (ctx.M_bar - ctx.m_bar) ** 2
    sum2 = (ctx.M_bar + ctx.m_bar) ** 2

    def denom(rho):
        return rho * ((1 + y * rho) ** 2 - diff2 * rho**2)

    def p(rho):
        return (-1.0 + 2.0 / rho - _coupling_P(ctx, rho)
                + 2.0 * (1 + y * rho) / denom(rho))

    def q1(rho):
        u = 1 + y * rho
        return (-1.0 / rho + 0.5 * _coupling_P(ctx, rho) - u / denom(rho) + 0.25
                + alpha**2 / 4 * (1 - sum2 * rho**2 / u**2) * (u**2 / rho**2 - diff2))

    return p, q1


@dataclass(frozen=True)
class UnequalMassTerms:
    """Term groups (A)..(F) of the unequal-mass equation for ``h``.

    ``E`` is the part of ``D`` left after its ``1/rho`` tail ``F`` has been
    absorbed into the Coulomb parameter, so ``E + F == D`` identically.
    """

    ctx: DimensionlessContext

    def Q(self, rho):
        c, y = self.ctx, self.ctx.y
        u = 1 + y * rho
        diff2 = (c.m_bar - c.M_bar) ** 2
        return (diff2 * rho / u + u / rho) / (u**2 - diff2 * rho**2)

    def A(self, rho):
        s = self.ctx.s
        return self.Q(rho) * s / rho - s / rho**2

    def B(self, rho):
        return -0.5 * self.Q(rho)

    def C(self, rho):
        # 1/4 + alpha^2/4 (y^2 - 2(m_bar^2 + M_bar^2)), rewritten with
        # E^2 = (a + b)^2 so the O(1/alpha^2) cancellation is done exactly
        c = self.ctx
        return -c.alpha**2 / 4 * ((c.m_bar**2 - c.M_bar**2) / c.y) ** 2 + 0 * rho

    def D(self, rho):
        c = self.ctx
        return c.alpha**2 / 4 * (c.m_bar**2 - c.M_bar**2) ** 2 * rho**2 / (1 + c.y * rho) ** 2

    def E(self, rho):
        c = self.ctx
        w = (c.m_bar**2 - c.M_bar**2) ** 2 / c.y**2
        return c.alpha**2 / 4 * w * ((c.y * rho / (1 + c.y * rho)) ** 2 + 2 / (c.y * rho))

    def F(self, rho):
        c = self.ctx
        return -c.alpha**2 * c.y / 2 * ((c.m_bar**2 - c.M_bar**2) / c.y**2) ** 2 / rho


def reduced_ode_coefficients(ctx: DimensionlessContext, truncation: str = "full",
                             mass_mode: MassMode | str | None = None):
    """Coefficients ``(p, q)`` of ``h'' + p h' + q h = 0``.

    Args:
        truncation: ``"full"`` for the complete equation, ``"leading"`` for
            the Kummer operator alone, ``"schrodinger"`` for the
            nonrelativistic equation with ``s`` and all alpha^2 terms dropped.
    """
    mode = MassMode(mass_mode or ctx.mass_mode)
    g, N = ctx.gamma, ctx.N_param
    if truncation == "schrodinger":
        coulomb = ctx.alpha**2 * ctx.y / 2 - 1
        return (lambda r: -1.0 + 2.0 / r), (lambda r: coulomb / r)
    if truncation == "leading":
        return (lambda r: -1.0 + g / r), (lambda r: N / r)
    if truncation != "full":
        raise DomainError(f"unknown truncation {truncation!r}")
    if mode is MassMode.EQUAL:
        def p(r):
            return -1.0 + g / r + _coupling_P(ctx, r)

        def q(r):
            return N / r - ctx.delta * _coupling_P(ctx, r)

        return p, q
    t = UnequalMassTerms(ctx)

    def p(r):
        return -1.0 + g / r - 2.0 * t.B(r)

    def q(r):
        return N / r + t.A(r) + t.B(r) + t.C(r) + t.E(r)

    return p, q


def asymptotic_exponents(ctx: DimensionlessContext) -> np.ndarray:
    """Roots ``lam`` of the large-rho balance for ``h ~ exp(lam rho) rho^k``.

    Only ``lam = 0`` keeps ``F + K ~ exp((lam - 1/2) rho)`` normalizable.
    """
    p, q = reduced_ode_coefficients(ctx)
    big = 1e12
    return np.sort(np.roots([1.0, p(big), q(big)]).real)


# -- series solutions -----------------------------------------------------


def origin_series(ctx: DimensionlessContext, num_terms: int = 30) -> SeriesExpansion:
    """Taylor coefficients of ``h`` about ``rho = 0`` with ``h_0 = 1``.

    The three-term recurrence is

        (k+1)(k+3+2s) h_{k+1} / y
          + [k(k+1+2s) - (k - alpha^2 y/2 + 1 + s + 1/2 + s y)/y] h_k
          - (k - 1 - alpha^2 y/2 + 1 + s) h_{k-1} = 0.
    """
    if ctx.mass_mode is not MassMode.EQUAL:
        raise UnsupportedError("origin_series is implemented for equal masses")
    if num_terms < 2:
        raise DomainError("num_terms must be >= 2")
    y, g, N, d = ctx.y, ctx.gamma, ctx.N_param, ctx.delta

    def relation(k, c):
        prev = c[k - 1] if k >= 1 else 0.0
        return ((k + 1) * (k + g + 1) * c[k + 1]
                + (y * k * (k - 1 + g) - k + N - d) * c[k]
                - y * (k - 1 - N) * prev)

    c = np.zeros(num_terms)
    c[0] = 1.0
    for k in range(num_terms - 1):
        prev = c[k - 1] if k >= 1 else 0.0
        c[k + 1] = (-(y * k * (k - 1 + g) - k + N - d) * c[k]
                    + y * (k - 1 - N) * prev) / ((k + 1) * (k + g + 1))
    return SeriesExpansion(0.0, c, 1.0 / y, 1.0, relation=relation,
                           relation_indices=range(num_terms - 1))


def negative_pole_series(ctx: DimensionlessContext, num_terms: int = 40) -> SeriesExpansion:
    """Regular solution about the singular point ``rho = -1/y``.

    Coefficients are in ``x = rho + 1/y``, start at ``x^2`` (``g_2 = 1``) and obey

        -(k+1)(k-1) g_{k+1} + [y k (k - 1 + gamma) + k - delta] g_k
          - y (k - 1 - N) g_{k-1} = 0.
    """
    if ctx.mass_mode is not MassMode.EQUAL:
        raise UnsupportedError("negative_pole_series is implemented for equal masses")
    if num_terms < 3:
        raise DomainError("num_terms must be >= 3")
    y, g, N, d = ctx.y, ctx.gamma, ctx.N_param, ctx.delta

    def relation(k, c):
        return (-(k + 1) * (k - 1) * c[k + 1] + (y * k * (k - 1 + g) + k - d) * c[k]
                - y * (k - 1 - N) * c[k - 1])

    c = np.zeros(num_terms)
    c[2] = 1.0
    for k in range(2, num_terms - 1):
        c[k + 1] = ((y * k * (k - 1 + g) + k - d) * c[k]
                    - y * (k - 1 - N) * c[k - 1]) / ((k + 1) * (k - 1))
    return SeriesExpansion(-1.0 / y, c, 1.0 / y, 1.0, relation=relation,
                           relation_indices=range(2, num_terms - 1))


def negative_pole_leading_form(ctx: DimensionlessContext, rho):
    """Sum of the large-y coefficients ``g_{k+1} = k y^(k-1)``: ``(1 + y rho)^2 / (y^4 rho^2)``."""
    rho = np.asarray(rho, dtype=float)
    y = ctx.y
    return (1 + y * rho) ** 2 / (y**4 * rho**2)


def asymptotic_series(ctx: DimensionlessContext, n: int, num_terms: int = 6,
                      delta_convention: str = "exact") -> SeriesExpansion:
    """Asymptotic expansion ``rho^beta (c_0 + c_1/rho + ...)`` with ``beta = n - 1``.

    The series is generally divergent; keep ``num_terms`` small.  The
    recurrence, with ``c_0 = 1``, is

        y (k+1) c_{k+1} + [(k - beta)(k + 1 - gamma - beta) y + k - delta] c_k
          + (k - 1 - beta)(k - gamma - 1 - beta) c_{k-1} = 0.

    Args:
        delta_convention: ``"exact"`` uses ``delta = 1/2 + s y``,
            ``"truncated"`` uses ``delta = 1/2``.
    """
    _require_eigen(ctx, n)
    if ctx.mass_mode is not MassMode.EQUAL:
        raise UnsupportedError("asymptotic_series is implemented for equal masses")
    if delta_convention == "exact":
        d = ctx.delta
    elif delta_convention == "truncated":
        d = 0.5
    else:
        raise DomainError(f"unknown delta convention {delta_convention!r}")
    y, g = ctx.y, ctx.gamma
    b = float(n - 1)

    def relation(k, c):
        prev = (k - 1 - b) * (k - g - 1 - b) * c[k - 1] if k >= 1 else 0.0
        return y * (k + 1) * c[k + 1] + ((k - b) * (k + 1 - g - b) * y + k - d) * c[k] + prev

    c = np.zeros(num_terms)
    c[0] = 1.0
    for k in range(num_terms - 1):
        prev = (k - 1 - b) * (k - g - 1 - b) * c[k - 1] if k >= 1 else 0.0
        c[k + 1] = -(((k - b) * (k + 1 - g - b) * y + k - d) * c[k] + prev) / (y * (k + 1))
    return SeriesExpansion(INFINITY, c, math.inf, 1.0, exponent=b, relation=relation,
                           relation_indices=range(num_terms - 1))


# -- leading solution and first-order correction ---------------------------


def _require_eigen(ctx: DimensionlessContext, n: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if abs(ctx.N_param - (n - 1)) > STALE_TOL:
        raise StaleContextError(
            f"context has N={ctx.N_param!r}, not at the n={n} eigenvalue"
        )


def leading_wavefunction(ctx: DimensionlessContext, n: int) -> np.polynomial.Polynomial:
    """``F(-(n-1), gamma, rho)`` as a callable polynomial (with ``.deriv()``)."""
    _require_eigen(ctx, n)
    return kummer_polynomial(n - 1, ctx.gamma)


def correction_closed_form_ground(ctx: DimensionlessContext, rho):
    """Near-origin ground-state correction

        f = -1/(2y) [ (1+y rho)^2 / (2 (y rho)^2) log(1/(1+y rho)) + 3/4 + 1/(2 y rho) ],

    valid for ``|y rho| < 1``.  Below ``|y rho| = 0.1`` the equivalent power
    series is summed instead to avoid cancellation.
    """
    y = ctx.y
    u = y * np.asarray(rho, dtype=float)
    if np.any(np.abs(u) >= 1):
        raise DomainError("closed form requires |y rho| < 1")
    out = np.empty_like(u)
    small = np.abs(u) < 0.1
    us = u[small]
    k = np.arange(1, 40)[:, None]
    out[small] = np.sum((-1.0) ** (k - 1) * us**k / (2 * k * (k + 1) * (k + 2)), axis=0) / y
    ul = u[~small]
    with np.errstate(divide="ignore", invalid="ignore"):
        out[~small] = -(1 / (2 * y)) * (
            (1 + ul) ** 2 / (2 * ul**2) * -np.log1p(ul) + 0.75 + 1 / (2 * ul)
        )
    return out if out.ndim else float(out)


class FirstOrderCorrection:
    """First-order correction ``f1`` solving ``D0 f1 = D1 F`` with ``f1(0) = 0``.

    ``D0 = d^2 + (-1 + gamma/rho) d + N/rho`` is the Kummer operator and
    ``D1 = -P (d - delta)`` the perturbation.  With the weight
    ``W = exp(-rho) rho^gamma`` reduction of order gives

        f1 = F(rho) int_0^rho dt / (W F^2) int_0^t W F D1F ds,

    regular at the origin.  Zeros of ``F`` (n >= 2) are excised: a window of
    half-width ``node_halfwidth`` around each node is bridged by direct ODE
    integration and the quadrature restarts on the far side.
    """

    def __init__(self, ctx: DimensionlessContext, n: int, *, epsrel: float = 1e-12,
                 node_halfwidth: float | None = None):
        _require_eigen(ctx, n)
        if ctx.mass_mode is not MassMode.EQUAL:
            raise UnsupportedError("first-order correction is implemented for equal masses")
        self.ctx, self.n = ctx, n
        self.epsrel = epsrel
        self.poly = kummer_polynomial(n - 1, ctx.gamma)
        self.dpoly = self.poly.deriv()
        roots = self.poly.roots() if n > 1 else np.array([])
        self.nodes = np.sort(roots[np.isreal(roots)].real) if roots.size else roots
        gaps = np.diff(np.concatenate([[0.0], self.nodes])) if n > 1 else np.array([])
        if node_halfwidth is None:
            node_halfwidth = 0.2 * float(gaps.min()) if gaps.size else 0.0
        self.halfwidth = min(node_halfwidth, 0.1) if n > 1 else 0.0
        self.diagnostics: dict = {"nodes": self.nodes.tolist(), "excised": []}
        # per-segment caches of the inner integral J and of u = f1/F
        self._inner_knots = [([0.0], [0.0])]
        self._outer_knots = [([0.0], [0.0])]
        self._build_anchors()

    # integrand pieces
    def source(self, t):
        c = self.ctx
        return -_coupling_P(c, t) * (self.dpoly(t) - c.delta * self.poly(t))

    def _weight(self, t):
        return np.exp(-t) * t**self.ctx.gamma

    def _quad(self, fun, a, b, base=0.0):
        pts = [p for p in (1.0 / self.ctx.y,) if a < p < b]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            val, err = quad(fun, a, b, epsabs=1e-3 * self.epsrel * abs(base),
                            epsrel=self.epsrel, limit=400, points=pts or None)
        if not np.isfinite(val) or err > 1e-8 * (abs(val) + abs(base)):
            raise QuadratureError(f"quadrature on [{a}, {b}] did not converge", val)
        return val

    def _inner_integrand(self, s):
        return self._weight(s) * self.poly(s) * self.source(s)

    def _cached(self, knots, t, integrand):
        # knots: sorted ([t_i], [value_i]); extend from the nearest knot below
        ts, vs = knots
        k = bisect.bisect_right(ts, t) - 1
        if ts[k] == t:
            return vs[k]
        val = vs[k] + self._quad(integrand, ts[k], t, base=vs[k])
        ts.insert(k + 1, t)
        vs.insert(k + 1, val)
        return val

    def _uprime(self, idx, t):
        inner = self._cached(self._inner_knots[idx], t, self._inner_integrand)
        return inner / (self._weight(t) * self.poly(t) ** 2)

    def _segment(self, rho):
        idx = 0
        for i, z in enumerate(self.nodes):
            if rho >= z - self.halfwidth:
                idx = i + 1
        return idx

    def _state_in_segment(self, idx, rho):
        if rho == 0:
            return 0.0, self._limit_slope()
        u = self._cached(self._outer_knots[idx], rho, lambda t: self._uprime(idx, t))
        up = self._uprime(idx, rho)
        F, dF = self.poly(rho), self.dpoly(rho)
        return F * u, dF * u + F * up

    def _limit_slope(self):
        # f1'(0) = (delta - F'(0)) / gamma
        return (self.ctx.delta - self.dpoly(0.0)) / self.ctx.gamma

    def _rhs(self, t, z):
        c = self.ctx
        f, fp = z
        return [fp, self.source(t) - (-1 + c.gamma / t) * fp - c.N_param / t * f]

    def _bridge(self, start, stop, f, fp):
        sol = solve_ivp(self._rhs, (start, stop), [f, fp], method="DOP853",
                        rtol=1e-13, atol=1e-16 * max(abs(f), abs(fp), 1e-300))
        if not sol.success:
            raise QuadratureError(f"node bridge failed: {sol.message}", float(sol.y[0, -1]))
        return float(sol.y[0, -1]), float(sol.y[1, -1])

    def _build_anchors(self):
        for idx, z in enumerate(self.nodes):
            left, right = z - self.halfwidth, z + self.halfwidth
            f, fp = self._state_in_segment(idx, left)
            f, fp = self._bridge(left, right, f, fp)
            F, dF = self.poly(right), self.dpoly(right)
            u = f / F
            up = (fp * F - f * dF) / F**2
            J = self._weight(right) * F**2 * up
            self._inner_knots.append(([right], [J]))
            self._outer_knots.append(([right], [u]))
            self.diagnostics["excised"].append((left, right))

    def value_and_derivative(self, rho: float) -> tuple[float, float]:
        rho = float(rho)
        if rho <= 0:
            if rho == 0:
                return 0.0, self._limit_slope()
            raise DomainError("correction is defined for rho >= 0")
        for idx, z in enumerate(self.nodes):
            left, right = z - self.halfwidth, z + self.halfwidth
            if left < rho < right:
                f, fp = self._state_in_segment(idx, left)
                return self._bridge(left, rho, f, fp)
        return self._state_in_segment(self._segment(rho), rho)

    def __call__(self, rho):
        arr = np.asarray(rho, dtype=float)
        out = np.array([self.value_and_derivative(r)[0] for r in arr.ravel()])
        return out.reshape(arr.shape) if arr.ndim else float(out[0])

    def derivative(self, rho):
        arr = np.asarray(rho, dtype=float)
        out = np.array([self.value_and_derivative(r)[1] for r in arr.ravel()])
        return out.reshape(arr.shape) if arr.ndim else float(out[0])

    def second_derivative(self, rho):
        """Five-point central difference of the semi-analytic derivative."""
        return _fd_first(self.derivative, np.asarray(rho, dtype=float))


def correction_quadrature(ctx: DimensionlessContext, n: int, rho):
    """First-order correction ``f1(rho)``; see :class:`FirstOrderCorrection`."""
    return FirstOrderCorrection(ctx, n)(rho)


# -- components --------------------------------------------------------------


def _fd_step(rho):
    return 1e-4 * np.abs(rho)


def _fd_first(fun, rho):
    h = _fd_step(rho)
    if np.any(h == 0):
        raise DomainError("finite-difference step underflow at rho = 0")
    return (fun(rho - 2 * h) - 8 * fun(rho - h) + 8 * fun(rho + h) - fun(rho + 2 * h)) / (12 * h)


def _fd_second(fun, rho):
    h = _fd_step(rho)
    if np.any(h == 0):
        raise DomainError("finite-difference step underflow at rho = 0")
    return (-fun(rho - 2 * h) + 16 * fun(rho - h) - 30 * fun(rho)
            + 16 * fun(rho + h) - fun(rho + 2 * h)) / (12 * h * h)


def assemble_components(ctx: DimensionlessContext, n: int, rho_grid: Sequence[float],
                        order: int = 0, correction: FirstOrderCorrection | None = None
                        ) -> RadialGrid:
    """Sample ``h``, ``F + K``, ``F``, ``K`` and ``G`` on a radial grid.

    ``F = (F+K)(1 + lambda rho) / (2 + (lambda - nu) rho)``,
    ``K = F (1 - nu rho)/(1 + lambda rho)`` and
    ``G = -(F+K)' / (alpha (y + 1/rho + M_bar - m_bar))``.
    Order 1 adds the first-order correction (equal masses only).
    """
    rho = np.asarray(rho_grid, dtype=float)
    if rho.ndim != 1 or np.any(rho <= 0):
        raise DomainError("rho grid must be one-dimensional and strictly positive")
    if np.any(np.diff(rho) <= 0):
        raise DomainError("rho grid must be strictly increasing")
    if order not in (0, 1):
        raise DomainError(f"order must be 0 or 1, got {order}")
    _require_eigen(ctx, n)
    poly = kummer_polynomial(n - 1, ctx.gamma)
    h0 = poly(rho)
    dh = poly.deriv()(rho)
    if order == 1:
        corr = correction or FirstOrderCorrection(ctx, n)
        vals = np.array([corr.value_and_derivative(r) for r in rho])
        f1, df1 = vals[:, 0], vals[:, 1]
    else:
        f1 = np.zeros_like(rho)
        df1 = np.zeros_like(rho)
    h = h0 + f1
    dh = dh + df1
    envelope = np.exp(-rho / 2) * rho**ctx.s
    fk = envelope * h
    dfk = envelope * (dh + (ctx.s / rho - 0.5) * h)
    F = fk * (1 + ctx.lambda_ * rho) / (2 + (ctx.lambda_ - ctx.nu) * rho)
    K = F * (1 - ctx.nu * rho) / (1 + ctx.lambda_ * rho)
    G = -dfk / (ctx.alpha * (ctx.y + 1 / rho + ctx.M_bar - ctx.m_bar))
    return RadialGrid(rho=rho, h0=h0, f_correction=f1, h=h, F_plus_K=fk, F=F, K=K, G=G,
                      order=order)


# -- verification -------------------------------------------------------------


def perturbation_operators(ctx: DimensionlessContext):
    """Return ``(D0, D1)`` acting on ``(rho, f, f', f'')`` samples."""
    g, N, d = ctx.gamma, ctx.N_param, ctx.delta

    def D0(rho, f, df, d2f):
        return d2f + (-1 + g / rho) * df + N / rho * f

    def D1(rho, f, df):
        return -_coupling_P(ctx, rho) * (df - d * f)

    return D0, D1


def ode_residual(ctx: DimensionlessContext, n: int, h_eval: Callable, rho_points,
                 mass_mode: MassMode | str | None = None, *, dh: Callable | None = None,
                 d2h: Callable | None = None, truncation: str = "full") -> ResidualStats:
    """Residual of ``h'' + p h' + q h`` for a trial ``h`` at ``rho_points``.

    Missing derivatives are taken by five-point central differences with
    step ``1e-4 |rho|``; negative (unphysical) ``rho`` is allowed.  The
    normalized residual divides by ``|h| + |h'| + |h''|``.
    """
    rho = np.asarray(rho_points, dtype=float)
    if np.any(rho == 0):
        raise DomainError("rho = 0 is a singular point of the equation")
    p, q = reduced_ode_coefficients(ctx, truncation, mass_mode)
    h = h_eval(rho)
    d1 = dh(rho) if dh is not None else _fd_first(h_eval, rho)
    if d2h is not None:
        d2 = d2h(rho)
    elif dh is not None:
        d2 = _fd_first(dh, rho)
    else:
        d2 = _fd_second(h_eval, rho)
    res = d2 + p(rho) * d1 + q(rho) * h
    scale = np.abs(h) + np.abs(d1) + np.abs(d2)
    norm = np.abs(res) / scale
    return ResidualStats(
        max_abs=float(np.max(np.abs(res))),
        rms_abs=float(np.sqrt(np.mean(res**2))),
        max_normalized=float(np.max(norm)),
        rms_normalized=float(np.sqrt(np.mean(norm**2))),
        residuals=res,
    )


def schrodinger_context(system: PhysicalSystem, n: int) -> DimensionlessContext:
    """Equal-mass context at the nonrelativistic root ``alpha^2 y / 2 = n``."""
    m, alpha = system.mass_1, system.coupling
    q = alpha * m / math.sqrt(alpha * alpha + 4.0 * n * n)
    return build_context(system, q, MassMode.EQUAL)


DEFAULT_RESIDUAL_GRID = np.linspace(0.5, 8.0, 64)


def residual_orders(ctx: DimensionlessContext, n: int, rho_points=DEFAULT_RESIDUAL_GRID,
                    correction: FirstOrderCorrection | None = None
                    ) -> tuple[ResidualStats, ResidualStats]:
    """Residuals of ``F`` and ``F + f1`` in the full equal-mass equation."""
    poly = leading_wavefunction(ctx, n)
    dpoly, d2poly = poly.deriv(), poly.deriv(2)
    order0 = ode_residual(ctx, n, poly, rho_points, dh=dpoly, d2h=d2poly)
    corr = correction or FirstOrderCorrection(ctx, n)
    order1 = ode_residual(
        ctx, n,
        lambda r: poly(r) + corr(r),
        rho_points,
        dh=lambda r: dpoly(r) + corr.derivative(r),
        d2h=lambda r: d2poly(r) + corr.second_derivative(r),
    )
    return order0, order1

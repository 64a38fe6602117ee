import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from breit_spectra import (
    DomainError,
    MassMode,
    PhysicalSystem,
    StaleContextError,
    UnequalMassTerms,
    assemble_components,
    asymptotic_series,
    build_context,
    correction_closed_form_ground,
    kummer_m,
    kummer_polynomial,
    leading_wavefunction,
    negative_pole_series,
    ode_residual,
    origin_series,
    reduced_ode_coefficients,
    residual_orders,
    schrodinger_context,
    singlet_ode_coefficients,
    solve_level,
)
from breit_spectra.radial import (
    FirstOrderCorrection,
    UnsupportedError,
    asymptotic_exponents,
    negative_pole_leading_form,
    perturbation_operators,
)

from conftest import FINE_STRUCTURE, eigen_context


def integrate_correction(ctx, n, rho_out):
    """Oracle: integrate D0 f = D1 F directly from near the origin."""
    F = kummer_polynomial(n - 1, ctx.gamma)
    dF = F.deriv()
    _, D1 = perturbation_operators(ctx)
    g, N = ctx.gamma, ctx.N_param

    def rhs(t, z):
        return [z[1], D1(t, F(t), dF(t)) - (-1 + g / t) * z[1] - N / t * z[0]]

    r0 = 1e-14  # the neglected f2 r0^2 ~ y r0^2 term must stay far below f
    slope = (ctx.delta - dF(0.0)) / g
    sol = solve_ivp(rhs, (r0, rho_out[-1]), [slope * r0, slope], method="DOP853",
                    t_eval=rho_out, rtol=1e-13, atol=1e-20)
    return sol.y[0]


@pytest.mark.parametrize("alpha", [FINE_STRUCTURE, 0.1])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_correction_matches_direct_integration(alpha, n):
    ctx = eigen_context(alpha, n)
    corr = FirstOrderCorrection(ctx, n)
    # spans the 1/y scale and the nodes of F
    rho = np.concatenate([np.geomspace(0.05, 0.9, 5) / ctx.y, [0.3, 1.3, 2.0, 3.1, 6.0]])
    rho.sort()
    np.testing.assert_allclose(corr(rho), integrate_correction(ctx, n, rho), rtol=1e-7)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_correction_solves_first_order_equation(n):
    ctx = eigen_context(0.1, n)
    corr = FirstOrderCorrection(ctx, n)
    F = leading_wavefunction(ctx, n)
    D0, D1 = perturbation_operators(ctx)
    rho = np.linspace(0.3, 10.0, 25)
    lhs = D0(rho, corr(rho), corr.derivative(rho), corr.second_derivative(rho))
    assert np.max(np.abs(lhs - D1(rho, F(rho), F.deriv()(rho)))) < 1e-8


@pytest.mark.parametrize("alpha", [FINE_STRUCTURE, 0.1])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_correction_is_small_near_origin(alpha, n):
    ctx = eigen_context(alpha, n)
    rho = np.linspace(1e-3, 0.9, 30) / ctx.y
    ratio = np.abs(correction_quadrature_values(ctx, n, rho) / leading_wavefunction(ctx, n)(rho))
    assert ratio.max() < 10 * alpha**2


def correction_quadrature_values(ctx, n, rho):
    return FirstOrderCorrection(ctx, n)(rho)


def test_correction_origin_slope():
    ctx = eigen_context(0.05, 1)
    corr = FirstOrderCorrection(ctx, 1)
    assert corr(0.0) == 0.0
    assert corr.derivative(1e-12) == pytest.approx(ctx.delta / ctx.gamma, rel=1e-6)


def test_closed_form_against_mpmath():
    ctx = eigen_context(0.1, 1)
    y = ctx.y
    for u in (-0.8, -0.05, 1e-4, 0.05, 0.3, 0.95):
        with mpmath.workdps(40):
            U = mpmath.mpf(u)
            ref = -1 / (2 * y) * ((1 + U) ** 2 / (2 * U**2) * mpmath.log(1 / (1 + U))
                                  + mpmath.mpf(3) / 4 + 1 / (2 * U))
        assert correction_closed_form_ground(ctx, u / y) == pytest.approx(float(ref), rel=1e-12)
    with pytest.raises(DomainError):
        correction_closed_form_ground(ctx, 1.0 / y)


@pytest.mark.parametrize("alpha", [0.1, 0.05, 0.025])
def test_closed_form_tracks_exact_taylor_series(alpha):
    # the closed form sums the large-y limit of the exact origin coefficients
    ctx = eigen_context(alpha, 1)
    rho = np.linspace(0.05, 0.5, 10) / ctx.y
    exact = origin_series(ctx, 60)(rho) - 1.0
    closed = correction_closed_form_ground(ctx, rho)
    assert np.max(np.abs(closed / exact - 1)) < 3 * alpha**2


def test_origin_series_is_not_a_polynomial():
    series = origin_series(eigen_context(0.1, 1), 30)
    assert np.all(np.abs(series.coefficients) > 0)
    assert series.recurrence_residuals().max() < 1e-12


def test_origin_series_solves_full_equation():
    ctx = eigen_context(0.1, 1)
    series = origin_series(ctx, 60)
    rho = np.linspace(0.05, 0.5, 10) / ctx.y
    res = ode_residual(ctx, 1, series, rho, dh=series.derivative,
                       d2h=lambda r: series.derivative(r, 2))
    assert res.max_normalized < 1e-10


def test_stale_context_rejected():
    system = PhysicalSystem(1.0, 1.0, 0.1)
    ctx = build_context(system, 0.04, MassMode.EQUAL)
    with pytest.raises(StaleContextError):
        leading_wavefunction(ctx, 1)
    with pytest.raises(StaleContextError):
        assemble_components(eigen_context(0.1, 1), 2, [1.0])


def test_leading_wavefunction_is_kummer():
    ctx = eigen_context(0.1, 3)
    rho = np.linspace(0, 20, 11)
    np.testing.assert_allclose(leading_wavefunction(ctx, 3)(rho), kummer_m(-2, ctx.gamma, rho),
                               rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("mode", ["equal", "unequal"])
def test_h_and_htilde_equations_agree(mode):
    m2 = 1.0 if mode == "equal" else 3.0
    system = PhysicalSystem(1.0, m2, 0.1)
    ctx = build_context(system, solve_level(system, 1).q, mode)
    p, q = reduced_ode_coefficients(ctx)
    pt, qt = singlet_ode_coefficients(ctx, 0)
    s, r = ctx.s, np.linspace(0.01, 5, 40)
    e = np.exp(0.3 * r)
    h, dh, d2h = e * (1 + r**2), e * (0.3 * (1 + r**2) + 2 * r), e * (0.09 * (1 + r**2) + 1.2 * r + 2)
    ht = r**s * h
    dht = r**s * (dh + s / r * h)
    d2ht = r**s * (d2h + 2 * s / r * dh + s * (s - 1) / r**2 * h)
    res = d2h + p(r) * dh + q(r) * h
    res_t = d2ht + pt(r) * dht + qt(r) * ht
    np.testing.assert_allclose(res_t / r**s, res, rtol=1e-9)


def test_unequal_l_restricted():
    ctx = build_context(PhysicalSystem(1.0, 2.0, 0.1), 0.02)
    with pytest.raises(UnsupportedError):
        singlet_ode_coefficients(ctx, 1)
    singlet_ode_coefficients(eigen_context(0.1, 1), 2)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 1.5), st.floats(1e-3, 50.0), st.floats(0.05, 0.95))
def test_unequal_terms_reduce_at_equal_masses(alpha, rho, frac):
    system = PhysicalSystem(1.0, 1.0, alpha)
    ctx = build_context(system, frac * system.q_max, MassMode.UNEQUAL)
    t = UnequalMassTerms(ctx)
    target = -ctx.delta / (rho * (1 + ctx.y * rho))
    assert t.A(rho) + t.B(rho) == pytest.approx(target, rel=1e-10, abs=1e-10)
    assert t.C(rho) == 0.0
    assert t.D(rho) == 0.0


@settings(max_examples=30, deadline=None)
@given(st.floats(1.1, 50.0), st.floats(1e-3, 20.0))
def test_unequal_terms_E_plus_F_is_D(M, rho):
    system = PhysicalSystem(1.0, M, 0.1)
    t = UnequalMassTerms(build_context(system, 0.3 * system.q_max))
    assert t.E(rho) + t.F(rho) == pytest.approx(t.D(rho), rel=1e-9, abs=1e-300)


@pytest.mark.parametrize("M", [1.0, 2.0, 40.0])
def test_unequal_term_C_matches_printed_form(M):
    system = PhysicalSystem(1.0, M, 0.3)
    c = build_context(system, 0.4 * system.q_max)
    printed = 0.25 + c.alpha**2 / 4 * (c.y**2 - 2 * (c.m_bar**2 + c.M_bar**2))
    assert UnequalMassTerms(c).C(1.0) == pytest.approx(printed, rel=1e-12, abs=1e-13)


def test_unequal_full_equation_matches_grouping():
    system = PhysicalSystem(1.0, 4.0, 0.1)
    ctx = build_context(system, solve_level(system, 1).q)
    t = UnequalMassTerms(ctx)
    _, q = reduced_ode_coefficients(ctx)
    r = np.linspace(0.1, 5, 10)
    coulomb = ctx.alpha**2 * ctx.y / 2 - 1 - ctx.s
    # the 1/rho pieces cancel against each other, so compare at rounding level
    np.testing.assert_allclose(q(r), coulomb / r + t.A(r) + t.B(r) + t.C(r) + t.D(r), rtol=1e-8)


def test_negative_pole_series():
    ctx = eigen_context(0.1, 1)
    y, g = ctx.y, negative_pole_series(ctx, 80)
    c = g.coefficients
    assert c[0] == c[1] == 0 and c[2] == 1
    assert c[3] == pytest.approx((2 * y * (1 + ctx.gamma) + 2 - ctx.delta) / 3, rel=1e-14)
    assert c[3] / c[2] == pytest.approx(2 * y, rel=5 * ctx.alpha**2)
    assert c[4] / c[2] == pytest.approx(3 * y**2, rel=5 * ctx.alpha**2)
    assert g.recurrence_residuals().max() < 1e-12
    x = -1 / (2 * y)
    assert g(x) == pytest.approx(negative_pole_leading_form(ctx, x), rel=3 * ctx.alpha**2)


def test_negative_pole_series_solves_equation():
    ctx = eigen_context(0.1, 1)
    g = negative_pole_series(ctx, 120)
    rho = -np.array([0.6, 0.75, 0.9, 1.1, 1.25, 1.4]) / ctx.y
    res = ode_residual(ctx, 1, g, rho, dh=g.derivative, d2h=lambda r: g.derivative(r, 2))
    assert res.max_normalized < 1e-10


@pytest.mark.parametrize("n", [1, 2, 3])
def test_asymptotic_series(n):
    ctx = eigen_context(0.1, n)
    series = asymptotic_series(ctx, n, 6)
    beta = n - 1
    c = series.coefficients
    assert c[1] == pytest.approx(-beta * (beta + ctx.gamma - 1) + ctx.delta / ctx.y, rel=1e-14)
    assert series.recurrence_residuals().max() < 1e-12
    # the truncated series satisfies the equation ever better as rho grows
    rho = np.array([20.0, 40.0, 80.0])
    res = ode_residual(ctx, n, series, rho, dh=series.derivative,
                       d2h=lambda r: series.derivative(r, 2))
    assert np.all(np.diff(np.abs(res.residuals) / np.abs(series(rho))) < 0)


def test_asymptotic_series_tracks_polynomial():
    ctx = eigen_context(0.1, 2)
    F = leading_wavefunction(ctx, 2)
    lead = F.coef[-1]
    series = asymptotic_series(ctx, 2, 4)
    r = 50.0
    assert series(r) / r == pytest.approx(F(r) / (r * lead), rel=0.05)


def test_asymptotic_delta_conventions():
    ctx = eigen_context(0.1, 1)
    exact = asymptotic_series(ctx, 1, 3, "exact")
    truncated = asymptotic_series(ctx, 1, 3, "truncated")
    assert exact.coefficients[1] == pytest.approx(ctx.delta / ctx.y)
    assert truncated.coefficients[1] == pytest.approx(0.5 / ctx.y)
    with pytest.raises(DomainError):
        asymptotic_series(ctx, 1, 3, "other")


def test_rejected_exponential_branch():
    lam = asymptotic_exponents(eigen_context(0.1, 1))
    np.testing.assert_allclose(lam, [0.0, 1.0], atol=1e-9)
    # F + K ~ exp((lam - 1/2) rho): only lam = 0 decays
    assert lam[0] - 0.5 < 0 < lam[1] - 0.5


@pytest.mark.parametrize("n", [1, 3])
def test_assemble_components_identities(n):
    ctx = eigen_context(0.1, n)
    rho = np.geomspace(1e-3, 12, 60)
    grid = assemble_components(ctx, n, rho, order=1)
    np.testing.assert_allclose(grid.F + grid.K, grid.F_plus_K, rtol=1e-12)
    np.testing.assert_allclose(grid.F, grid.F_plus_K * (1 + ctx.lambda_ * rho)
                               / (2 * (1 + ctx.y * rho)), rtol=1e-12)
    np.testing.assert_allclose(grid.F_plus_K, np.exp(-rho / 2) * rho**ctx.s * grid.h, rtol=1e-13)
    # G from a finite-difference derivative of F + K
    corr = FirstOrderCorrection(ctx, n)
    fk = lambda r: np.exp(-r / 2) * r**ctx.s * (leading_wavefunction(ctx, n)(r) + corr(r))
    sel = slice(10, 50, 8)
    h = 1e-5 * rho[sel]
    dfk = (fk(rho[sel] + h) - fk(rho[sel] - h)) / (2 * h)
    G = -dfk / (ctx.alpha * (ctx.y + 1 / rho[sel]))
    np.testing.assert_allclose(grid.G[sel], G, rtol=1e-6)


def test_assemble_order_zero_ground_state():
    ctx = eigen_context(0.1, 1)
    grid = assemble_components(ctx, 1, [0.5, 1.0, 2.0])
    assert np.all(grid.h0 == 1.0) and np.all(grid.f_correction == 0.0)


def test_assemble_tail_follows_leading_power():
    ctx = eigen_context(0.1, 3)
    rho = np.array([60.0, 120.0])
    grid = assemble_components(ctx, 3, rho, order=0)
    shape = rho ** (2 + ctx.s) * np.exp(-rho / 2)
    ratio = grid.F_plus_K / shape
    assert ratio[1] / ratio[0] == pytest.approx(1.0, rel=0.1)


def test_assemble_rejects_bad_grids():
    ctx = eigen_context(0.1, 1)
    for bad in ([0.0, 1.0], [1.0, 0.5], [-1.0, 1.0]):
        with pytest.raises(DomainError):
            assemble_components(ctx, 1, bad)


def test_assemble_unequal_order_zero():
    system = PhysicalSystem(1.0, 2.0, 0.1)
    ctx = build_context(system, solve_level(system, 1).q)
    grid = assemble_components(ctx, 1, [0.5, 2.0])
    np.testing.assert_allclose(grid.F + grid.K, grid.F_plus_K, rtol=1e-12)
    with pytest.raises(UnsupportedError):
        assemble_components(ctx, 1, [0.5, 2.0], order=1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_schrodinger_limit_exact(n):
    ctx = schrodinger_context(PhysicalSystem(1.0, 1.0, 0.1), n)
    h = kummer_polynomial(n - 1, 2.0)
    rho = np.linspace(0.5, 8.0, 32)
    # five-point differences leave only rounding noise
    assert ode_residual(ctx, n, h, rho, truncation="schrodinger").max_normalized < 1e-6
    assert ode_residual(ctx, n, h, rho, dh=h.deriv(), d2h=h.deriv(2),
                        truncation="schrodinger").max_abs < 1e-12


def test_residual_scaling_orders():
    res = {a: residual_orders(eigen_context(a, 1), 1) for a in (0.1, 0.05)}
    p0 = np.log2(res[0.1][0].max_abs / res[0.05][0].max_abs)
    p1 = np.log2(res[0.1][1].max_abs / res[0.05][1].max_abs)
    assert 1.8 <= p0 <= 2.2
    assert 3.6 <= p1 <= 4.4


def test_residual_rejects_origin():
    ctx = eigen_context(0.1, 1)
    with pytest.raises(DomainError):
        ode_residual(ctx, 1, lambda r: np.ones_like(r), [0.0, 1.0])

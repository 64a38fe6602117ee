"""Series solutions around the three singular points of the radial equation."""

import numpy as np

from breit_spectra import (
    MassMode,
    PhysicalSystem,
    asymptotic_series,
    build_context,
    equal_mass_level,
    negative_pole_series,
    origin_series,
)
from breit_spectra.radial import negative_pole_leading_form

system = PhysicalSystem(1.0, 1.0, 0.1)
ctx = build_context(system, equal_mass_level(system, 1).q, MassMode.EQUAL)
y = ctx.y

# rho = 0: every coefficient is non-zero, so h is not a polynomial.
origin = origin_series(ctx, 8)
print("origin coefficients h_k:", np.array2string(origin.coefficients, precision=4))

# rho = -1/y: the coefficient ratios approach g_{k+1} / g_k = k y / (k - 1).
pole = negative_pole_series(ctx, 60)
g = pole.coefficients
print("g3 / (2 y g2) =", g[3] / (2 * y * g[2]), "  g4 / (3 y^2 g2) =", g[4] / (3 * y**2 * g[2]))
x = -1 / (2 * y)
print("sum at rho=-1/(2y):", pole(x), " large-y form:", negative_pole_leading_form(ctx, x))

# rho -> infinity: h ~ rho^(n-1) (1 + c1/rho + ...), for both delta conventions.
for conv in ("exact", "truncated"):
    s = asymptotic_series(ctx, 1, 4, conv)
    print(f"asymptotic ({conv}):", np.array2string(s.coefficients, precision=6))
print("largest recurrence residual:", max(origin.recurrence_residuals().max(),
                                          pole.recurrence_residuals().max()))

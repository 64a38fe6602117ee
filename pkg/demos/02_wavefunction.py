"""Radial wavefunction of the ground state and its first-order correction.

h = F(-N, gamma, rho) + f1 with f1 = O(alpha^2).  The residual of the full
radial equation drops from O(alpha^2) to O(alpha^4) once f1 is included.
"""

import numpy as np

from breit_spectra import (
    MassMode,
    PhysicalSystem,
    assemble_components,
    build_context,
    correction_closed_form_ground,
    equal_mass_level,
    residual_orders,
)
from breit_spectra.radial import FirstOrderCorrection


def ground_context(alpha, n=1):
    system = PhysicalSystem(1.0, 1.0, alpha)
    return build_context(system, equal_mass_level(system, n).q, MassMode.EQUAL)


ctx = ground_context(0.1)
grid = assemble_components(ctx, 1, np.geomspace(1e-3, 10, 9), order=1)
print("alpha = 0.1, n = 1")
print(f"{'rho':>10} {'h':>12} {'f1':>12} {'F':>12} {'K':>12} {'G':>12}")
for row in zip(grid.rho, grid.h, grid.f_correction, grid.F, grid.K, grid.G):
    print(" ".join(f"{v:12.5e}" for v in row))

# Near the origin the correction is O(1/y); compare with the near-origin
# closed form, which sums the large-y limit of the exact Taylor series.
corr = FirstOrderCorrection(ctx, 1)
rho = np.array([0.1, 0.5, 0.9]) / ctx.y
print("\nrho*y   quadrature f1   closed form")
for r, a, b in zip(rho * ctx.y, corr(rho), correction_closed_form_ground(ctx, rho)):
    print(f"{r:5.2f}  {a:.6e}  {b:.6e}")

print("\nmax residual of the full equation on 0.5 <= rho <= 8")
print(f"{'alpha':>6} {'order 0':>12} {'order 1':>12}")
for alpha in (0.1, 0.05, 0.025):
    r0, r1 = residual_orders(ground_context(alpha), 1)
    print(f"{alpha:6.3f} {r0.max_abs:12.4e} {r1.max_abs:12.4e}")

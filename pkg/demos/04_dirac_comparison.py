"""Contrast with the one-body Dirac-Coulomb ground state.

In the Dirac case the Coulomb condition N = 0 and the condition delta = 0
hold at the same momentum q = alpha m, so the ground state is exactly a
Kummer function.  In the two-body problem delta stays near 1/4 at the root.
"""

from breit_spectra import breit_dirac_comparison, dirac_conditions, dirac_ground_state

for alpha in (1 / 137.036, 0.1, 0.5):
    dirac = dirac_ground_state(1.0, alpha)
    cmp = breit_dirac_comparison(1.0, alpha)
    n_cond, d_cond = dirac_conditions(1.0, alpha, dirac.q)
    print(f"alpha={alpha:.6f}: Dirac q={dirac.q:.6e} conditions=({n_cond:.1e}, {d_cond:.1e}) "
          f"E={dirac.energy:.12f}; two-body delta={cmp.delta_breit:.6f}")

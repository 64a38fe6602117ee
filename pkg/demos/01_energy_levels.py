"""Energy levels of the singlet S state.

For equal masses the quantization condition has a closed form; for unequal
masses the level is found by bracketing and Brent refinement.  The binding
energy is then compared with its expansion in (alpha / 2 n_bar)^2.
"""

from breit_spectra import PhysicalSystem, binding_series, equal_mass_level, solve_level

ALPHA = 1 / 137.036

# Positronium-like system: the root finder reproduces the closed form.
pos = PhysicalSystem(1.0, 1.0, ALPHA)
print("equal masses, alpha = 1/137.036")
print(f"{'n':>2} {'E closed form':>22} {'E root finder':>22} {'binding':>12}")
for n in range(1, 5):
    exact = equal_mass_level(pos, n)
    solved = solve_level(pos, n)
    print(f"{n:>2} {exact.energy:22.17f} {solved.energy:22.17f} {exact.binding:12.5e}")

# Muonium-like mass ratio: binding energy against its series.
mu = PhysicalSystem(1.0, 206.768, ALPHA)
print("\nmass ratio 206.768: binding energy and partial sums of its series")
for n in (1, 2):
    B = solve_level(mu, n).binding
    series = binding_series(mu, n)
    sums = "  ".join(f"{p:.15e}" for p in series.partial_sums)
    print(f"n={n}: B={B:.15e}\n     partial sums: {sums}")

# The truncation error of the three-term sum falls with the eighth power of alpha.
print("\ntruncation error of the three-term series, m=1, M=2, n=1")
for alpha in (0.08, 0.04, 0.02):
    system = PhysicalSystem(1.0, 2.0, alpha)
    err = abs(solve_level(system, 1).binding - binding_series(system, 1).partial_sums[-1])
    print(f"alpha={alpha:<5} error={err:.3e}")

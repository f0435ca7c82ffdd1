"""Derived device parameters of the hybrid setup.

Walks from the raw cantilever numbers (spring constant, moment of inertia,
temperature) to everything the dynamics needs: torsional frequency,
zero-point angle, thermal occupation, and the two coupling rates.
"""

import math

from torsionbus import (
    derive_mechanics,
    paper_cantilever,
    paper_couplings,
    spin_torsion_coupling,
    to_simulation_units,
)

cant = paper_cantilever()
mech = derive_mechanics(cant)

print("torsional cantilever")
print(f"  spring constant     K = {cant.torsional_spring_constant:.2e} N*m/rad")
print(f"  moment of inertia   I = {cant.moment_of_inertia:.2e} kg*m^2")
print(f"  temperature         T = {cant.temperature * 1e3:.0f} mK")
print(f"  resonance           omega_m/2pi = {mech.omega_m / (2 * math.pi) / 1e6:.2f} MHz")
print(f"  zero-point angle    theta_zpf = {mech.theta_zpf:.2e} rad")
print(f"  zero-point momentum L_zpf = {mech.angular_momentum_zpf:.2e} J*s")
print(f"  thermal occupation  n_th = {mech.n_th:.1f}")

# magnetic spin-torsion coupling for a nanomagnet field of 80 mT at the NV
lam = spin_torsion_coupling(80.0, mech.theta_zpf, mixing_angle=0.0)
print(f"\nspin-torsion coupling from the direct product: {lam / 1e3:.1f} kHz")
print("(the device estimate 2pi x 200 kHz is taken as an independent input)")

sim = to_simulation_units(paper_couplings())
print("\nsimulation units (hbar = 1, g0 = 1, time in 1/g0):")
for name in ("lambda_e", "Gamma1", "Gamma2", "gamma_m", "gamma_s"):
    print(f"  {name:8s} = {getattr(sim, name):g}")
print(f"  1/g0 = {1e6 / paper_couplings().g0:.2f} us of wall-clock time")

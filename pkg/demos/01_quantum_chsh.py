"""
Quantum correlations of a polarization-entangled pair
=====================================================

Two photons in |phi+> = (|HH> + |VV>)/sqrt(2), each sent through a linear
polarizer. The correlation only depends on the angle difference, and the
CHSH combination reaches 2 sqrt(2) at the standard settings.
"""

import math

import numpy as np

from aspectlab import CHSH_SETTINGS, bell_state, correlation, standard_aspect_quartet
from aspectlab.inequalities import quartet_bell_lhs

rho = bell_state("phi_plus")
print("purity of phi+:", rho.purity())

# E(t1, t2) = cos 2(t1 - t2)
for delta_deg in (0, 22.5, 45, 67.5, 90):
    d = math.radians(delta_deg)
    print(f"E(0, {delta_deg:5.1f} deg) = {round(correlation(rho, 0.0, -d), 12) + 0.0:+.6f}   cos 2d = {math.cos(2 * d):+.6f}")

s = CHSH_SETTINGS
print("\nsettings (deg):", np.degrees(list(s)))
q = standard_aspect_quartet(s, rho)
for pair, b in q.items():
    print(pair, b.table.round(4).tolist(), "E =", round(b.correlation(), 6))
print("bell lhs:", quartet_bell_lhs(q), " 2 sqrt 2 =", 2 * math.sqrt(2))

# a reduced photon of phi+ is completely unpolarized
print("reduced state of photon 1:\n", rho.reduced(1).matrix.real)

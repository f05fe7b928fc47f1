"""
Bell's inequality and its probability form
==========================================

A finite ensemble of particle pairs with possessed values can never beat 2.
The outcome-probability form comes in eight variants; all of them hold
exactly when the four measured tables have a common joint.
"""

import itertools

import numpy as np

from aspectlab import bchs_all_variants, finite_ensemble_chsh, standard_aspect_quartet
from aspectlab.ensembles import pr_box_quartet
from aspectlab.inequalities import bchs_variants

types = np.array(list(itertools.product((1, -1), repeat=4)))
print("bell lhs of each value quadruple (a1, b1, a2, b2):")
for t in types:
    print(" ", t, finite_ensemble_chsh(t))

rng = np.random.default_rng(1)
ens = types[rng.integers(0, 16, 1000)]
print("random ensemble of 1000 pairs:", finite_ensemble_chsh(ens))

print("\nthe eight variants:")
for v in bchs_variants():
    print(f"  [{v.index}] {v.label()}")

for name, q in (("quantum optimum", standard_aspect_quartet()), ("PR box", pr_box_quartet())):
    r = bchs_all_variants(q)
    print(f"\n{name}: values {np.round(r.values, 4)}")
    print(f"  worst low {r.worst_low:.4f}, worst high {r.worst_high:.4f}, satisfied {r.satisfied}")

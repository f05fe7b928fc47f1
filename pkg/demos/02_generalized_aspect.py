"""
The generalized Aspect experiment
=================================

Each arm has a beam splitter of transmissivity gamma in front of two
polarizers. A photon transmitted by the splitter tests direction theta, a
reflected one tests theta'. Only one detector can fire, so the arm
measures A and B jointly but non-ideally, as a POVM.
"""

import numpy as np

from aspectlab import ArmConfig, ExperimentConfig, arm_povm, pair_povm, quad_probabilities
from aspectlab.povm import arm_probabilities, standard_aspect_configs
from aspectlab.quantum import DensityMatrix

arm = ArmConfig(gamma=0.3, theta=0.0, theta_prime=np.pi / 4)
R = arm_povm(arm)
print("sum of arm POVM elements:\n", R.total().real)
print("smallest eigenvalue:", R.min_eigenvalue())

# single photon polarized at 30 degrees
v = np.array([np.cos(np.pi / 6), np.sin(np.pi / 6)])
rho1 = DensityMatrix(np.outer(v, v))
print("\narm table p[a, b] (index 0 is +):\n", arm_probabilities(rho1, arm).round(6))

# the pair POVM is the tensor product of the two arms
cfg = ExperimentConfig.from_angles(0.5, 0.5)
P = pair_povm(cfg)
R1, R2 = arm_povm(cfg.arm1), arm_povm(cfg.arm2)
err = max(np.abs(P[i, j, k, l] - np.kron(R1[i, j], R2[k, l])).max() for i in (0, 1) for j in (0, 1) for k in (0, 1) for l in (0, 1))
print("\nfactorization error:", err)

quad = quad_probabilities(cfg)
print("quadrivariate table at gamma = 1/2, sum =", quad.atoms.sum())
for pair in ("A1A2", "A1B2", "B1A2", "B1B2"):
    print(" ", pair, quad.marginal(pair).table.round(4).tolist())

# gamma in {0, 1} recovers the four standard experiments, each a different quad
for pair, c in standard_aspect_configs().items():
    print(pair, "measured pair table:", quad_probabilities(c).marginal(pair).table.round(4).tolist())

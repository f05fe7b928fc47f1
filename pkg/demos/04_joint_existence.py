"""
Does a joint distribution exist?
================================

Four pair tables come from a single distribution over (a1, b1, a2, b2)
exactly when a 16-atom linear feasibility problem has a solution. The
answer always agrees with the inequality check. Mixing a PR box with
uniform noise crosses the boundary at weight 1/2.
"""

import numpy as np

from aspectlab import joint_exists
from aspectlab.distributions import PAIRS, BivariateDistribution, ExperimentQuartet, QuadrivariateDistribution
from aspectlab.ensembles import pr_box_quartet
from aspectlab.joint import fine_equivalence
from aspectlab.povm import standard_aspect_quartet

res = joint_exists(standard_aspect_quartet())
print("quantum optimum:", res.status)
print("  certificate:", res.certificate.label, "=", round(res.certificate.value, 6))

uniform = QuadrivariateDistribution.uniform().quartet()
pr = pr_box_quartet()
for v in (0.3, 0.45, 0.5, 0.5 + 1e-6, 0.6, 1.0):
    q = ExperimentQuartet.from_mapping(
        {p: BivariateDistribution.normalized(v * pr[p].table + (1 - v) * uniform[p].table) for p in PAIRS}
    )
    r = joint_exists(q)
    print(f"PR weight {v:<10} {r.status:<10} infeasibility {r.infeasibility:.2e}  agrees {fine_equivalence(q)}")

# a feasible witness reproduces the tables
q = QuadrivariateDistribution.from_atoms(np.random.default_rng(3).dirichlet(np.ones(16))).quartet()
w = joint_exists(q).witness
print("\nwitness marginal error:", np.abs(w.quartet().as_array() - q.as_array()).max())

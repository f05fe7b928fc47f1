"""
Outcomes conditioned on a context-dependent macrostate
======================================================

When each measurement context relaxes the hidden variable to its own
equilibrium occupation, the quantum statistics can be reproduced exactly.
The four contexts then share no joint distribution, and assigning fixed
values across contexts fails in most rounds.
"""

from aspectlab import attempt_quad_construction, bell_state, macro_quartet, quantum_target_model
from aspectlab.hidden import sawtooth_model
from aspectlab.inequalities import quartet_bell_lhs
from aspectlab.macro import context_independent_model, contextual_values_demo
from aspectlab.povm import quad_probabilities, standard_aspect_configs

target = quantum_target_model(bell_state())
q = macro_quartet(target)
print("macrostate model bell lhs:", quartet_bell_lhs(q))
res = attempt_quad_construction(target)
print("joint construction:", res.status, "via", res.method)
print("  certificate:", res.certificate.label, "=", round(res.certificate.value, 6))

plain = context_independent_model(sawtooth_model(360))
res = attempt_quad_construction(plain)
print("\ncontext-independent model:", res.status, "via", res.method, "bell lhs", quartet_bell_lhs(macro_quartet(plain)))

quads = {p: quad_probabilities(c) for p, c in standard_aspect_configs().items()}
rep = contextual_values_demo(quads, rounds=10_000, seed=0)
print("\nvalue assignment across the four standard experiments:")
print("  consistent fraction  ", rep.consistent_fraction)
print("  measured CHSH        ", rep.measured_chsh)
print("  CHSH on consistent   ", rep.consistent_chsh)

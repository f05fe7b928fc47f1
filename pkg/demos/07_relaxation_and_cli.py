"""
Relaxation time and the measurement window
==========================================

The macrostate needs time to settle. A measurement window much shorter than
the relaxation time tau sees the prepared distribution and stays local; a
window much longer than tau sees the context's equilibrium and reproduces
2 sqrt 2. The same sweep is available from the command line.
"""

from aspectlab.cli import main
from aspectlab.relax import RelaxationParams, crossing_window, relaxation_sweep

params = RelaxationParams(tau=1.0, n_samples=100_000, seed=0)
curve = relaxation_sweep(params)
print(f"{'window/tau':>10} {'chsh':>8} {'sigma':>7}")
for ratio, chsh, sigma in curve.rows():
    print(f"{ratio:10.3g} {chsh:8.4f} {sigma:7.4f}")
print("equilibrium:", curve.equilibrium_chsh)
print("first window clearly above 2:", crossing_window(curve))

# the same run through the command line, as CSV
main(["relax-sweep", "--samples", "20000", "--windows", "0,1,100", "--seed", "0"])

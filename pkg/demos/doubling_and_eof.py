"""The doubling map: single-system entanglement as entanglement of formation.

Doubling embeds a d x d state into the diagonal class of a d x d bipartite
system; the diagonal-subalgebra entanglement of the small state equals the
entanglement of formation of its double.  Isotropic states and the
two-component embeddings connect the same machinery to the bipartite
family with a known separability threshold at F = 1/d.
"""

import math

import numpy as np

from subent import (
    OptimizerConfig,
    SubalgebraSpec,
    doubling,
    embed,
    eof,
    f_double_star,
    isotropic,
    maximally_entangled,
    minimize_objective,
    overlap,
    perm_symmetric_state,
    permutation_average,
    undouble,
)
from subent.bipartite import lift_vector
from subent.symmetric import orbit_vector

print("doubling round trip and value preservation")
cfg = OptimizerConfig(length=4, restarts=16, seed=3)
for F in (0.2, 0.5, 8 / 9):
    rho = perm_symmetric_state(3, F)
    direct = minimize_objective(rho, SubalgebraSpec.diagonal(), cfg).value
    doubled = doubling(rho)
    lifted = eof(doubled, cfg, restricted=True).value
    back = np.max(np.abs(undouble(doubled).entries - rho.entries))
    print(f"  F={F:.6f}  direct={direct:.9f}  eof(double)={lifted:.9f}  round-trip dev={back:.1e}")

print("\npermutation average reproduces the doubled family")
for F in (0.3, 0.7):
    w = orbit_vector(F, 0.0)
    averaged = permutation_average(lift_vector(w))
    target = doubling(perm_symmetric_state(3, F))
    dev = np.max(np.abs(averaged.state.entries - target.state.entries))
    print(f"  F={F:.2f}  max dev {dev:.2e}")

print("\nisotropic states: entanglement of formation across the threshold")
psi = maximally_entangled(2)
for F in (0.25, 0.5, 0.75, 1.0):
    res = eof(isotropic(2, F), OptimizerConfig(length=4, restarts=16, seed=0, tol=1e-8))
    print(f"  d=2, F={F:.2f}  eof={res.value:.6e}")
print("  (zero at and below F = 1/2, positive above)")

print("\nembeddings of the two-level leaves")
w1 = embed(1 / math.sqrt(3), math.sqrt(2 / 3), 2)
w2 = embed(math.sqrt(2 / 3), 1 / math.sqrt(3), 2)
psi3 = maximally_entangled(3)
print(f"  balanced embedding fidelity : {overlap(w1.projector(), psi3):.9f}")
print(f"  partner embedding fidelity  : {overlap(w2.projector(), psi3):.9f}  (= 8/9)")
for n in (3, 4, 5):
    print(f"  local dimension {n}: orbit decompositions stop being optimal above "
          f"F** = {f_double_star(n):.6f}")

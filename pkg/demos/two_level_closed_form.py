"""Two-level states: closed-form optimal decompositions vs the optimizer.

For a 2x2 state [[a, b], [b*, 1-a]] restricted to the diagonal subalgebra
the minimal ensemble entropy is known exactly.  This script evaluates the
closed form, cross-checks it with the multistart simplex optimizer, and
shows the optimal pair of decomposers.
"""

import numpy as np

from subent import (
    OptimizerConfig,
    SubalgebraSpec,
    case1_optimal,
    case1_symmetric_entanglement,
    minimize_objective,
    reconstruct,
    validate_density,
)

DIAG = SubalgebraSpec.diagonal()

print("single state a=0.5, b=0.25")
best = case1_optimal(0.5, 0.25)
print(f"  closed-form value : {best.entanglement:.9f}")
print(f"  weights           : {best.weight:.6f}, {1 - best.weight:.6f}")
for k, vec in enumerate(best.decomposition.vectors):
    print(f"  decomposer {k}      : {np.round(vec, 6)}")

rho = validate_density(np.array([[0.5, 0.25], [0.25, 0.5]]))
result = minimize_objective(rho, DIAG, OptimizerConfig(length=4, restarts=16, seed=0))
print(f"  optimizer value   : {result.value:.9f}   (spread over restarts {result.restart_spread:.2e})")
print(f"  reconstruction    : max dev {np.max(np.abs(reconstruct(result.decomposition).entries - rho.entries)):.2e}")

print("\nrandom states, optimizer vs closed form")
rng = np.random.default_rng(1)
worst = 0.0
for _ in range(10):
    a = rng.uniform(0.1, 0.9)
    b = rng.uniform(0, np.sqrt(a * (1 - a))) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    closed = case1_optimal(a, b).entanglement
    numeric = minimize_objective(
        validate_density(np.array([[a, b], [np.conj(b), 1 - a]])),
        DIAG,
        OptimizerConfig(length=4, restarts=16, seed=7),
    ).value
    worst = max(worst, abs(numeric - closed))
    print(f"  a={a:.3f} |b|={abs(b):.3f}  closed={closed:.9f}  numeric={numeric:.9f}")
print(f"worst deviation: {worst:.2e}")

print("\npermutation-invariant slice (a = 1/2, real b): value as a function of fidelity")
for F in (0.5, 0.6, 0.75, 0.9, 1.0):
    print(f"  F={F:.2f}  E={case1_symmetric_entanglement(F):.9f}")

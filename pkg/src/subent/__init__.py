"""Entanglement of a state with respect to a subalgebra.

Library for computing convex-roof entanglement measures of small quantum
states: the ensemble-entropy minimum over decompositions for a diagonal
subalgebra or a tensor factor (entanglement of formation), together with
the closed forms, orbit scans, bifurcation finders, and doubling-map
constructions available for permutation-invariant and isotropic states.
"""

from .bipartite import (
    BipartiteState,
    doubling,
    embed,
    eof,
    f_double_star,
    isotropic,
    lift_decomposition,
    lift_vector,
    maximally_entangled,
    permutation_average,
    undouble,
)
from .decomp import (
    ExtremalDecomposition,
    MixedDecomposition,
    decomposition_from_json,
    decomposition_to_json,
    entropy_of_subalgebra,
    mixer_ensemble,
    objective,
    povm_decomposition,
    reconstruct,
)
from .errors import SubentError
from .optimizer import (
    OptimizationResult,
    OptimizerConfig,
    ThetaProfile,
    convexity_profile,
    find_bifurcation,
    minimize_objective,
    mixer_from_angles,
    orbit_objective,
    s_of_f,
    theta_scan,
)
from .qstate import (
    DensityMatrix,
    ProbabilityVector,
    StateVector,
    SubalgebraSpec,
    overlap,
    restrict,
    shannon_term,
    state_from_json,
    state_to_json,
    validate_density,
    von_neumann_entropy,
)
from .symmetric import (
    F_STAR,
    Case1Optimal,
    OrbitClass,
    PermutationAction,
    case1_optimal,
    case1_symmetric_entanglement,
    case2_entanglement,
    classify_components,
    cyclic_orbit_decomposition,
    orbit_vector,
    perm_symmetric_state,
    permute_decomposition,
    prop23_entanglement,
    x_to_fidelity,
)

__version__ = "0.1.0"

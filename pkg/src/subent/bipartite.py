"""Doubling map, isotropic states, entanglement of formation, embeddings.

The doubling map sends a d x d state with entries R_jk to the bipartite
state sum_jk R_jk |jj><kk| supported on the diagonal class.  It carries
the diagonal-subalgebra entanglement of the small state to the
entanglement of formation of its double, which is how the single-system
closed forms transfer to isotropic-state results.  Basis convention for
C^d (x) C^d throughout: |j> (x) |k| maps to index j*d + k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .decomp import ExtremalDecomposition, eigen_ensemble
from .errors import (
    DimensionMismatch,
    DimensionTooSmall,
    FOutOfRange,
    NotInDiagonalClass,
    NotNormalized,
)
from .optimizer import OptimizationResult, OptimizerConfig, minimize_objective
from .qstate import (
    DensityMatrix,
    StateVector,
    SubalgebraSpec,
    _readonly,
    as_matrix,
    validate_density,
)

DIAGONAL_CLASS_ATOL = 1e-10


@dataclass(frozen=True)
class BipartiteState:
    """State on C^d (x) C^d with the j*d+k index convention."""

    local_dim: int
    state: DensityMatrix

    def __post_init__(self):
        if self.state.dim != self.local_dim**2:
            raise DimensionMismatch(
                f"state dim {self.state.dim} is not local_dim^2 = {self.local_dim ** 2}"
            )

    @property
    def dim(self) -> int:
        return self.state.dim

    def factor_spec(self) -> SubalgebraSpec:
        return SubalgebraSpec.factor(self.local_dim, self.local_dim)


def _as_bipartite(rho, local_dim: int | None = None) -> BipartiteState:
    if isinstance(rho, BipartiteState):
        return rho
    dm = validate_density(rho)
    d = local_dim or math.isqrt(dm.dim)
    return BipartiteState(d, dm)


def doubling(rho_a) -> BipartiteState:
    """Embed entries R_jk at the diagonal-class positions |jj><kk|."""
    m = as_matrix(rho_a)
    d = m.shape[0]
    out = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d):
        for k in range(d):
            out[j * d + j, k * d + k] = m[j, k]
    return BipartiteState(d, validate_density(out))


def undouble(rho_ab) -> DensityMatrix:
    """Invert the doubling map on the diagonal class.

    Raises NotInDiagonalClass when any entry off the |jj><kk| positions
    has modulus above 1e-10.
    """
    bi = _as_bipartite(rho_ab)
    d = bi.local_dim
    m = bi.state.entries
    mask = np.ones((d * d, d * d), dtype=bool)
    diag_idx = np.arange(d) * d + np.arange(d)
    mask[np.ix_(diag_idx, diag_idx)] = False
    worst = float(np.max(np.abs(m[mask]))) if mask.any() else 0.0
    if worst > DIAGONAL_CLASS_ATOL:
        raise NotInDiagonalClass(
            f"entry of modulus {worst:.3e} outside the diagonal class"
        )
    return validate_density(m[np.ix_(diag_idx, diag_idx)])


def is_diagonal_class(rho_ab, atol: float = DIAGONAL_CLASS_ATOL) -> bool:
    try:
        undouble(rho_ab)
    except NotInDiagonalClass:
        return False
    return True


def maximally_entangled(d: int) -> StateVector:
    """(1/sqrt(d)) sum_j |jj>."""
    if d < 2:
        raise DimensionTooSmall("need local dimension >= 2")
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * d + np.arange(d)] = 1 / math.sqrt(d)
    return StateVector(v)


def isotropic(d: int, F: float) -> BipartiteState:
    """The twirl-invariant family ((1-F)/(d^2-1))(1 - P) + F P."""
    if F < -1e-12 or F > 1 + 1e-12:
        raise FOutOfRange(f"fidelity {F!r} outside [0, 1]")
    F = min(max(float(F), 0.0), 1.0)
    psi = maximally_entangled(d).amplitudes
    proj = np.outer(psi, psi.conj())
    m = (1 - F) / (d * d - 1) * (np.eye(d * d) - proj) + F * proj
    return BipartiteState(d, validate_density(m))


def eof(rho_ab, cfg: OptimizerConfig | None = None, restricted: bool = False) -> OptimizationResult:
    """Entanglement of formation by minimization over decompositions.

    This is minimize_objective with the first tensor factor as the
    restriction.  With restricted=True the state must lie in the diagonal
    class; decomposers then automatically stay in that class (every
    decomposer lives in the range of the state), so the flag just
    validates membership and defaults the ensemble length to the rank,
    which collapses the search space.
    """
    bi = _as_bipartite(rho_ab)
    if restricted:
        undouble(bi)  # raises NotInDiagonalClass if unsupported entries exist
        if cfg is None or not cfg.length:
            mu, _ = eigen_ensemble(bi.state)
            base = cfg or OptimizerConfig()
            cfg = OptimizerConfig(
                length=len(mu), restarts=base.restarts, seed=base.seed,
                tol=base.tol, max_iters=base.max_iters,
            )
    return minimize_objective(bi.state, bi.factor_spec(), cfg)


def embed(z1: complex, z2: complex, n: int) -> StateVector:
    """Lift a two-component unit vector into the diagonal class of C^(n+1) x C^(n+1).

    The image is z1|00> + (z2/sqrt(n)) sum_{j=1..n} |jj>.  Pairs (z1, z2)
    and (z2*, z1*) lift to an optimal pair for the entanglement of
    formation.
    """
    if n < 2:
        raise DimensionTooSmall(f"n = {n} must be >= 2")
    z1, z2 = complex(z1), complex(z2)
    norm = abs(z1) ** 2 + abs(z2) ** 2
    if abs(norm - 1.0) > 1e-12:
        raise NotNormalized(f"|z1|^2 + |z2|^2 = {norm!r}")
    d = n + 1
    v = np.zeros(d * d, dtype=complex)
    v[0] = z1
    for j in range(1, d):
        v[j * d + j] = z2 / math.sqrt(n)
    return StateVector(v)


def f_double_star(n: int) -> float:
    """Fidelity above which orbit decompositions stop being optimal (local dim n)."""
    if n < 3:
        raise DimensionTooSmall(f"local dimension {n} must be >= 3")
    return 4 * (n - 1) / n**2


def permutation_average(phi) -> BipartiteState:
    """Average of |phi><phi| over simultaneous basis permutations U (x) U."""
    v = phi.amplitudes if isinstance(phi, StateVector) else np.asarray(phi, dtype=complex).ravel()
    d = math.isqrt(v.shape[0])
    if d * d != v.shape[0]:
        raise DimensionMismatch(f"vector length {v.shape[0]} is not a square")
    if d > 5:
        raise DimensionMismatch(f"permutation average enumerates d! terms; d = {d} > 5 rejected")
    proj = np.outer(v, v.conj())
    acc = np.zeros_like(proj)
    count = 0
    for perm in permutations(range(d)):
        p = np.zeros((d, d))
        for j, pj in enumerate(perm):
            p[pj, j] = 1.0
        u = np.kron(p, p)
        acc += u.T @ proj @ u
        count += 1
    return BipartiteState(d, validate_density(acc / count))


def lift_vector(w) -> StateVector:
    """Send components c_j to the diagonal-class vector sum_j c_j |jj>."""
    c = w.amplitudes if isinstance(w, StateVector) else np.asarray(w, dtype=complex).ravel()
    d = c.shape[0]
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * d + np.arange(d)] = c
    return StateVector(v)


def lift_decomposition(dec: ExtremalDecomposition) -> ExtremalDecomposition:
    """Doubling of every decomposer; reconstructs the doubled state."""
    vectors = np.array([lift_vector(row).amplitudes for row in dec.vectors])
    return ExtremalDecomposition(dec.weights.copy(), vectors)

"""Convex decompositions of states and the ensemble-entropy objective.

A state rho admits many convex decompositions rho = sum_j w_j pi_j.  The
quantity minimized throughout the package is the weighted sum of the
entropies of the restricted decomposers,

    sum_j w_j S(pi_j | sub),

whose infimum over all decompositions is the entanglement of rho with
respect to the subalgebra.  Extremal (pure) decompositions of a fixed
state are generated from isometric "mixer" matrices acting on the
eigen-ensemble; POVMs generate general mixed decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidDecomposition,
    InvalidPOVM,
    NotIsometry,
    RankMismatch,
)
from .qstate import (
    DensityMatrix,
    StateVector,
    SubalgebraSpec,
    _readonly,
    as_matrix,
    restrict,
    shannon_entropy,
    validate_density,
    von_neumann_entropy,
)

WEIGHT_PRUNE = 1e-14
RANK_CUTOFF = 1e-12


@dataclass(frozen=True)
class ExtremalDecomposition:
    """Positive weights and unit vectors with sum_j w_j |v_j><v_j| = rho."""

    weights: np.ndarray   # (n,) real, all > 0, sums to 1
    vectors: np.ndarray   # (n, d) complex, unit rows

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != w.shape[0]:
            raise DimensionMismatch(
                f"{w.shape[0]} weights vs vectors of shape {v.shape}"
            )
        if w.shape[0] > v.shape[1] ** 2:
            raise DimensionMismatch(
                f"length {w.shape[0]} exceeds the bound {v.shape[1] ** 2}"
            )
        if np.any(w <= 0):
            raise InvalidDecomposition(f"weights must be positive, got min {w.min()}")
        if abs(w.sum() - 1.0) > 1e-10:
            raise InvalidDecomposition(f"weights sum to {w.sum()!r}")
        norms = np.linalg.norm(v, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            raise NotIsometry("decomposers are not unit vectors")
        object.__setattr__(self, "weights", _readonly_f(w))
        object.__setattr__(self, "vectors", _readonly(v))

    @property
    def length(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def decomposers(self) -> list[StateVector]:
        return [StateVector(row) for row in self.vectors]


@dataclass(frozen=True)
class MixedDecomposition:
    """Positive weights and density-matrix components."""

    weights: np.ndarray
    components: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        comps = tuple(validate_density(c) for c in self.components)
        if len(comps) != w.shape[0]:
            raise DimensionMismatch(f"{w.shape[0]} weights vs {len(comps)} components")
        if np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-10:
            raise InvalidDecomposition("weights must be positive and sum to 1")
        dims = {c.dim for c in comps}
        if len(dims) > 1:
            raise DimensionMismatch(f"mixed component dimensions {dims}")
        object.__setattr__(self, "weights", _readonly_f(w))
        object.__setattr__(self, "components", comps)

    @property
    def length(self) -> int:
        return self.weights.shape[0]


def _readonly_f(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def reconstruct(dec) -> DensityMatrix:
    """Weighted sum of the decomposition back into a density matrix."""
    if isinstance(dec, ExtremalDecomposition):
        m = np.einsum("j,ji,jk->ik", dec.weights, dec.vectors, dec.vectors.conj())
    elif isinstance(dec, MixedDecomposition):
        m = sum(w * c.entries for w, c in zip(dec.weights, dec.components))
    else:
        raise TypeError(f"not a decomposition: {type(dec).__name__}")
    return validate_density(m)


def objective(dec, sub: SubalgebraSpec) -> float:
    """Ensemble entropy sum_j w_j S(component_j restricted to sub)."""
    if isinstance(dec, ExtremalDecomposition):
        total = 0.0
        for w, v in zip(dec.weights, dec.vectors):
            if sub.kind == "diagonal":
                total += w * shannon_entropy(np.abs(v) ** 2)
            else:
                sub.check_dim(v.shape[0])
                a = v.reshape(sub.d_a, sub.d_b)
                sv = np.linalg.svd(a, compute_uv=False)
                total += w * shannon_entropy(sv**2)
        return float(total)
    if isinstance(dec, MixedDecomposition):
        return float(
            sum(w * von_neumann_entropy(restrict(c, sub))
                for w, c in zip(dec.weights, dec.components))
        )
    raise TypeError(f"not a decomposition: {type(dec).__name__}")


def eigen_ensemble(rho, cutoff: float = RANK_CUTOFF):
    """Eigenvalues above cutoff and matching eigenvectors of a state.

    Returns (mu, vecs) with vecs of shape (d, r); the numerical rank r is
    the number of eigenvalues above the cutoff.
    """
    m = as_matrix(rho)
    evals, evecs = np.linalg.eigh(m)
    keep = evals > cutoff
    return evals[keep], evecs[:, keep]


def mixer_ensemble(rho, mixer) -> ExtremalDecomposition:
    """Decomposition generated by an isometric mixer on the eigen-ensemble.

    For a rank-r state and an n x r matrix with orthonormal columns the
    unnormalized vectors u_j = sum_k mixer[j,k] sqrt(mu_k) e_k define an
    extremal decomposition with weights |u_j|^2; rows with weight below
    1e-14 are dropped.  Every extremal decomposition of rho arises this
    way, which is what the optimizer exploits.
    """
    mu, vecs = eigen_ensemble(rho)
    r = len(mu)
    m = np.asarray(mixer, dtype=complex)
    if m.ndim != 2 or m.shape[1] != r:
        raise RankMismatch(f"mixer shape {m.shape} does not match state rank {r}")
    if m.shape[0] < r:
        raise RankMismatch(f"mixer must have at least rank={r} rows, got {m.shape[0]}")
    gram = m.conj().T @ m
    if np.max(np.abs(gram - np.eye(r))) > 1e-10:
        raise NotIsometry("mixer columns are not orthonormal to 1e-10")
    u = (vecs * np.sqrt(mu)) @ m.T          # d x n, column j = u_j
    weights = np.sum(np.abs(u) ** 2, axis=0)
    keep = weights > WEIGHT_PRUNE
    u, weights = u[:, keep], weights[keep]
    vectors = (u / np.sqrt(weights)).T
    weights = weights / weights.sum()
    return ExtremalDecomposition(weights, vectors)


def povm_decomposition(rho, povm) -> MixedDecomposition:
    """Decomposition rho = sum_j Tr(rho M_j) * sqrt(rho) M_j sqrt(rho) / Tr(rho M_j).

    The POVM elements must be positive semidefinite and sum to the
    identity; elements of weight below 1e-14 are dropped.  Running over
    all POVMs exhausts all convex decompositions of rho.
    """
    m = as_matrix(rho)
    d = m.shape[0]
    elements = [np.asarray(e, dtype=complex) for e in povm]
    total = np.zeros((d, d), dtype=complex)
    for e in elements:
        if e.shape != (d, d):
            raise InvalidPOVM(f"element shape {e.shape}, expected {(d, d)}")
        if np.max(np.abs(e - e.conj().T)) > 1e-10:
            raise InvalidPOVM("POVM element is not Hermitian")
        if np.linalg.eigvalsh(e)[0] < -1e-10:
            raise InvalidPOVM("POVM element is not positive semidefinite")
        total += e
    if np.max(np.abs(total - np.eye(d))) > 1e-10:
        raise InvalidPOVM("POVM elements do not sum to the identity")

    evals, evecs = np.linalg.eigh(m)
    sqrt_rho = (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T
    weights, comps = [], []
    for e in elements:
        w = float(np.real(np.trace(m @ e)))
        if w < WEIGHT_PRUNE:
            continue
        comp = sqrt_rho @ e @ sqrt_rho / w
        comp = (comp + comp.conj().T) / 2
        weights.append(w)
        comps.append(validate_density(comp / np.real(np.trace(comp))))
    weights = np.asarray(weights)
    return MixedDecomposition(weights / weights.sum(), tuple(comps))


def entropy_of_subalgebra(rho, sub: SubalgebraSpec, cfg=None) -> float:
    """S(rho|sub) minus the minimized ensemble entropy; nonnegative."""
    from .optimizer import minimize_objective

    rho = validate_density(rho)
    base = von_neumann_entropy(restrict(rho, sub))
    result = minimize_objective(rho, sub, cfg)
    return base - result.value


def decomposition_to_json(dec: ExtremalDecomposition) -> dict:
    """JSON form {"weights": [...], "vectors": [[[re, im], ...], ...]}."""
    return {
        "weights": [float(w) for w in dec.weights],
        "vectors": [
            [[float(z.real), float(z.imag)] for z in row] for row in dec.vectors
        ],
    }


def decomposition_from_json(obj: dict) -> ExtremalDecomposition:
    weights = np.asarray(obj["weights"], dtype=float)
    vectors = np.array(
        [[complex(re, im) for re, im in row] for row in obj["vectors"]]
    )
    return ExtremalDecomposition(weights, vectors)

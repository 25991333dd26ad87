"""Permutation-invariant states, orbit decompositions, and closed forms.

The one-parameter family of permutation-invariant d x d states is
parametrized by the fidelity F with the uniform vector.  For d = 2 the
minimal ensemble entropy over decompositions is known in closed form for
every state; for d = 3 it is known on a fidelity window bounded below by
a symmetry-breaking bifurcation and above by the point where cyclic-orbit
decompositions stop being optimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decomp import ExtremalDecomposition
from .errors import (
    DimensionMismatch,
    FOutOfDomain,
    FOutOfRange,
    InvalidBlochParams,
    MoreThanThreeValues,
    NotRealizable,
    XOutOfRange,
)
from .qstate import DensityMatrix, StateVector, _readonly, shannon_term, validate_density

RANGE_ATOL = 1e-12

# Default bifurcation fidelity for d = 3 domain checks; recompute with
# optimizer.find_bifurcation when accuracy beyond ~1e-6 matters.
F_STAR = (2 * (-0.4150234) + 1) / 3   # 0.0566511

# Fidelity above which cyclic-orbit decompositions are no longer optimal
# for d = 3 (see bipartite.f_double_star for general dimension).
F_DOUBLE_STAR = 8 / 9


def _check_fidelity(F: float) -> float:
    if F < -RANGE_ATOL or F > 1 + RANGE_ATOL:
        raise FOutOfRange(f"fidelity {F!r} outside [0, 1]")
    return min(max(float(F), 0.0), 1.0)


def x_to_fidelity(d: int, x: float) -> float:
    """Fidelity of the permutation-invariant state with off-diagonal x/d."""
    if x < -1.0 / (d - 1) - RANGE_ATOL or x > 1 + RANGE_ATOL:
        raise XOutOfRange(f"x = {x!r} outside [-1/{d - 1}, 1]")
    return (1 + (d - 1) * x) / d


def fidelity_to_x(d: int, F: float) -> float:
    return (d * _check_fidelity(F) - 1) / (d - 1)


def uniform_vector(d: int) -> StateVector:
    return StateVector(np.full(d, 1 / math.sqrt(d), dtype=complex))


def perm_symmetric_state(d: int, F: float) -> DensityMatrix:
    """Permutation-invariant state with <psi|rho|psi> = F, psi uniform."""
    if d < 2:
        raise DimensionMismatch("need dimension >= 2")
    F = _check_fidelity(F)
    x = fidelity_to_x(d, F)
    m = np.full((d, d), x / d, dtype=complex)
    np.fill_diagonal(m, 1.0 / d)
    return validate_density(m)


def case1_symmetric_entanglement(F: float) -> float:
    """Minimal ensemble entropy for the permutation-invariant 2x2 state."""
    F = _check_fidelity(F)
    root = 2 * math.sqrt(F * (1 - F))
    return shannon_term((1 + root) / 2) + shannon_term((1 - root) / 2)


@dataclass(frozen=True)
class Case1Optimal:
    entanglement: float
    decomposition: ExtremalDecomposition
    weight: float               # weight of the first decomposer


def case1_optimal(a: float, b: complex) -> Case1Optimal:
    """Optimal decomposition of the 2x2 state [[a, b], [b*, 1-a]].

    The two decomposers (z1, z2) and (z2*, z1*) are fixed by
    |z1|^2 = (1 + sqrt(1 - 4|b|^2))/2 and z1 z2* = b; the weight of the
    first is (1 + (2a-1)/sqrt(1 - 4|b|^2))/2.  When |b| = 1/2 the state is
    pure and the decomposition collapses to a single vector.
    """
    b = complex(b)
    if a < -RANGE_ATOL or a > 1 + RANGE_ATOL:
        raise InvalidBlochParams(f"a = {a!r} outside [0, 1]")
    a = min(max(float(a), 0.0), 1.0)
    if abs(b) ** 2 > a * (1 - a) + 1e-12:
        raise InvalidBlochParams(f"|b|^2 = {abs(b) ** 2!r} exceeds a(1-a) = {a * (1 - a)!r}")

    disc = max(1.0 - 4.0 * abs(b) ** 2, 0.0)
    root = math.sqrt(disc)
    z1_sq = (1 + root) / 2
    z2_sq = 1 - z1_sq
    value = shannon_term(z1_sq) + shannon_term(z2_sq)

    z1 = math.sqrt(z1_sq)
    z2 = b.conjugate() / z1 if z1 > 0 else 0.0
    w1 = np.array([z1, z2], dtype=complex)
    w2 = np.array([np.conj(z2), np.conj(z1)], dtype=complex)

    if root < 1e-12:
        # pure state: both decomposers coincide (up to phase)
        lam = a
        dec = ExtremalDecomposition(np.array([1.0]), w1[None, :])
        return Case1Optimal(value, dec, lam)

    lam = (1 + (2 * a - 1) / root) / 2
    if lam <= 1e-14:
        dec = ExtremalDecomposition(np.array([1.0]), w2[None, :])
    elif lam >= 1 - 1e-14:
        dec = ExtremalDecomposition(np.array([1.0]), w1[None, :])
    else:
        dec = ExtremalDecomposition(np.array([lam, 1 - lam]), np.vstack([w1, w2]))
    return Case1Optimal(value, dec, lam)


def orbit_vector(F: float, theta: float) -> StateVector:
    """Generating vector of the cyclic-orbit family at angle theta (d = 3)."""
    F = _check_fidelity(F)
    a = math.sqrt(3 * F)
    b = math.sqrt(1.5 * (1 - F))
    comps = np.array(
        [
            a + 2 * b * math.cos(theta),
            a - 2 * b * math.cos(theta - math.pi / 3),
            a - 2 * b * math.cos(theta + math.pi / 3),
        ]
    ) / 3.0
    return StateVector(comps.astype(complex))


def case2_entanglement(F: float) -> float:
    """Closed-form minimal ensemble entropy for d = 3 on [F*, 8/9].

    Outside that window the expression is still evaluable but is not the
    optimum, so the domain is enforced; the two summands are the single
    large component and the pair of equal small components of the optimal
    orbit vector.
    """
    F = _check_fidelity(F)
    if F < F_STAR - 1e-9 or F > F_DOUBLE_STAR + 1e-9:
        raise FOutOfDomain(
            f"F = {F!r} outside [{F_STAR:.7f}, {F_DOUBLE_STAR:.7f}] where the form is optimal"
        )
    return _case2_value(F)


def _case2_value(F: float) -> float:
    root = 2 * math.sqrt(2 * F * (1 - F))
    return shannon_term((2 - F + root) / 3) + 2 * shannon_term((1 + F - root) / 6)


def prop23_entanglement(d: int, F: float) -> float:
    """Ensemble entropy of the single-cyclic-orbit ansatz in dimension d.

    The generating vector has one component of squared modulus
    p = (sqrt(F) + sqrt((d-1)(1-F)))^2 / d and d-1 equal components.
    """
    if d < 2:
        raise DimensionMismatch("need dimension >= 2")
    F = _check_fidelity(F)
    p = (math.sqrt(F) + math.sqrt((d - 1) * (1 - F))) ** 2 / d
    p = min(p, 1.0)
    return shannon_term(p) + (d - 1) * shannon_term((1 - p) / (d - 1))


def cyclic_shift_matrix(d: int) -> np.ndarray:
    """Unitary sending basis index j to j+1 (mod d)."""
    v = np.zeros((d, d))
    for j in range(d):
        v[(j + 1) % d, j] = 1.0
    return v


def cyclic_orbit_decomposition(w) -> ExtremalDecomposition:
    """Equal-weight ensemble of the cyclic shifts of a generating vector."""
    vec = w.amplitudes if isinstance(w, StateVector) else np.asarray(w, dtype=complex)
    d = vec.shape[0]
    vectors = np.array([np.roll(vec, j) for j in range(d)])
    return ExtremalDecomposition(np.full(d, 1.0 / d), vectors)


@dataclass(frozen=True)
class OrbitClass:
    """Distinct component values of a phase-aligned real vector."""

    distinct_values: tuple
    multiplicities: tuple

    @property
    def pattern_order(self) -> int:
        return len(self.distinct_values)


def align_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate a global phase so the largest-modulus component is real positive."""
    v = np.asarray(vec, dtype=complex).ravel()
    k = int(np.argmax(np.abs(v)))
    phase = v[k] / abs(v[k]) if abs(v[k]) > 0 else 1.0
    return v / phase


def classify_components(w, tol: float = 1e-8, strict: bool = False) -> OrbitClass:
    """Cluster the components of a (realizable) vector by value.

    The vector is phase aligned first; a residual imaginary part above tol
    raises NotRealizable.  Components are clustered by single linkage with
    gap threshold tol.  With strict=True more than three clusters raises
    MoreThanThreeValues; by default the full clustering is returned for
    diagnostics.
    """
    vec = w.amplitudes if isinstance(w, StateVector) else np.asarray(w, dtype=complex)
    aligned = align_phase(vec)
    resid = float(np.max(np.abs(aligned.imag)))
    if resid > tol:
        raise NotRealizable(f"residual imaginary part {resid:.3e} exceeds tol {tol:.3e}")
    comps = np.sort(aligned.real)
    values, counts = [comps[0]], [1]
    for c in comps[1:]:
        if c - values[-1] <= tol:
            # extend the current cluster; keep its running mean
            values[-1] = (values[-1] * counts[-1] + c) / (counts[-1] + 1)
            counts[-1] += 1
        else:
            values.append(c)
            counts.append(1)
    if strict and len(values) > 3:
        raise MoreThanThreeValues(f"{len(values)} distinct component values")
    return OrbitClass(tuple(float(v) for v in values), tuple(counts))


@dataclass(frozen=True)
class PermutationAction:
    """Bijection on basis indices acting by the permutation matrix."""

    permutation: tuple

    def __post_init__(self):
        p = tuple(int(i) for i in self.permutation)
        if sorted(p) != list(range(len(p))):
            raise DimensionMismatch(f"not a bijection on 0..{len(p) - 1}: {p}")
        object.__setattr__(self, "permutation", p)

    @property
    def dim(self) -> int:
        return len(self.permutation)

    @property
    def matrix(self) -> np.ndarray:
        d = self.dim
        m = np.zeros((d, d))
        for j, pj in enumerate(self.permutation):
            m[pj, j] = 1.0
        return m

    def apply(self, vec: np.ndarray) -> np.ndarray:
        out = np.empty_like(vec)
        for j, pj in enumerate(self.permutation):
            out[pj] = vec[j]
        return out


def permute_decomposition(dec: ExtremalDecomposition, g: PermutationAction) -> ExtremalDecomposition:
    """Apply a basis permutation to every decomposer; weights unchanged."""
    if g.dim != dec.dim:
        raise DimensionMismatch(f"permutation on {g.dim} indices vs dimension {dec.dim}")
    vectors = np.array([g.apply(row) for row in dec.vectors])
    return ExtremalDecomposition(dec.weights.copy(), vectors)

"""Core state types, entropies, and restriction maps.

States are finite-dimensional density matrices (Hermitian, positive
semidefinite, unit trace).  Two restrictions are supported: the maximal
abelian (diagonal) subalgebra, which keeps the diagonal part of a state,
and a tensor factor, which is the partial trace over the complementary
factor.  All entropies use the natural logarithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    NotHermitian,
    NotNormalized,
    NotPositive,
    NotUnitTrace,
)

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
EIG_CLAMP = 1e-10  # eigenvalues in [-EIG_CLAMP, 0] are treated as 0


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, order="C")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DensityMatrix:
    """d x d complex density matrix. Build through :func:`validate_density`."""

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


@dataclass(frozen=True)
class StateVector:
    """Unit complex vector; the decomposer of a pure state."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _readonly(np.asarray(self.amplitudes).ravel())
        object.__setattr__(self, "amplitudes", amps)
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-12:
            raise NotNormalized(f"vector norm {norm!r} differs from 1 by more than 1e-12")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def projector(self) -> DensityMatrix:
        v = self.amplitudes
        return DensityMatrix(_readonly(np.outer(v, v.conj())))


@dataclass(frozen=True)
class SubalgebraSpec:
    """Restriction target: the diagonal subalgebra or the first tensor factor."""

    kind: str  # "diagonal" | "factor_a"
    d_a: int = 0
    d_b: int = 0

    @staticmethod
    def diagonal() -> "SubalgebraSpec":
        return SubalgebraSpec("diagonal")

    @staticmethod
    def factor(d_a: int, d_b: int) -> "SubalgebraSpec":
        if d_a < 1 or d_b < 1:
            raise DimensionMismatch("factor dimensions must be positive")
        return SubalgebraSpec("factor_a", d_a, d_b)

    def check_dim(self, dim: int) -> None:
        if self.kind == "factor_a" and self.d_a * self.d_b != dim:
            raise DimensionMismatch(
                f"factor dims {self.d_a}x{self.d_b} incompatible with ambient dimension {dim}"
            )


@dataclass(frozen=True)
class ProbabilityVector:
    """Nonnegative vector summing to one (diagonal of a restricted state)."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).ravel()
        if p.min(initial=0.0) < -1e-12:
            raise NotPositive(f"negative probability {p.min()}")
        if abs(p.sum() - 1.0) > 1e-10:
            raise NotUnitTrace(f"probabilities sum to {p.sum()!r}")
        p = np.array(p)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)


def validate_density(entries) -> DensityMatrix:
    """Check the density-matrix invariants and wrap the array.

    Raises NotHermitian, NotUnitTrace, or NotPositive naming the violated
    invariant; tolerances are 1e-12 for hermiticity and trace, and -1e-10
    for the smallest eigenvalue.
    """
    if isinstance(entries, DensityMatrix):
        return entries
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    herm = np.max(np.abs(m - m.conj().T))
    if herm > HERMITIAN_ATOL:
        raise NotHermitian(f"max |M - M^dagger| = {herm:.3e}")
    tr = m.trace()
    if abs(tr - 1.0) > TRACE_ATOL:
        raise NotUnitTrace(f"trace = {tr!r}")
    lo = float(np.linalg.eigvalsh(m)[0])
    if lo < -EIG_CLAMP:
        raise NotPositive(f"smallest eigenvalue = {lo:.3e}")
    return DensityMatrix(_readonly(m))


def as_matrix(rho) -> np.ndarray:
    """Raw entries of a DensityMatrix, or a validated array."""
    if isinstance(rho, DensityMatrix):
        return rho.entries
    return validate_density(rho).entries


def shannon_term(t: float) -> float:
    """The mixing-entropy summand -t ln t, with s(0) = s(1) = 0."""
    if t < -1e-12 or t > 1.0 + 1e-12:
        raise DomainError(f"shannon_term argument {t!r} outside [0, 1]")
    t = min(max(t, 0.0), 1.0)
    if t == 0.0 or t == 1.0:
        return 0.0
    return float(-t * np.log(t))


def shannon_entropy(probs) -> float:
    """Entropy of a probability vector, clamping tiny negatives to zero."""
    p = np.asarray(probs, dtype=float).ravel()
    if p.min(initial=0.0) < -EIG_CLAMP:
        raise NotPositive(f"probability {p.min()} below -1e-10")
    p = np.clip(p, 0.0, None)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def von_neumann_entropy(rho) -> float:
    """-sum mu ln mu over the eigenvalues of a density matrix."""
    m = as_matrix(rho)
    return shannon_entropy(np.linalg.eigvalsh(m))


def restrict(rho, sub: SubalgebraSpec) -> DensityMatrix:
    """Compress a state to a subalgebra.

    Diagonal keeps the diagonal part; factor_a is the partial trace over
    the second factor.  Both are trace preserving and positivity
    preserving.
    """
    m = as_matrix(rho)
    d = m.shape[0]
    sub.check_dim(d)
    if sub.kind == "diagonal":
        out = np.diag(np.real(np.diag(m))).astype(complex)
    else:
        t = m.reshape(sub.d_a, sub.d_b, sub.d_a, sub.d_b)
        out = np.trace(t, axis1=1, axis2=3)
    return DensityMatrix(_readonly(out))


def partial_trace_b(rho, d_a: int, d_b: int) -> DensityMatrix:
    return restrict(rho, SubalgebraSpec.factor(d_a, d_b))


def overlap(rho, phi) -> float:
    """Expectation <phi|rho|phi>, real in [0, 1] up to 1e-10."""
    m = as_matrix(rho)
    v = phi.amplitudes if isinstance(phi, StateVector) else np.asarray(phi, dtype=complex).ravel()
    if v.shape[0] != m.shape[0]:
        raise DimensionMismatch(f"vector dim {v.shape[0]} vs matrix dim {m.shape[0]}")
    return float(np.real(v.conj() @ m @ v))


def state_to_json(rho) -> dict:
    """JSON form {"dim": d, "entries": [[re, im], ...]} row-major."""
    m = as_matrix(rho)
    d = m.shape[0]
    flat = m.ravel()
    return {"dim": d, "entries": [[float(z.real), float(z.imag)] for z in flat]}


def state_from_json(obj: dict) -> DensityMatrix:
    d = int(obj["dim"])
    pairs = obj["entries"]
    if len(pairs) != d * d:
        raise DimensionMismatch(f"expected {d * d} entry pairs, got {len(pairs)}")
    flat = np.array([complex(re, im) for re, im in pairs])
    return validate_density(flat.reshape(d, d))

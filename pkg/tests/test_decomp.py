import json
import math

import numpy as np
import pytest

from subent.decomp import (
    ExtremalDecomposition,
    MixedDecomposition,
    decomposition_from_json,
    decomposition_to_json,
    eigen_ensemble,
    entropy_of_subalgebra,
    mixer_ensemble,
    objective,
    povm_decomposition,
    reconstruct,
)
from subent.errors import InvalidDecomposition, InvalidPOVM, NotIsometry, RankMismatch
from subent.optimizer import OptimizerConfig
from subent.qstate import StateVector, SubalgebraSpec, validate_density
from subent.symmetric import (
    case1_optimal,
    cyclic_orbit_decomposition,
    orbit_vector,
    perm_symmetric_state,
    uniform_vector,
)

DIAG = SubalgebraSpec.diagonal()
LN3 = math.log(3.0)


def random_density(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = a @ a.conj().T
    return validate_density(m / np.real(np.trace(m)))


def random_isometry(rng, n, r):
    g = rng.normal(size=(n, r)) + 1j * rng.normal(size=(n, r))
    q, _ = np.linalg.qr(g)
    return q[:, :r]


# ---------------------------------------------------------------- reconstruct

def test_reconstruct_single_component():
    rng = np.random.default_rng(0)
    rho = random_density(rng, 3)
    dec = MixedDecomposition(np.array([1.0]), (rho,))
    assert np.allclose(reconstruct(dec).entries, rho.entries, atol=1e-14)


def test_reconstruct_basis_pair():
    dec = ExtremalDecomposition(
        np.array([0.5, 0.5]), np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex)
    )
    assert np.allclose(reconstruct(dec).entries, np.eye(2) / 2, atol=1e-15)


def test_reconstruct_cyclic_orbit_at_8_9():
    dec = cyclic_orbit_decomposition(orbit_vector(8 / 9, 0.0))
    target = perm_symmetric_state(3, 8 / 9)
    assert np.max(np.abs(reconstruct(dec).entries - target.entries)) < 1e-12


# ------------------------------------------------------------------ objective

def test_objective_basis_projectors_zero():
    dec = ExtremalDecomposition(np.full(3, 1 / 3), np.eye(3, dtype=complex))
    assert objective(dec, DIAG) == pytest.approx(0.0, abs=1e-15)


def test_objective_uniform_vector():
    dec = ExtremalDecomposition(np.array([1.0]), uniform_vector(3).amplitudes[None, :])
    assert objective(dec, DIAG) == pytest.approx(LN3, abs=1e-12)


def test_objective_cyclic_orbit_value():
    dec = cyclic_orbit_decomposition(orbit_vector(8 / 9, 0.0))
    assert objective(dec, DIAG) == pytest.approx(0.8675632284814612, abs=1e-12)


def test_objective_invariances():
    rng = np.random.default_rng(1)
    dec = cyclic_orbit_decomposition(orbit_vector(0.4, 0.7))
    base = objective(dec, DIAG)
    # simultaneous permutation of weights and decomposers
    perm = rng.permutation(dec.length)
    shuffled = ExtremalDecomposition(dec.weights[perm], dec.vectors[perm])
    assert objective(shuffled, DIAG) == pytest.approx(base, abs=1e-14)
    # per-decomposer global phases
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=dec.length))
    rotated = ExtremalDecomposition(dec.weights.copy(), dec.vectors * phases[:, None])
    assert objective(rotated, DIAG) == pytest.approx(base, abs=1e-14)


def test_objective_factor_mode_matches_schmidt():
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / math.sqrt(2)
    dec = ExtremalDecomposition(np.array([1.0]), v[None, :])
    assert objective(dec, SubalgebraSpec.factor(2, 2)) == pytest.approx(math.log(2), abs=1e-12)


# ----------------------------------------------------------------------- povm

def test_povm_trivial_identity():
    rng = np.random.default_rng(2)
    rho = random_density(rng, 3)
    dec = povm_decomposition(rho, [np.eye(3)])
    assert dec.length == 1
    assert np.allclose(dec.components[0].entries, rho.entries, atol=1e-12)


def test_povm_basis_projectors_on_mixed():
    rho = validate_density(np.eye(2) / 2)
    povm = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    dec = povm_decomposition(rho, povm)
    assert np.allclose(dec.weights, [0.5, 0.5])
    for k, comp in enumerate(dec.components):
        expected = np.zeros((2, 2))
        expected[k, k] = 1.0
        assert np.allclose(comp.entries, expected, atol=1e-12)


def test_povm_recovers_case1_decomposition():
    # choosing M_j = w_j * inv(sqrt(rho)) pi_j inv(sqrt(rho)) turns the povm
    # route into the optimal pair itself
    a, b = 0.5, 0.25
    rho = validate_density(np.array([[a, b], [b, 1 - a]]))
    best = case1_optimal(a, b)
    evals, evecs = np.linalg.eigh(rho.entries)
    inv_sqrt = (evecs / np.sqrt(evals)) @ evecs.conj().T
    povm = []
    for w, vec in zip(best.decomposition.weights, best.decomposition.vectors):
        povm.append(w * inv_sqrt @ np.outer(vec, vec.conj()) @ inv_sqrt)
    dec = povm_decomposition(rho, povm)
    assert np.allclose(dec.weights, best.decomposition.weights, atol=1e-10)
    assert np.max(np.abs(reconstruct(dec).entries - rho.entries)) < 1e-10
    assert objective(dec, DIAG) == pytest.approx(best.entanglement, abs=1e-10)


def test_povm_random_elements_reconstruct():
    rng = np.random.default_rng(3)
    for _ in range(5):
        rho = random_density(rng, 3)
        raw = [g @ g.conj().T for g in
               (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(4))]
        total = sum(raw)
        evals, evecs = np.linalg.eigh(total)
        fix = (evecs / np.sqrt(evals)) @ evecs.conj().T
        povm = [fix @ e @ fix for e in raw]
        dec = povm_decomposition(rho, povm)
        assert abs(sum(dec.weights) - 1) < 1e-10
        assert np.max(np.abs(reconstruct(dec).entries - rho.entries)) < 1e-10


def test_povm_rejects_bad_elements():
    rho = validate_density(np.eye(2) / 2)
    with pytest.raises(InvalidPOVM):
        povm_decomposition(rho, [np.diag([1.0, 0.0])])  # does not sum to identity
    with pytest.raises(InvalidPOVM):
        povm_decomposition(rho, [np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])])


# ---------------------------------------------------------------------- mixer

def test_mixer_identity_gives_eigendecomposition():
    rng = np.random.default_rng(4)
    rho = random_density(rng, 3)
    mu, vecs = eigen_ensemble(rho)
    dec = mixer_ensemble(rho, np.eye(len(mu)))
    assert np.allclose(np.sort(dec.weights), np.sort(mu), atol=1e-12)
    assert np.max(np.abs(reconstruct(dec).entries - rho.entries)) < 1e-12


def test_mixer_hadamard_on_maximally_mixed():
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    dec = mixer_ensemble(validate_density(np.eye(2) / 2), h)
    assert np.allclose(dec.weights, [0.5, 0.5])
    for row in dec.vectors:
        assert abs(abs(row[0]) - 1 / math.sqrt(2)) < 1e-12
        assert abs(abs(row[1]) - 1 / math.sqrt(2)) < 1e-12


def test_mixer_reproduces_case1_pair():
    # solve for the 2x2 mixer sending the eigen-ensemble to the known
    # optimal pair, then check mixer_ensemble returns exactly that pair
    a, b = 0.5, 0.25
    rho = validate_density(np.array([[a, b], [b, 1 - a]]))
    best = case1_optimal(a, b)
    mu, vecs = eigen_ensemble(rho)
    m = np.zeros((2, 2), dtype=complex)
    for j, (w, vec) in enumerate(zip(best.decomposition.weights, best.decomposition.vectors)):
        m[j, :] = math.sqrt(w) * (vecs.conj().T @ vec) / np.sqrt(mu)
    assert np.max(np.abs(m.conj().T @ m - np.eye(2))) < 1e-10
    dec = mixer_ensemble(rho, m)
    assert np.allclose(np.sort(dec.weights), np.sort(best.decomposition.weights), atol=1e-10)
    assert objective(dec, DIAG) == pytest.approx(best.entanglement, abs=1e-12)


def test_mixer_random_isometries_reconstruct():
    rng = np.random.default_rng(5)
    for _ in range(10):
        d = int(rng.integers(2, 5))
        rho = random_density(rng, d)
        r = len(eigen_ensemble(rho)[0])
        n = int(rng.integers(r, d * d + 1))
        dec = mixer_ensemble(rho, random_isometry(rng, n, r))
        assert np.max(np.abs(reconstruct(dec).entries - rho.entries)) < 1e-10


def test_mixer_rejections():
    rho = validate_density(np.eye(2) / 2)
    with pytest.raises(NotIsometry):
        mixer_ensemble(rho, np.array([[1.0, 0.1], [0.0, 1.0]]))
    with pytest.raises(RankMismatch):
        mixer_ensemble(rho, np.eye(3))  # three columns for a rank-2 state


def test_decomposition_validation():
    with pytest.raises(InvalidDecomposition):
        ExtremalDecomposition(np.array([0.5, 0.6]), np.eye(2, dtype=complex))
    with pytest.raises(NotIsometry):
        ExtremalDecomposition(np.array([0.5, 0.5]), 2 * np.eye(2, dtype=complex))


# --------------------------------------------------------- entropy difference

def test_entropy_of_subalgebra_maximally_mixed():
    cfg = OptimizerConfig(length=3, restarts=4, seed=0)
    value = entropy_of_subalgebra(validate_density(np.eye(3) / 3), DIAG, cfg)
    assert value == pytest.approx(LN3, abs=1e-8)


def test_entropy_of_subalgebra_pure_uniform():
    rho = uniform_vector(3).projector()
    cfg = OptimizerConfig(length=1, restarts=1, seed=0)
    assert entropy_of_subalgebra(rho, DIAG, cfg) == pytest.approx(0.0, abs=1e-10)


def test_entropy_of_subalgebra_symmetric_anchor():
    rho = perm_symmetric_state(3, 8 / 9)
    cfg = OptimizerConfig(length=3, restarts=16, seed=0)
    value = entropy_of_subalgebra(rho, DIAG, cfg)
    assert value == pytest.approx(math.log(2) / 3, abs=1e-6)
    assert value > -1e-8


def test_decomposition_json_round_trip():
    dec = cyclic_orbit_decomposition(orbit_vector(0.6, 1.1))
    rebuilt = decomposition_from_json(json.loads(json.dumps(decomposition_to_json(dec))))
    assert np.allclose(rebuilt.weights, dec.weights, atol=1e-15)
    assert np.allclose(rebuilt.vectors, dec.vectors, atol=1e-15)

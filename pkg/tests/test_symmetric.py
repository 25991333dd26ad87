import math
from itertools import permutations

import numpy as np
import pytest

from subent.decomp import objective, reconstruct
from subent.errors import (
    FOutOfDomain,
    FOutOfRange,
    InvalidBlochParams,
    MoreThanThreeValues,
    NotRealizable,
    XOutOfRange,
)
from subent.optimizer import s_of_f, theta_scan
from subent.qstate import StateVector, SubalgebraSpec, overlap, validate_density
from subent.symmetric import (
    F_STAR,
    OrbitClass,
    PermutationAction,
    align_phase,
    case1_optimal,
    case1_symmetric_entanglement,
    case2_entanglement,
    classify_components,
    cyclic_orbit_decomposition,
    orbit_vector,
    perm_symmetric_state,
    permute_decomposition,
    prop23_entanglement,
    uniform_vector,
    x_to_fidelity,
)

DIAG = SubalgebraSpec.diagonal()
LN2 = math.log(2.0)
LN3 = math.log(3.0)
CASE1_HALF_QUARTER = 0.24577536666847116  # s((1+sqrt(3)/2)/2) + s((1-sqrt(3)/2)/2)


# ----------------------------------------------------------- state family

def test_perm_symmetric_state_extremes():
    psi = uniform_vector(3)
    pure = perm_symmetric_state(3, 1.0)
    assert np.allclose(pure.entries, psi.projector().entries, atol=1e-14)
    mixed = perm_symmetric_state(3, 1 / 3)
    assert np.allclose(mixed.entries, np.eye(3) / 3, atol=1e-14)
    bottom = perm_symmetric_state(3, 0.0)
    expected = np.full((3, 3), -0.5 / 3)
    np.fill_diagonal(expected, 1 / 3)
    assert np.allclose(bottom.entries, expected, atol=1e-14)


def test_perm_symmetric_state_permutation_invariant():
    rho = perm_symmetric_state(3, 0.37)
    for perm in permutations(range(3)):
        p = PermutationAction(perm).matrix
        assert np.max(np.abs(p @ rho.entries @ p.T - rho.entries)) <= 1e-14


def test_perm_symmetric_state_fidelity():
    for d in (2, 3, 4):
        for F in (0.0, 0.3, 0.9, 1.0):
            rho = perm_symmetric_state(d, F)
            assert overlap(rho, uniform_vector(d)) == pytest.approx(F, abs=1e-12)


def test_perm_symmetric_state_rejects():
    with pytest.raises(FOutOfRange):
        perm_symmetric_state(3, 1.2)


def test_x_to_fidelity_values():
    assert x_to_fidelity(3, -0.4150234) == pytest.approx(0.05665106666666671, abs=1e-15)
    assert x_to_fidelity(5, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert x_to_fidelity(4, 0.0) == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(XOutOfRange):
        x_to_fidelity(3, -0.7)


# ------------------------------------------------------------------ case 1

def test_case1_optimal_diagonal_state():
    res = case1_optimal(0.5, 0.0)
    assert res.entanglement == pytest.approx(0.0, abs=1e-15)
    moduli = np.sort(np.abs(res.decomposition.vectors), axis=1)
    assert np.allclose(moduli, [[0, 1], [0, 1]], atol=1e-12)


def test_case1_optimal_generic_value():
    res = case1_optimal(0.5, 0.25)
    assert res.entanglement == pytest.approx(CASE1_HALF_QUARTER, abs=1e-12)
    assert res.weight == pytest.approx(0.5, abs=1e-12)
    rho = np.array([[0.5, 0.25], [0.25, 0.5]])
    assert np.max(np.abs(reconstruct(res.decomposition).entries - rho)) < 1e-12


def test_case1_optimal_pure_edge():
    res = case1_optimal(0.5, 0.5)
    assert res.entanglement == pytest.approx(LN2, abs=1e-12)
    assert res.decomposition.length == 1
    assert np.allclose(np.abs(res.decomposition.vectors[0]), [1 / math.sqrt(2)] * 2, atol=1e-12)


def test_case1_optimal_reconstructs_random_states():
    rng = np.random.default_rng(11)
    for _ in range(50):
        a = rng.uniform(0.02, 0.98)
        b = rng.uniform(0, math.sqrt(a * (1 - a))) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        res = case1_optimal(a, b)
        rho = np.array([[a, b], [np.conj(b), 1 - a]])
        assert np.max(np.abs(reconstruct(res.decomposition).entries - rho)) < 1e-12
        assert objective(res.decomposition, DIAG) == pytest.approx(res.entanglement, abs=1e-12)


def test_case1_optimal_rejects_invalid():
    with pytest.raises(InvalidBlochParams):
        case1_optimal(0.1, 0.5)
    with pytest.raises(InvalidBlochParams):
        case1_optimal(1.4, 0.0)


def test_case1_symmetric_entanglement_values():
    assert case1_symmetric_entanglement(1.0) == pytest.approx(LN2, abs=1e-15)
    assert case1_symmetric_entanglement(0.5) == pytest.approx(0.0, abs=1e-15)
    assert case1_symmetric_entanglement(0.75) == pytest.approx(CASE1_HALF_QUARTER, abs=1e-12)


def test_case1_symmetric_matches_case1_optimal():
    # F = (1+x)/2 and b = x/2 identify the two parametrizations
    for F in (0.1, 0.3, 0.6, 0.75, 0.95):
        x = 2 * F - 1
        res = case1_optimal(0.5, x / 2)
        assert case1_symmetric_entanglement(F) == pytest.approx(res.entanglement, abs=1e-12)


# ------------------------------------------------------------- orbit family

def test_orbit_vector_at_the_upper_anchor():
    w = orbit_vector(8 / 9, 0.0)
    expected = np.array([math.sqrt(2 / 3), math.sqrt(1 / 6), math.sqrt(1 / 6)])
    assert np.allclose(np.real(w.amplitudes), expected, atol=1e-12)
    assert np.allclose(np.abs(w.amplitudes) ** 2, [2 / 3, 1 / 6, 1 / 6], atol=1e-12)


def test_orbit_vector_uniform_and_zero_fidelity():
    w = orbit_vector(1.0, 1.234)
    assert np.allclose(np.real(w.amplitudes), np.full(3, 1 / math.sqrt(3)), atol=1e-12)
    w0 = orbit_vector(0.0, -math.pi / 6)
    assert np.allclose(np.real(w0.amplitudes), np.array([1, 0, -1]) / math.sqrt(2), atol=1e-12)


def test_orbit_vector_unit_norm_everywhere():
    rng = np.random.default_rng(12)
    for _ in range(30):
        w = orbit_vector(rng.uniform(0, 1), rng.uniform(0, 2 * np.pi))
        assert abs(np.linalg.norm(w.amplitudes) - 1) < 1e-12


def test_case2_entanglement_values():
    assert case2_entanglement(8 / 9) == pytest.approx(LN3 - LN2 / 3, abs=1e-12)
    assert case2_entanglement(1 / 3) == pytest.approx(0.0, abs=1e-12)
    scan_value, _ = s_of_f(F_STAR)
    assert case2_entanglement(F_STAR) == pytest.approx(scan_value, abs=1e-9)


def test_case2_entanglement_domain():
    with pytest.raises(FOutOfDomain):
        case2_entanglement(0.01)
    with pytest.raises(FOutOfDomain):
        case2_entanglement(0.95)


def test_prop23_entanglement_values():
    for d in (2, 3, 5):
        assert prop23_entanglement(d, 1 / d) == pytest.approx(0.0, abs=1e-12)
    assert prop23_entanglement(3, 8 / 9) == pytest.approx(LN3 - LN2 / 3, abs=1e-12)
    assert prop23_entanglement(2, 0.75) == pytest.approx(CASE1_HALF_QUARTER, abs=1e-12)


def test_prop23_matches_case1_on_a_grid():
    for F in np.linspace(0, 1, 21):
        assert prop23_entanglement(2, float(F)) == pytest.approx(
            case1_symmetric_entanglement(float(F)), abs=1e-12
        )


def test_cyclic_orbit_decomposition_uniform():
    dec = cyclic_orbit_decomposition(uniform_vector(3))
    assert np.allclose(dec.weights, np.full(3, 1 / 3))
    target = uniform_vector(3).projector()
    assert np.max(np.abs(reconstruct(dec).entries - target.entries)) < 1e-12


def test_cyclic_orbit_decomposition_anchor():
    dec = cyclic_orbit_decomposition(orbit_vector(8 / 9, 0.0))
    target = perm_symmetric_state(3, 8 / 9)
    assert np.max(np.abs(reconstruct(dec).entries - target.entries)) < 1e-12
    # normalization constraint of the generating vector
    w = orbit_vector(8 / 9, 0.0).amplitudes
    assert abs(np.abs(w.sum()) ** 2 - 3 * (8 / 9)) < 1e-12


def test_cyclic_shift_matrix_matches_roll():
    from subent.symmetric import cyclic_shift_matrix

    v = np.array([1.0, 2.0, 3.0, 4.0])
    m = cyclic_shift_matrix(4)
    assert np.allclose(m @ v, np.roll(v, 1))
    assert np.allclose(m @ m.T, np.eye(4))


def test_cyclic_orbit_decomposition_basis_vector():
    e1 = StateVector(np.array([1.0, 0.0, 0.0], dtype=complex))
    dec = cyclic_orbit_decomposition(e1)
    assert np.allclose(reconstruct(dec).entries, np.eye(3) / 3, atol=1e-14)
    assert objective(dec, DIAG) == pytest.approx(0.0, abs=1e-15)


# --------------------------------------------------------------- components

def test_classify_components_anchor_vector():
    oc = classify_components(orbit_vector(8 / 9, 0.0), tol=1e-8)
    assert oc.multiplicities == (2, 1)
    assert oc.distinct_values[1] == pytest.approx(math.sqrt(2 / 3), abs=1e-12)
    assert oc.distinct_values[0] == pytest.approx(math.sqrt(1 / 6), abs=1e-12)


def test_classify_components_uniform():
    oc = classify_components(uniform_vector(4))
    assert oc.distinct_values == (pytest.approx(0.5, abs=1e-12),)
    assert oc.multiplicities == (4,)


def test_classify_components_two_orbit_regime():
    profile = theta_scan(0.02)
    alpha = profile.minimizers_mod_symmetry()[0]
    oc = classify_components(orbit_vector(0.02, alpha), tol=1e-6)
    assert oc.pattern_order == 3
    assert oc.multiplicities == (1, 1, 1)


def test_classify_components_phase_alignment():
    w = orbit_vector(0.6, 0.0)
    rotated = StateVector(w.amplitudes * np.exp(0.77j))
    oc = classify_components(rotated, tol=1e-8)
    assert oc.pattern_order == 2


def test_classify_components_errors():
    v = np.array([1.0, 1.0j, 0.0, 0.0]) / math.sqrt(2)
    with pytest.raises(NotRealizable):
        classify_components(StateVector(v), tol=1e-8)
    spread = StateVector(np.array([0.1, 0.2, 0.3, math.sqrt(1 - 0.14)], dtype=complex))
    with pytest.raises(MoreThanThreeValues):
        classify_components(spread, tol=1e-8, strict=True)
    assert classify_components(spread, tol=1e-8).pattern_order == 4


def test_align_phase_makes_largest_component_positive():
    rng = np.random.default_rng(13)
    v = rng.normal(size=5) + 1j * rng.normal(size=5)
    aligned = align_phase(v)
    k = np.argmax(np.abs(aligned))
    assert aligned[k].imag == pytest.approx(0.0, abs=1e-12)
    assert aligned[k].real > 0


# ------------------------------------------------------------- permutations

def test_permute_decomposition_identity():
    dec = cyclic_orbit_decomposition(orbit_vector(0.5, 0.4))
    out = permute_decomposition(dec, PermutationAction((0, 1, 2)))
    assert np.allclose(out.vectors, dec.vectors)


def _projector_set(dec):
    return sorted(
        tuple(np.round(np.outer(v, v.conj()).ravel(), 9)) for v in dec.vectors
    )


def test_permute_decomposition_cyclic_shift_closes_orbit():
    dec = cyclic_orbit_decomposition(orbit_vector(0.5, 0.4))
    shifted = permute_decomposition(dec, PermutationAction((1, 2, 0)))
    assert _projector_set(shifted) == _projector_set(dec)


def test_permute_decomposition_transposition_swaps_partner_orbit():
    profile = theta_scan(0.02)
    alpha = profile.minimizers_mod_symmetry()[0]
    plus = cyclic_orbit_decomposition(orbit_vector(0.02, alpha))
    minus = cyclic_orbit_decomposition(orbit_vector(0.02, -alpha))
    swapped = permute_decomposition(plus, PermutationAction((0, 2, 1)))
    assert _projector_set(swapped) == _projector_set(minus)
    assert objective(swapped, DIAG) == pytest.approx(objective(plus, DIAG), abs=1e-12)


def test_permutation_action_validation():
    with pytest.raises(Exception):
        PermutationAction((0, 0, 1))

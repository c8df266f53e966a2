import math

import numpy as np
import pytest
import scipy.linalg

from helpers import random_density, random_hermitian, random_pure, random_unitary
from spinchannels.linalg import (
    ContractViolation,
    check_density_matrix,
    check_pure_state,
    hermitian_eigensystem,
    hermiticity_defect,
    kron,
    kron_vec,
    log_divisor,
    matrix_from_json,
    matrix_to_json,
    operator_norm,
    partial_trace,
    relative_entropy,
    spectrum_entropy,
    unitarity_defect,
    vector_from_json,
    vector_to_json,
    von_neumann_entropy,
)


def test_eigensystem_reconstructs_and_orders():
    rng = np.random.default_rng(11)
    for d in range(2, 9):
        m = random_hermitian(rng, d)
        w, v = hermitian_eigensystem(m)
        assert np.all(np.diff(w) >= 0.0)
        assert np.abs(v.conj().T @ v - np.eye(d)).max() < 1e-12
        assert np.abs(v @ np.diag(w) @ v.conj().T - m).max() < 1e-9
        assert abs(w.sum() - np.trace(m).real) < 1e-10


def test_eigensystem_rejects_non_hermitian():
    with pytest.raises(ContractViolation, match="Hermitian"):
        hermitian_eigensystem(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_hermiticity_defect_measures_asymmetry():
    assert hermiticity_defect(np.eye(3)) == 0.0
    skew = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert abs(hermiticity_defect(skew) - 2.0) < 1e-15


def test_density_matrix_validation():
    rng = np.random.default_rng(12)
    rho = random_density(rng, 4)
    check_density_matrix(rho)
    with pytest.raises(ContractViolation, match="trace"):
        check_density_matrix(2.0 * rho)
    lopsided = rho.copy()
    lopsided[0, 1] += 1e-6
    with pytest.raises(ContractViolation, match="Hermitian"):
        check_density_matrix(lopsided)
    spoiled = np.diag([1.1, -0.1, 0.0, 0.0]).astype(complex)
    with pytest.raises(ContractViolation, match="positivity"):
        check_density_matrix(spoiled)


def test_pure_state_validation():
    check_pure_state(np.array([1.0, 0.0]))
    with pytest.raises(ContractViolation, match="normalized"):
        check_pure_state(np.array([1.0, 1.0]))
    with pytest.raises(ContractViolation):
        check_pure_state(np.eye(2))


def test_partial_trace_inverts_products():
    rng = np.random.default_rng(13)
    for d_a, d_b in ((2, 3), (3, 2), (2, 2), (3, 3)):
        rho = random_density(rng, d_a)
        sigma = random_density(rng, d_b)
        product = kron(rho, sigma)
        assert np.abs(partial_trace(product, (d_a, d_b), "A") - rho).max() < 1e-12
        assert np.abs(partial_trace(product, (d_a, d_b), "B") - sigma).max() < 1e-12


def test_partial_trace_preserves_trace_on_entangled_input():
    rng = np.random.default_rng(14)
    rho = random_density(rng, 6)
    for keep in ("A", "B"):
        reduced = partial_trace(rho, (2, 3), keep)
        assert abs(np.trace(reduced).real - 1.0) < 1e-12


def test_partial_trace_rejects_bad_requests():
    with pytest.raises(ContractViolation, match="match"):
        partial_trace(np.eye(5) / 5.0, (2, 3), "A")
    with pytest.raises(ContractViolation, match="keep"):
        partial_trace(np.eye(6) / 6.0, (2, 3), "C")


def test_kron_index_convention():
    # (i_A, i_B) -> i_A * d_B + i_B: entry (0,1) of A tensor (1,0) of B
    a = np.zeros((2, 2))
    a[0, 1] = 1.0
    b = np.zeros((3, 3))
    b[1, 0] = 1.0
    full = kron(a, b)
    assert full[0 * 3 + 1, 1 * 3 + 0] == 1.0
    va = np.array([0.0, 1.0])
    vb = np.array([1.0, 0.0, 0.0])
    assert kron_vec(va, vb)[1 * 3 + 0] == 1.0


def test_kron_respects_matrix_products():
    rng = np.random.default_rng(22)
    for _ in range(5):
        a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        lhs = kron(a, b) @ kron(c, d)
        assert np.abs(lhs - kron(a @ c, b @ d)).max() < 1e-12


def test_partial_trace_of_singlet_is_maximally_mixed():
    singlet = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)
    rho = np.outer(singlet, singlet.conj())
    for keep in ("A", "B"):
        reduced = partial_trace(rho, (2, 2), keep)
        assert np.abs(reduced - np.eye(2) / 2.0).max() < 1e-12


def test_partial_trace_matches_index_sum():
    rng = np.random.default_rng(23)
    rho = random_density(rng, 6)
    blocks = rho.reshape(2, 3, 2, 3)
    keep_a = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            keep_a[i, j] = sum(blocks[i, b, j, b] for b in range(3))
    keep_b = np.zeros((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            keep_b[i, j] = sum(blocks[a, i, a, j] for a in range(2))
    assert np.abs(partial_trace(rho, (2, 3), "A") - keep_a).max() < 1e-12
    assert np.abs(partial_trace(rho, (2, 3), "B") - keep_b).max() < 1e-12


def test_spectrum_entropy_known_values():
    assert spectrum_entropy([1.0, 0.0]) == 0.0
    assert abs(spectrum_entropy([0.5, 0.5]) - math.log(2.0)) < 1e-15
    uniform = np.full(5, 0.2)
    assert abs(spectrum_entropy(uniform) - math.log(5.0)) < 1e-14
    skew = spectrum_entropy([1.0 / 3.0, 2.0 / 3.0])
    assert abs(skew - (math.log(3.0) - 2.0 / 3.0 * math.log(2.0))) < 1e-14


def test_spectrum_entropy_clamps_noise_but_rejects_violations():
    clean = spectrum_entropy([1.0, -1e-11])
    assert clean == 0.0
    with pytest.raises(ContractViolation, match="positivity"):
        spectrum_entropy([1.05, -0.05])


def test_von_neumann_entropy_pure_and_mixed():
    rng = np.random.default_rng(15)
    phi = random_pure(rng, 4)
    assert abs(von_neumann_entropy(np.outer(phi, phi.conj()))) < 1e-12
    for d in (2, 3, 5):
        assert abs(von_neumann_entropy(np.eye(d) / d) - math.log(d)) < 1e-12
    assert abs(von_neumann_entropy(np.eye(2) / 2.0, base=2) - 1.0) < 1e-12


def test_entropy_unitary_invariance_and_additivity():
    rng = np.random.default_rng(16)
    for d in (2, 3, 4):
        rho = random_density(rng, d)
        sigma = random_density(rng, d)
        u = random_unitary(rng, d)
        assert abs(von_neumann_entropy(u @ rho @ u.conj().T) - von_neumann_entropy(rho)) < 1e-10
        joint = von_neumann_entropy(kron(rho, sigma))
        assert abs(joint - von_neumann_entropy(rho) - von_neumann_entropy(sigma)) < 1e-10


def test_relative_entropy_against_matrix_log():
    rng = np.random.default_rng(17)
    for d in (2, 3, 4):
        rho = random_density(rng, d)
        sigma = random_density(rng, d)
        expected = np.trace(rho @ (scipy.linalg.logm(rho) - scipy.linalg.logm(sigma))).real
        assert abs(relative_entropy(rho, sigma) - expected) < 1e-9


def test_relative_entropy_special_values():
    rng = np.random.default_rng(18)
    rho = random_density(rng, 3)
    assert abs(relative_entropy(rho, rho)) < 1e-10
    phi = random_pure(rng, 4)
    pure = np.outer(phi, phi.conj())
    assert abs(relative_entropy(pure, np.eye(4) / 4.0) - math.log(4.0)) < 1e-10
    # rho has weight outside the support of a pure sigma
    assert relative_entropy(np.eye(4) / 4.0, pure) == math.inf


def test_relative_entropy_klein_inequality():
    rng = np.random.default_rng(19)
    for _ in range(20):
        d = int(rng.integers(2, 5))
        value = relative_entropy(random_density(rng, d), random_density(rng, d))
        assert value >= -1e-10


def test_relative_entropy_base_conversion():
    rng = np.random.default_rng(20)
    rho = random_density(rng, 3)
    sigma = random_density(rng, 3)
    nats = relative_entropy(rho, sigma)
    bits = relative_entropy(rho, sigma, base=2)
    assert abs(bits - nats / math.log(2.0)) < 1e-12


def test_relative_entropy_rejects_mismatched_shapes():
    with pytest.raises(ContractViolation, match="mismatch"):
        relative_entropy(np.eye(2) / 2.0, np.eye(3) / 3.0)


def test_operator_norm_known_cases():
    assert abs(operator_norm(np.eye(4)) - 1.0) < 1e-15
    assert abs(operator_norm(np.diag([1.0 / 3.0, 2.0 / 3.0])) - 2.0 / 3.0) < 1e-15
    assert abs(operator_norm(np.diag([3.0, -5.0])) - 5.0) < 1e-12
    rng = np.random.default_rng(21)
    m = random_hermitian(rng, 5)
    assert abs(operator_norm(m) - np.abs(np.linalg.eigvalsh(m)).max()) < 1e-10
    u = random_unitary(rng, 4)
    assert abs(operator_norm(u) - 1.0) < 1e-12


def test_operator_norm_dominates_random_directions():
    # sup over unit vectors; sampled directions certify a lower bound
    rng = np.random.default_rng(24)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    norm = operator_norm(m)
    sampled = 0.0
    for _ in range(1000):
        x = random_pure(rng, 3)
        sampled = max(sampled, float(np.linalg.norm(m @ x)))
    assert sampled <= norm + 1e-12
    assert norm - sampled < norm * 0.05


def test_unitarity_defect():
    assert unitarity_defect(np.eye(3)) == 0.0
    assert unitarity_defect(2.0 * np.eye(2)) == 3.0


def test_log_divisor():
    assert log_divisor(None) == 1.0
    assert abs(log_divisor(2.0) - math.log(2.0)) < 1e-15
    with pytest.raises(ContractViolation):
        log_divisor(1.0)
    with pytest.raises(ContractViolation):
        log_divisor(-2.0)


def test_matrix_serialization_round_trip():
    rng = np.random.default_rng(22)
    m = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    assert np.array_equal(vector_from_json(vector_to_json(v)), v)


def test_matrix_deserialization_rejects_garbage():
    with pytest.raises(ContractViolation):
        matrix_from_json([])
    with pytest.raises(ContractViolation, match="inconsistent"):
        matrix_from_json([[[1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]])
    with pytest.raises(ContractViolation, match="pairs"):
        matrix_from_json([[[1.0, 0.0, 0.0]]])
    with pytest.raises(ContractViolation):
        vector_from_json([[1.0]])

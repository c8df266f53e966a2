import math

import numpy as np
import pytest

from helpers import random_axis_angle
from spinchannels.linalg import ContractViolation
from spinchannels.spin import (
    SpinLabel,
    casimir_projectors,
    coupled_zero_m_state,
    rotation_unitary,
    singlet_state,
    spin_operators,
    total_spin_squared,
)

SPINS = [SpinLabel(1), SpinLabel(2), SpinLabel(3), SpinLabel(4), SpinLabel(5)]


class TestSpinLabel:
    def test_parsing_accepts_half_integers(self):
        assert SpinLabel.from_string("1/2").twice_s == 1
        assert SpinLabel.from_string("0.5").twice_s == 1
        assert SpinLabel.from_string("1").twice_s == 2
        assert SpinLabel.from_string("3/2").twice_s == 3
        assert SpinLabel.from_string(" 2 ").twice_s == 4

    def test_coerce_accepts_numbers_and_labels(self):
        assert SpinLabel.coerce(2).twice_s == 4
        assert SpinLabel.coerce(1.5).twice_s == 3
        assert SpinLabel.coerce(SpinLabel(1)) == SpinLabel(1)

    @pytest.mark.parametrize("bad", ["1/3", "-1", "abc", "", "0.3"])
    def test_parsing_rejects_non_half_integers(self, bad):
        with pytest.raises(ContractViolation):
            SpinLabel.from_string(bad)

    def test_coerce_rejects_bad_values(self):
        with pytest.raises(ContractViolation):
            SpinLabel.coerce(1 / 3)
        with pytest.raises(ContractViolation):
            SpinLabel.coerce(-0.5)
        with pytest.raises(ContractViolation):
            SpinLabel.coerce(None)

    def test_str_round_trips(self):
        for label in [SpinLabel(0), SpinLabel(1), SpinLabel(2), SpinLabel(7)]:
            assert SpinLabel.from_string(str(label)) == label

    def test_properties(self):
        label = SpinLabel(3)
        assert label.s == 1.5
        assert label.dimension == 4


class TestSpinOperators:
    @pytest.mark.parametrize("label", SPINS)
    def test_commutation_relations(self, label):
        s1, s2, s3 = spin_operators(label)
        assert np.abs(s1 @ s2 - s2 @ s1 - 1j * s3).max() < 1e-12
        assert np.abs(s2 @ s3 - s3 @ s2 - 1j * s1).max() < 1e-12
        assert np.abs(s3 @ s1 - s1 @ s3 - 1j * s2).max() < 1e-12

    @pytest.mark.parametrize("label", SPINS)
    def test_casimir_and_hermiticity(self, label):
        ops = spin_operators(label)
        total = sum(op @ op for op in ops)
        expected = label.s * (label.s + 1.0) * np.eye(label.dimension)
        assert np.abs(total - expected).max() < 1e-12
        for op in ops:
            assert np.abs(op - op.conj().T).max() < 1e-15

    def test_spin_half_is_half_pauli(self):
        s1, s2, s3 = spin_operators("1/2")
        assert np.abs(s1 - np.array([[0, 0.5], [0.5, 0]])).max() < 1e-15
        assert np.abs(s2 - np.array([[0, -0.5j], [0.5j, 0]])).max() < 1e-15
        assert np.abs(s3 - np.diag([0.5, -0.5])).max() < 1e-15

    def test_spin_one_matrices(self):
        s1, s2, s3 = spin_operators("1")
        r = 1.0 / math.sqrt(2.0)
        assert np.abs(s1 - r * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])).max() < 1e-15
        assert np.abs(s2 - r * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]])).max() < 1e-15
        assert np.abs(s3 - np.diag([1.0, 0.0, -1.0])).max() < 1e-15

    def test_s3_is_descending_diagonal(self):
        _, _, s3 = spin_operators("5/2")
        diag = np.diagonal(s3).real
        assert np.array_equal(diag, np.array([2.5, 1.5, 0.5, -0.5, -1.5, -2.5]))


class TestRotations:
    def test_unitarity_and_composition(self):
        rng = np.random.default_rng(31)
        for label in SPINS[:3]:
            axis, angle = random_axis_angle(rng)
            extra = float(rng.uniform(0.0, 2.0 * math.pi))
            u1 = rotation_unitary(label, axis, angle)
            u2 = rotation_unitary(label, axis, extra)
            u12 = rotation_unitary(label, axis, angle + extra)
            d = label.dimension
            assert np.abs(u1.conj().T @ u1 - np.eye(d)).max() < 1e-12
            assert np.abs(u1 @ u2 - u12).max() < 1e-12

    def test_full_turn_sign(self):
        # 2 pi gives (-1)^(2s); 4 pi is always the identity
        axis = np.array([0.0, 0.0, 1.0])
        for label in SPINS:
            d = label.dimension
            full = rotation_unitary(label, axis, 2.0 * math.pi)
            sign = -1.0 if label.twice_s % 2 else 1.0
            assert np.abs(full - sign * np.eye(d)).max() < 1e-12
            double = rotation_unitary(label, axis, 4.0 * math.pi)
            assert np.abs(double - np.eye(d)).max() < 1e-12

    def test_rejects_non_unit_axis(self):
        with pytest.raises(ContractViolation, match="unit"):
            rotation_unitary("1/2", [1.0, 1.0, 0.0], 0.3)
        with pytest.raises(ContractViolation, match="3-vector"):
            rotation_unitary("1/2", [1.0, 0.0], 0.3)


class TestCoupledStates:
    def test_spin_half_singlet_and_triplet(self):
        # basis order m = +1/2, -1/2: indices 1 and 2 hold |+-> and |-+>
        psi0 = coupled_zero_m_state("1/2", 0)
        r = 1.0 / math.sqrt(2.0)
        assert np.abs(psi0 - np.array([0.0, r, -r, 0.0])).max() < 1e-12
        psi1 = coupled_zero_m_state("1/2", 1)
        assert np.abs(psi1 - np.array([0.0, r, r, 0.0])).max() < 1e-12

    def test_spin_one_coupled_states(self):
        # basis order m = 1, 0, -1; index of |m> x |m'> is 3(1 - m) + (1 - m')
        up_down = 2  # |1,-1>
        mid = 4      # |0,0>
        down_up = 6  # |-1,1>
        psi0 = coupled_zero_m_state("1", 0)
        expected0 = np.zeros(9)
        expected0[[up_down, mid, down_up]] = np.array([1.0, -1.0, 1.0]) / math.sqrt(3.0)
        assert np.abs(psi0 - expected0).max() < 1e-12
        psi1 = coupled_zero_m_state("1", 1)
        expected1 = np.zeros(9)
        expected1[[up_down, down_up]] = np.array([1.0, -1.0]) / math.sqrt(2.0)
        assert np.abs(psi1 - expected1).max() < 1e-12
        psi2 = coupled_zero_m_state("1", 2)
        expected2 = np.zeros(9)
        expected2[[up_down, mid, down_up]] = np.array([1.0, 2.0, 1.0]) / math.sqrt(6.0)
        assert np.abs(psi2 - expected2).max() < 1e-12

    @pytest.mark.parametrize("label", SPINS)
    def test_orthonormal_eigenvectors(self, label):
        d = label.dimension
        states = np.stack([coupled_zero_m_state(label, j) for j in range(label.twice_s + 1)])
        overlaps = states.conj() @ states.T
        assert np.abs(overlaps - np.eye(d)).max() < 1e-10
        j_sq = total_spin_squared(label)
        for j in range(label.twice_s + 1):
            v = states[j]
            assert np.linalg.norm(j_sq @ v - j * (j + 1) * v) < 1e-10

    @pytest.mark.parametrize("label", SPINS)
    def test_phase_convention(self, label):
        # coefficient of |m=s> x |m=-s> is real and positive for every j
        d = label.dimension
        top_index = 0 * d + (d - 1)
        for j in range(label.twice_s + 1):
            coefficient = coupled_zero_m_state(label, j)[top_index]
            assert abs(coefficient.imag) < 1e-12
            assert coefficient.real > 0.0

    def test_alternating_sign_singlet(self):
        # |0;0> = sum_i (-1)^i |i> x |d-1-i> / sqrt(d) in the m-basis
        for label in SPINS[:4]:
            d = label.dimension
            expected = np.zeros(d * d)
            for i in range(d):
                expected[i * d + (d - 1 - i)] = (-1.0) ** i
            expected /= math.sqrt(d)
            assert np.abs(singlet_state(label) - expected).max() < 1e-12

    def test_singlet_rotation_invariance(self):
        rng = np.random.default_rng(32)
        for label in SPINS[:3]:
            psi = singlet_state(label)
            for _ in range(10):
                axis, angle = random_axis_angle(rng)
                u = rotation_unitary(label, axis, angle)
                rotated = np.kron(u, u) @ psi
                overlap = np.vdot(psi, rotated)
                assert np.linalg.norm(rotated - overlap * psi) < 1e-10
                assert abs(abs(overlap) - 1.0) < 1e-10

    def test_rejects_out_of_range_j(self):
        with pytest.raises(ContractViolation, match="range"):
            coupled_zero_m_state("1/2", 2)
        with pytest.raises(ContractViolation, match="integer"):
            coupled_zero_m_state("1/2", 0.5)
        with pytest.raises(ContractViolation):
            coupled_zero_m_state("1", -1)


class TestCasimirProjectors:
    @pytest.mark.parametrize("label", SPINS)
    def test_projector_algebra(self, label):
        blocks = casimir_projectors(label)
        d2 = label.dimension ** 2
        total = sum(blocks)
        assert np.abs(total - np.eye(d2)).max() < 1e-10
        for j, p in enumerate(blocks):
            assert np.abs(p @ p - p).max() < 1e-10
            assert np.abs(p - p.conj().T).max() < 1e-12
            assert abs(np.trace(p).real - (2 * j + 1)) < 1e-9
            for k in range(j):
                assert np.abs(blocks[k] @ p).max() < 1e-10

    def test_projectors_commute_with_rotations(self):
        rng = np.random.default_rng(33)
        label = SpinLabel(2)
        blocks = casimir_projectors(label)
        for _ in range(5):
            axis, angle = random_axis_angle(rng)
            u = rotation_unitary(label, axis, angle)
            w = np.kron(u, u)
            for p in blocks:
                assert np.abs(w @ p - p @ w).max() < 1e-10

    def test_projects_coupled_states_correctly(self):
        label = SpinLabel(3)
        blocks = casimir_projectors(label)
        for j in range(label.twice_s + 1):
            v = coupled_zero_m_state(label, j)
            for k, p in enumerate(blocks):
                expected = v if k == j else np.zeros_like(v)
                assert np.linalg.norm(p @ v - expected) < 1e-10

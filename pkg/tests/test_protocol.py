import numpy as np
import pytest

from bcabe.basis import BELL_LABELS, PHI_MINUS, PHI_PLUS, PSI_MINUS, bell_projector
from bcabe.construct import (
    NoisyWeights,
    RHO_PLUS,
    SIGMA_MINUS,
    STATE_CLASSES,
    bell_diagonal,
    noisy_state,
)
from bcabe.linalg import DensityMatrix, frobenius_distance, hermitian_eigenvalues, tensor
from bcabe.protocol import (
    ProtocolError,
    bell_fidelity,
    bell_measure,
    default_pairing,
    discriminate_subspace,
    unlock_sequential,
)
from conftest import random_density_matrix


class TestBellFidelity:
    def test_pure_bell_state(self):
        dm = DensityMatrix(2, bell_projector(PSI_MINUS))
        label, fid = bell_fidelity(dm)
        assert label == PSI_MINUS and fid == pytest.approx(1.0)

    def test_maximally_mixed_tie_break(self):
        label, fid = bell_fidelity(DensityMatrix(2, np.eye(4) / 4))
        assert label == PHI_PLUS and fid == pytest.approx(0.25)

    def test_bell_diagonal_mixture(self):
        dm = bell_diagonal(NoisyWeights(0.6, 0.4, 0.0, 0.0), "pi", +1)
        label, fid = bell_fidelity(dm)
        assert label == PHI_PLUS and fid == pytest.approx(0.6)

    def test_wrong_dimension(self):
        with pytest.raises(ProtocolError):
            bell_fidelity(DensityMatrix(3, np.eye(8) / 8))


class TestBellMeasure:
    def test_eigenstate_measurement(self):
        rng = np.random.default_rng(30)
        tau = random_density_matrix(rng, 2)
        dm = DensityMatrix(4, tensor(bell_projector(PHI_PLUS), tau.matrix))
        outcomes = bell_measure(dm, (1, 2))
        assert outcomes[0].label == PHI_PLUS
        assert outcomes[0].probability == pytest.approx(1.0)
        assert frobenius_distance(outcomes[0].post_state.matrix, tau.matrix) < 1e-12
        for o in outcomes[1:]:
            assert o.probability < 1e-14 and o.post_state is None

    def test_smolin_pair_outcomes(self, class_states):
        outcomes = bell_measure(class_states[(RHO_PLUS, 4)], (3, 4))
        assert [o.label for o in outcomes] == list(BELL_LABELS)
        for o in outcomes:
            assert o.probability == pytest.approx(0.25)
        phi_minus = outcomes[1]
        assert frobenius_distance(phi_minus.post_state.matrix, bell_projector(PHI_MINUS)) < 1e-12

    def test_probabilities_sum_to_one_random(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            dm = random_density_matrix(rng, 3)
            outcomes = bell_measure(dm, (2, 3))
            assert sum(o.probability for o in outcomes) == pytest.approx(1.0, abs=1e-12)

    def test_bad_pairs(self):
        rng = np.random.default_rng(32)
        dm = random_density_matrix(rng, 3)
        with pytest.raises(ProtocolError):
            bell_measure(dm, (2, 2))
        with pytest.raises(ProtocolError):
            bell_measure(dm, (1, 7))


class TestUnlockSequential:
    def test_smolin_four_branches(self, class_states):
        result = unlock_sequential(class_states[(RHO_PLUS, 4)], (1, 2))
        assert len(result.branches) == 4
        assert result.total_probability == pytest.approx(1.0, abs=1e-12)
        for b in result.branches:
            assert b.probability == pytest.approx(0.25)
            assert b.fidelity == pytest.approx(1.0, abs=1e-12)
            assert b.best_label == b.labels[0]  # rho+ carries the identity label
        assert result.min_fidelity > 1 - 1e-10
        assert result.xor_rule_holds

    def test_six_qubit_branch_states(self, class_states):
        result = unlock_sequential(class_states[(RHO_PLUS, 6)], (1, 2))
        assert len(result.branches) == 16
        for b in result.branches:
            assert b.probability == pytest.approx(1 / 16)
            expected = b.labels[0] ^ b.labels[1]  # rho+ class label is identity
            assert b.best_label == expected
            assert b.fidelity == pytest.approx(1.0, abs=1e-12)
        phi_phi = next(
            b for b in result.branches if b.labels == (PHI_PLUS, PHI_PLUS)
        )
        assert frobenius_distance(phi_phi.state.matrix, bell_projector(PHI_PLUS)) < 1e-12

    def test_xor_rule_all_classes(self, class_states):
        for cls in STATE_CLASSES:
            result = unlock_sequential(class_states[(cls, 6)], (1, 2))
            assert result.xor_rule_holds
            for b in result.branches:
                assert b.best_label == cls.label ^ b.labels[0] ^ b.labels[1]

    def test_noisy_branches_bell_diagonal_with_top_weight(self):
        w = NoisyWeights(0.4, 0.3, 0.2, 0.1)
        result = unlock_sequential(noisy_state(w, 4), (1, 2))
        for b in result.branches:
            assert b.fidelity == pytest.approx(0.4, abs=1e-12)
            eigs = hermitian_eigenvalues(b.state.matrix)
            assert np.allclose(np.sort(eigs), [0.1, 0.2, 0.3, 0.4], atol=1e-12)

    def test_keep_pair_independence(self, class_states):
        reference = None
        for keep in ((1, 2), (1, 3), (2, 4), (3, 4)):
            result = unlock_sequential(class_states[(SIGMA_MINUS, 4)], keep)
            signature = sorted((b.probability, b.fidelity) for b in result.branches)
            if reference is None:
                reference = signature
            else:
                assert np.allclose(signature, reference, atol=1e-10)

    def test_custom_pairing_equivalent(self, class_states):
        rho6 = class_states[(RHO_PLUS, 6)]
        default = unlock_sequential(rho6, (1, 2))
        crossed = unlock_sequential(rho6, (1, 2), pairing=((3, 6), (4, 5)))
        assert crossed.pairing == ((3, 6), (4, 5))
        a = sorted((b.probability, b.fidelity) for b in default.branches)
        c = sorted((b.probability, b.fidelity) for b in crossed.branches)
        assert np.allclose(a, c, atol=1e-10)
        assert crossed.xor_rule_holds

    def test_dead_branches_recorded(self):
        dm = DensityMatrix(
            4, tensor(bell_projector(PHI_PLUS), bell_projector(PSI_MINUS))
        )
        result = unlock_sequential(dm, (1, 2))
        live = [b for b in result.branches if b.state is not None]
        assert len(live) == 1 and live[0].labels == (PSI_MINUS,)
        assert live[0].probability == pytest.approx(1.0)
        dead = [b for b in result.branches if b.state is None]
        assert len(dead) == 3
        assert all(b.fidelity is None for b in dead)

    def test_pairing_must_cover_rest(self, class_states):
        with pytest.raises(ProtocolError):
            unlock_sequential(class_states[(RHO_PLUS, 6)], (1, 2), pairing=((3, 4),))
        with pytest.raises(ProtocolError):
            unlock_sequential(
                class_states[(RHO_PLUS, 6)], (1, 2), pairing=((3, 4), (4, 5))
            )

    def test_default_pairing(self):
        assert default_pairing(8, (3, 6)) == ((1, 2), (4, 5), (7, 8))


class TestDiscriminateSubspace:
    def test_six_qubit_correlation_pattern(self, class_states):
        outcomes = discriminate_subspace(class_states[(RHO_PLUS, 6)], (3, 4, 5, 6))
        assert [o.label for o in outcomes] == list(STATE_CLASSES)
        for o in outcomes:
            assert o.probability == pytest.approx(0.25, abs=1e-12)
            label, fid = bell_fidelity(o.post_state)
            assert label == o.label.label  # kept pair Bell label matches class
            assert fid == pytest.approx(1.0, abs=1e-10)

    def test_four_qubit_base_case(self, class_states):
        outcomes = discriminate_subspace(class_states[(RHO_PLUS, 4)], (3, 4))
        for o in outcomes:
            assert o.probability == pytest.approx(0.25, abs=1e-12)
            label, fid = bell_fidelity(o.post_state)
            assert label == o.label.label and fid == pytest.approx(1.0, abs=1e-10)

    def test_maximally_mixed(self):
        dm = DensityMatrix(4, np.eye(16) / 16)
        outcomes = discriminate_subspace(dm, (3, 4))
        for o in outcomes:
            assert o.probability == pytest.approx(0.25, abs=1e-12)
            assert frobenius_distance(o.post_state.matrix, np.eye(4) / 4) < 1e-12
            _, fid = bell_fidelity(o.post_state)
            assert fid == pytest.approx(0.25)

    def test_group_must_leave_one_pair(self, class_states):
        with pytest.raises(ProtocolError):
            discriminate_subspace(class_states[(RHO_PLUS, 4)], (2, 3, 4))

    def test_agrees_with_unlock_marginal_on_random_state(self):
        # grouping unlock branches by the xor of their labels reproduces the
        # four-outcome subspace discrimination, for arbitrary input states
        rng = np.random.default_rng(33)
        dm = random_density_matrix(rng, 6)
        unlock = unlock_sequential(dm, (1, 2))
        disc = discriminate_subspace(dm, (3, 4, 5, 6))
        for outcome in disc:
            matching = [
                b
                for b in unlock.branches
                if (b.labels[0] ^ b.labels[1]) == outcome.label.label
            ]
            p = sum(b.probability for b in matching)
            assert p == pytest.approx(outcome.probability, abs=1e-12)
            mixed = sum(b.probability * b.state.matrix for b in matching) / p
            assert frobenius_distance(mixed, outcome.post_state.matrix) < 1e-10

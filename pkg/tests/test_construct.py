import numpy as np
import pytest

from bcabe.basis import BELL_LABELS, BellLabel, bell_projector
from bcabe.construct import (
    ConstructError,
    NoisyWeights,
    RHO_MINUS,
    RHO_PLUS,
    SIGMA_MINUS,
    SIGMA_PLUS,
    STATE_CLASSES,
    StateClass,
    bell_diagonal,
    noisy_state,
    pauli_relate,
    projector_direct,
    projector_recursive,
)
from bcabe.linalg import frobenius_distance, partial_trace, tensor


class TestStateClass:
    def test_parse_and_descriptor(self):
        for text, cls in [
            ("rho+", RHO_PLUS),
            ("rho-", RHO_MINUS),
            ("sigma+", SIGMA_PLUS),
            ("SIGMA-", SIGMA_MINUS),
        ]:
            assert StateClass.parse(text) == cls
        with pytest.raises(ConstructError):
            StateClass.parse("tau+")

    def test_xor_action_matches_pauli_table(self):
        # z flips the sign, x swaps the family, y does both
        assert RHO_PLUS ^ BellLabel(0, 1) == RHO_MINUS
        assert RHO_PLUS ^ BellLabel(1, 0) == SIGMA_PLUS
        assert RHO_PLUS ^ BellLabel(1, 1) == SIGMA_MINUS


class TestProjectorDirect:
    def test_smolin_spot_entries(self):
        rho = projector_direct(RHO_PLUS, 4)
        assert rho.matrix[0, 0] == pytest.approx(0.125)
        assert rho.matrix[0, 15] == pytest.approx(0.125)

    def test_base_case_is_bell_projector(self):
        for cls in STATE_CLASSES:
            dm = projector_direct(cls, 2)
            assert np.abs(dm.matrix - bell_projector(cls.label)).max() < 1e-15

    def test_rank_and_idempotence_up_to_scale(self):
        for n in (4, 6):
            for cls in STATE_CLASSES:
                dm = projector_direct(cls, n)
                proj = dm.matrix * 2 ** (n - 2)
                assert np.abs(proj @ proj - proj).max() < 1e-12
                assert np.trace(proj).real == pytest.approx(2 ** (n - 2))

    def test_sigma4_minus_diagonal_on_odd_parity_strings(self):
        dm = projector_direct(SIGMA_MINUS, 4)
        diag = np.diag(dm.matrix).real
        for idx in range(16):
            parity = bin(idx).count("1") % 2
            if parity == 1:
                assert diag[idx] == pytest.approx(1 / 8)
            else:
                assert diag[idx] == 0.0

    def test_smolin_pair_marginal_maximally_mixed(self):
        rho = projector_direct(RHO_PLUS, 4)
        red = partial_trace(rho, {1, 2})
        assert np.abs(red.matrix - np.eye(4) / 4).max() < 1e-14

    def test_odd_n_rejected(self):
        with pytest.raises(ConstructError):
            projector_direct(RHO_PLUS, 5)


class TestPauliRelate:
    def test_z_maps_rho_plus_to_rho_minus(self):
        base = projector_direct(RHO_PLUS, 4)
        related = pauli_relate(base, RHO_MINUS)
        target = projector_direct(RHO_MINUS, 4)
        assert frobenius_distance(related.matrix, target.matrix) < 1e-12

    def test_involution(self):
        base = projector_direct(RHO_PLUS, 4)
        twice = pauli_relate(pauli_relate(base, SIGMA_PLUS), SIGMA_PLUS)
        assert frobenius_distance(twice.matrix, base.matrix) < 1e-12

    def test_x_maps_rho6_plus_to_sigma6_plus(self):
        base = projector_direct(RHO_PLUS, 6)
        related = pauli_relate(base, SIGMA_PLUS)
        target = projector_direct(SIGMA_PLUS, 6)
        assert frobenius_distance(related.matrix, target.matrix) < 1e-12

    def test_identity_target_returns_base(self):
        base = projector_direct(RHO_PLUS, 4)
        assert pauli_relate(base, RHO_PLUS) is base


class TestRecursion:
    def test_smolin_form(self):
        rec = projector_recursive(RHO_PLUS, 4)
        smolin = sum(
            tensor(bell_projector(b), bell_projector(b)) for b in BELL_LABELS
        ) / 4
        assert np.abs(rec.matrix - smolin).max() < 1e-14

    def test_rho4_minus_is_cross_correlated_bell_form(self):
        # the sign-flipped four-qubit state pairs each Bell label with its
        # phase-flipped partner
        rec = projector_recursive(RHO_MINUS, 4)
        phi_p, phi_m, psi_p, psi_m = (bell_projector(b) for b in BELL_LABELS)
        cross = (
            tensor(phi_p, phi_m) + tensor(phi_m, phi_p)
            + tensor(psi_p, psi_m) + tensor(psi_m, psi_p)
        ) / 4
        assert np.abs(rec.matrix - cross).max() < 1e-14

    def test_six_qubit_bell_correlated_form(self):
        rec = projector_recursive(RHO_PLUS, 6)
        explicit = (
            tensor(bell_projector(BELL_LABELS[0]), projector_direct(RHO_PLUS, 4).matrix)
            + tensor(bell_projector(BELL_LABELS[1]), projector_direct(RHO_MINUS, 4).matrix)
            + tensor(bell_projector(BELL_LABELS[2]), projector_direct(SIGMA_PLUS, 4).matrix)
            + tensor(bell_projector(BELL_LABELS[3]), projector_direct(SIGMA_MINUS, 4).matrix)
        ) / 4
        assert frobenius_distance(rec.matrix, explicit) < 1e-13

    @pytest.mark.parametrize("n", [4, 6])
    def test_direct_equals_recursive(self, n):
        for cls in STATE_CLASSES:
            d = projector_direct(cls, n)
            r = projector_recursive(cls, n)
            assert frobenius_distance(d.matrix, r.matrix) < 1e-12

    def test_inner_class_is_outer_xor_label(self):
        # the only rule in the recursion: peeling Bell label b from class c
        # leaves class c ^ b on the remaining qubits; check all 16 pairs
        for cls in STATE_CLASSES:
            outer = projector_direct(cls, 6).matrix
            for b in BELL_LABELS:
                inner = projector_direct(cls ^ b, 4).matrix
                # project outer onto [b] on qubits (1,2): trace out the pair
                pb = tensor(bell_projector(b), np.eye(16))
                block = pb @ outer @ pb
                got = np.einsum("aibj,ab->ij", block.reshape(4, 16, 4, 16), np.eye(4))
                assert np.abs(got - inner / 4).max() < 1e-12


class TestCompleteness:
    @pytest.mark.parametrize("n", [4, 6])
    def test_projectors_sum_to_identity(self, n):
        total = sum(
            2 ** (n - 2) * projector_direct(cls, n).matrix for cls in STATE_CLASSES
        )
        assert np.abs(total - np.eye(2**n)).max() < 1e-12

    @pytest.mark.parametrize("n", [4, 6])
    def test_mutual_orthogonality(self, n):
        mats = [projector_direct(cls, n).matrix for cls in STATE_CLASSES]
        for i, a in enumerate(mats):
            for b in mats[i + 1 :]:
                assert np.abs(a @ b).max() < 1e-12


class TestNoisyWeights:
    def test_validation(self):
        with pytest.raises(ConstructError):
            NoisyWeights(0.5, 0.5, 0.5, -0.5)
        with pytest.raises(ConstructError):
            NoisyWeights(0.5, 0.4, 0.0, 0.0)
        w = NoisyWeights.parse("0.6,0.4,0,0")
        assert w.w_max == 0.6
        assert w.as_tuple() == (0.6, 0.4, 0.0, 0.0)

    def test_parse_rejects_wrong_arity(self):
        with pytest.raises(ConstructError):
            NoisyWeights.parse("0.5,0.5")


class TestNoisyState:
    def test_degenerate_mixture(self):
        w = NoisyWeights(1.0, 0.0, 0.0, 0.0)
        assert (
            frobenius_distance(
                noisy_state(w, 4).matrix, projector_direct(RHO_PLUS, 4).matrix
            )
            == 0.0
        )

    def test_uniform_mixture_is_maximally_mixed(self):
        w = NoisyWeights(0.25, 0.25, 0.25, 0.25)
        assert np.abs(noisy_state(w, 4).matrix - np.eye(16) / 16).max() < 1e-14

    def test_six_qubit_expansion_term_by_term(self):
        x_plus, x_minus = 0.6, 0.4
        w = NoisyWeights(x_plus, x_minus, 0.0, 0.0)
        got = noisy_state(w, 6).matrix
        four = {cls: projector_direct(cls, 4).matrix for cls in STATE_CLASSES}
        phi_p, phi_m, psi_p, psi_m = (bell_projector(b) for b in BELL_LABELS)
        expansion = x_plus / 4 * (
            tensor(phi_p, four[RHO_PLUS])
            + tensor(phi_m, four[RHO_MINUS])
            + tensor(psi_p, four[SIGMA_PLUS])
            + tensor(psi_m, four[SIGMA_MINUS])
        ) + x_minus / 4 * (
            tensor(phi_p, four[RHO_MINUS])
            + tensor(phi_m, four[RHO_PLUS])
            + tensor(psi_p, four[SIGMA_MINUS])
            + tensor(psi_m, four[SIGMA_PLUS])
        )
        assert np.abs(got - expansion).max() < 1e-14


class TestBellDiagonal:
    def test_pi_plus_degenerate(self):
        w = NoisyWeights(1.0, 0.0, 0.0, 0.0)
        dm = bell_diagonal(w, "pi", +1)
        assert np.abs(dm.matrix - bell_projector(BELL_LABELS[0])).max() < 1e-15

    def test_gamma_plus_degenerate(self):
        w = NoisyWeights(1.0, 0.0, 0.0, 0.0)
        dm = bell_diagonal(w, "gamma", +1)
        assert np.abs(dm.matrix - bell_projector(BELL_LABELS[2])).max() < 1e-15

    def test_werner_line_reproduces_werner_state(self):
        for w_val in (0.3, 0.5, 0.8):
            rest = (1 - w_val) / 3
            dm = bell_diagonal(NoisyWeights(w_val, rest, rest, rest), "pi", +1)
            p = (4 * w_val - 1) / 3
            werner = p * bell_projector(BELL_LABELS[0]) + (1 - p) * np.eye(4) / 4
            assert np.abs(dm.matrix - werner).max() < 1e-14

    def test_bad_family(self):
        with pytest.raises(ConstructError):
            bell_diagonal(NoisyWeights(1, 0, 0, 0), "omega", +1)

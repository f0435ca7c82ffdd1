import numpy as np
import pytest

from torsionbus.hilbert import (
    SpaceLayout,
    basis_state,
    create,
    destroy,
    dress_nv,
    dressed_from_lab,
    embed,
    identity,
    number,
    nv_hamiltonian_lab,
    partial_trace_nv,
    sigma_minus,
    sigma_plus,
    tripartite_ops,
)

LAYOUT = SpaceLayout(fock_dim=6)


class TestOperators:
    def test_ladder_commutator_truncated(self):
        nf = 8
        b, bd = destroy(nf), create(nf)
        comm = b @ bd - bd @ b
        # canonical on all but the top truncated level
        assert np.allclose(np.diag(comm)[:-1], 1.0)
        assert np.allclose(comm - np.diag(np.diag(comm)), 0.0)

    def test_number_operator(self):
        nf = 7
        assert np.allclose(number(nf), create(nf) @ destroy(nf))
        assert np.allclose(np.diag(number(nf)), np.arange(nf))

    def test_two_level_completeness(self):
        sm, sp = sigma_minus(), sigma_plus()
        assert np.allclose(sp @ sm + sm @ sp, np.eye(2))

    def test_fock_dim_validation(self):
        with pytest.raises(ValueError):
            destroy(1)
        with pytest.raises(ValueError):
            SpaceLayout(fock_dim=1)

    def test_named_operator_sets(self):
        from torsionbus.hilbert import ladder_ops, pauli_ops

        ops = pauli_ops()
        assert np.allclose(ops["plus"] @ ops["minus"] - ops["minus"] @ ops["plus"], ops["z"])
        b, bd = ladder_ops(5)
        assert np.allclose(bd, b.conj().T)

    def test_layout_ordering(self):
        assert LAYOUT.ordering == ("TP", "Tor", "NV")


class TestEmbed:
    def test_identity_embeds_to_identity(self):
        out = embed(identity(2), "TP", LAYOUT)
        assert np.allclose(out, identity(LAYOUT.total_dim))

    def test_disjoint_slots_commute(self):
        o = tripartite_ops(LAYOUT)
        a = o.tp_z
        b = o.n_phonon
        assert np.allclose(a @ b, b @ a)

    def test_trace_multiplies(self):
        op = np.array([[0.3, 0.1], [0.1, 0.7]], dtype=complex)
        out = embed(op, "NV", LAYOUT)
        assert np.trace(out) == pytest.approx(np.trace(op) * 2 * LAYOUT.fock_dim)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            embed(identity(3), "TP", LAYOUT)
        with pytest.raises(ValueError):
            embed(identity(2), "Cavity", LAYOUT)

    def test_basis_state_index_layout(self):
        psi = basis_state(LAYOUT, 1, 2, 0)
        o = tripartite_ops(LAYOUT)
        assert np.vdot(psi, o.tp_plus @ o.tp_minus @ psi).real == pytest.approx(1.0)
        assert np.vdot(psi, o.n_phonon @ psi).real == pytest.approx(2.0)
        assert np.vdot(psi, o.nv_plus @ o.nv_minus @ psi).real == pytest.approx(0.0)
        with pytest.raises(ValueError):
            basis_state(LAYOUT, 0, LAYOUT.fock_dim, 0)

    def test_partial_trace_nv(self):
        psi = basis_state(LAYOUT, 0, 1, 1)
        red = partial_trace_nv(np.outer(psi, psi.conj()), LAYOUT)
        assert np.allclose(red, np.diag([0.0, 1.0]))


class TestDressNV:
    def test_undriven_limit(self):
        with pytest.warns(UserWarning, match="undriven"):
            d = dress_nv(1.5, 0.0)
        assert d.mixing_angle_alpha == pytest.approx(0.0)
        assert np.allclose(d.basis_vectors[0], [1, 0, 0])  # |g> = |0>
        assert d.omega_e == pytest.approx(1.5)
        assert d.omega_d == pytest.approx(1.5)

    def test_symmetric_limit(self):
        d = dress_nv(0.0, 0.7)
        assert d.mixing_angle_alpha == pytest.approx(np.pi / 4)
        assert d.omega_e == pytest.approx(np.sqrt(2) * 0.7, rel=1e-12)
        assert d.omega_g == pytest.approx(-np.sqrt(2) * 0.7, rel=1e-12)

    def test_mixing_angle_relation(self):
        d = dress_nv(2.0, 0.9)
        assert np.tan(2 * d.mixing_angle_alpha) == pytest.approx(
            2 * np.sqrt(2) * 0.9 / 2.0, rel=1e-12
        )

    def test_generic_diagonalization_oracle(self):
        delta, omega = 1.3, 0.45
        d = dress_nv(delta, omega)
        # rotating-frame Hamiltonian over {|0>, |b>, |d>}
        h = np.array(
            [
                [0.0, np.sqrt(2) * omega, 0.0],
                [np.sqrt(2) * omega, delta, 0.0],
                [0.0, 0.0, delta],
            ],
            dtype=complex,
        )
        for vec, freq in zip(d.basis_vectors, (d.omega_g, d.omega_d, d.omega_e)):
            assert np.allclose(h @ vec, freq * vec, atol=1e-12)
        # orthonormality
        gram = d.basis_vectors @ d.basis_vectors.conj().T
        assert np.allclose(gram, np.eye(3), atol=1e-12)

    def test_trace_invariant(self):
        delta, omega = 0.8, 0.33
        d = dress_nv(delta, omega)
        assert d.omega_g + d.omega_d + d.omega_e == pytest.approx(2 * delta, abs=1e-12)

    def test_both_zero_rejected(self):
        with pytest.raises(ValueError):
            dress_nv(0.0, 0.0)


class TestNVLab:
    D_GS = 2.87e9

    def test_no_drive_is_diagonal(self):
        h = nv_hamiltonian_lab(self.D_GS, 1.0, 2.0, 0.1, 0.0, 2.80e9)
        assert np.allclose(h - np.diag(np.diag(h)), 0.0)
        assert h[0, 0] == 0.0

    def test_symmetric_detuning(self):
        h = nv_hamiltonian_lab(self.D_GS, 0.0, 5.0, 0.0, 0.5, 2.80e9)
        assert h[1, 1] == pytest.approx(self.D_GS - 2.80e9)
        assert h[2, 2] == pytest.approx(self.D_GS - 2.80e9)

    def test_eigenvalues_match_dressed_construction(self):
        omega_0 = 2.80e9
        b_drive = 0.5
        h = nv_hamiltonian_lab(self.D_GS, 0.0, 5.0, 0.0, b_drive, omega_0)
        delta = self.D_GS - omega_0
        omega = np.sqrt(2) / 4.0 * 2.0 * 14.0e6 * b_drive
        d = dress_nv(delta, omega)
        got = np.sort(np.linalg.eigvalsh(h))
        expected = np.sort([d.omega_g, d.omega_d, d.omega_e])
        assert np.allclose(got, expected, rtol=1e-12)

    def test_dressed_basis_change(self):
        h = nv_hamiltonian_lab(self.D_GS, 0.0, 5.0, 0.0, 0.4, 2.80e9)
        hb = dressed_from_lab(h)
        # |d> decouples: no off-diagonal elements in its row/column
        assert abs(hb[0, 2]) < 1e-9
        assert abs(hb[1, 2]) < 1e-9

import numpy as np
import pytest

from torsionbus.hilbert import SpaceLayout, basis_state, tripartite_ops
from torsionbus.lindblad import evolve
from torsionbus.models import (
    HybridModel,
    polariton_decomposition,
    single_excitation_block,
    spin_torsion_hamiltonian,
    topology_torsion_hamiltonian,
)
from torsionbus.protocols import PulseSchedule, paper_dark_schedules

LAYOUT = SpaceLayout(fock_dim=6)


def _slot_swap_permutation(layout: SpaceLayout) -> np.ndarray:
    """Permutation matrix exchanging the TP and NV slots."""
    dim = layout.total_dim
    nf = layout.fock_dim
    p = np.zeros((dim, dim))
    for tp in range(2):
        for n in range(nf):
            for nv in range(2):
                src = (tp * nf + n) * 2 + nv
                dst = (nv * nf + n) * 2 + tp
                p[dst, src] = 1.0
    return p


class TestTopologyTorsion:
    def test_zero_coupling_is_free(self):
        h = topology_torsion_hamiltonian(1.0, 1.0, 0.0, rwa=True, layout=LAYOUT)
        o = tripartite_ops(LAYOUT)
        assert np.allclose(h, o.n_phonon + 0.5 * o.tp_z)

    def test_resonant_swap(self):
        # |1>_TP |0>_m fully transfers to |0>_TP |1>_m at t = pi/(2g)
        g = 1.0
        h = topology_torsion_hamiltonian(5.0, 5.0, g, rwa=True, layout=LAYOUT)
        psi = basis_state(LAYOUT, 1, 0, 0)
        times = np.linspace(0.0, np.pi / (2 * g), 60)
        traj = evolve(h, None, np.outer(psi, psi.conj()), times,
                      observables={"n": tripartite_ops(LAYOUT).n_phonon})
        assert traj.occupations["n"][-1] == pytest.approx(1.0, abs=1e-6)

    def test_rwa_validity_at_weak_coupling(self):
        # g / omega_m = 0.05: populations with and without RWA agree to 1e-2
        g, omega = 1.0, 20.0
        o = tripartite_ops(LAYOUT)
        psi = basis_state(LAYOUT, 1, 0, 0)
        rho0 = np.outer(psi, psi.conj())
        times = np.linspace(0.0, np.pi / (2 * g), 80)
        occ = {}
        for rwa in (True, False):
            h = topology_torsion_hamiltonian(omega, omega, g, rwa=rwa, layout=LAYOUT)
            traj = evolve(h, None, rho0, times, observables={"p": o.tp_plus @ o.tp_minus})
            occ[rwa] = traj.occupations["p"]
        assert np.max(np.abs(occ[True] - occ[False])) < 1e-2


class TestSpinTorsion:
    def test_zero_coupling_is_free(self):
        h = spin_torsion_hamiltonian(1.0, 1.0, 0.0, layout=LAYOUT)
        o = tripartite_ops(LAYOUT)
        assert np.allclose(h, o.n_phonon + 0.5 * o.nv_z)

    def test_resonant_swap_period(self):
        lam = 0.8
        h = spin_torsion_hamiltonian(3.0, 3.0, lam, layout=LAYOUT)
        o = tripartite_ops(LAYOUT)
        psi = basis_state(LAYOUT, 0, 0, 1)   # NV excited
        times = np.linspace(0.0, np.pi / (2 * lam), 50)
        traj = evolve(h, None, np.outer(psi, psi.conj()), times, observables={"n": o.n_phonon})
        assert traj.occupations["n"][-1] == pytest.approx(1.0, abs=1e-6)

    def test_slot_exchange_symmetry(self):
        # the spin-torsion matrix is the topology-torsion one under slot
        # exchange and the g -> -lambda_e sign flip
        lam, omega = 0.7, 2.0
        h_nv = spin_torsion_hamiltonian(omega, omega, lam, layout=LAYOUT)
        h_tp = topology_torsion_hamiltonian(omega, omega, -lam, rwa=True, layout=LAYOUT)
        p = _slot_swap_permutation(LAYOUT)
        assert np.allclose(p @ h_nv @ p.T, h_tp, atol=1e-12)


class TestFullHamiltonian:
    def test_zero_outside_pulse_support(self):
        g, lam = paper_dark_schedules()
        model = HybridModel(layout=LAYOUT, g_envelope=g, lambda_envelope=lam)
        h = model.hamiltonian(200.0)
        assert np.max(np.abs(h)) < 1e-12

    def test_single_excitation_eigenvalues(self):
        g, lam = 0.9, 1.4
        block = single_excitation_block(g, lam)
        w = np.sort(np.linalg.eigvalsh(block))
        rabi = np.hypot(g, lam)
        assert np.allclose(w, [-rabi, 0.0, rabi], atol=1e-12)

    def test_hermitian_at_random_times(self, rng):
        model = HybridModel(layout=LAYOUT, g_envelope=paper_dark_schedules()[0],
                            lambda_envelope=paper_dark_schedules()[1],
                            delta_tp=0.2, delta_nv=-0.1)
        for t in rng.uniform(-5, 20, size=1000):
            h = model.hamiltonian(t)
            assert np.max(np.abs(h - h.conj().T)) < 1e-12

    def test_linearity_in_envelopes(self):
        lam = PulseSchedule(kind="constant", amplitude=0.8)
        def at(gval):
            m = HybridModel(layout=LAYOUT,
                            g_envelope=PulseSchedule(kind="constant", amplitude=gval),
                            lambda_envelope=lam)
            return m.hamiltonian(0.3)
        assert np.allclose(at(0.4) + at(0.9) - at(0.0), at(1.3), atol=1e-12)

    def test_excitation_conservation_rwa(self):
        g, lam = paper_dark_schedules()
        model = HybridModel(layout=LAYOUT, g_envelope=g, lambda_envelope=lam)
        n_op = model.ops.total_excitation
        for t in np.linspace(0.0, 4 * np.pi, 40):
            h = model.hamiltonian(t)
            assert np.max(np.abs(h @ n_op - n_op @ h)) < 1e-12

    def test_from_frequencies_sets_detunings(self):
        const = PulseSchedule(kind="constant", amplitude=0.5)
        model = HybridModel.from_frequencies(
            omega_m=2.0, omega_tp=2.3, omega_nv=1.9,
            g_envelope=const, lambda_envelope=const, layout=LAYOUT,
        )
        assert model.delta_tp == pytest.approx(0.3)
        assert model.delta_nv == pytest.approx(-0.1)
        o = tripartite_ops(LAYOUT)
        expected = (
            -0.5 * (o.b_dag @ o.tp_minus + o.b @ o.tp_plus)
            + 0.5 * (o.b_dag @ o.nv_minus + o.b @ o.nv_plus)
            + 0.15 * o.tp_z
            - 0.05 * o.nv_z
        )
        assert np.allclose(model.hamiltonian(0.0), expected, atol=1e-12)


class TestPolaritons:
    def test_g_zero_limit(self):
        d = polariton_decomposition(0.0, 1.0, 1.0)
        assert d.beta == pytest.approx(0.0)
        # dark mode is the bare topological lowering operator (up to sign)
        assert abs(abs(np.vdot(d.dark_vector, [1, 0, 0])) - 1.0) < 1e-12

    def test_lambda_zero_limit(self):
        d = polariton_decomposition(1.0, 0.0, 1.0)
        assert d.beta == pytest.approx(np.pi / 2)
        assert abs(abs(np.vdot(d.dark_vector, [0, 0, 1])) - 1.0) < 1e-12

    def test_dark_mode_has_no_phonon_component(self):
        for g, lam in [(0.3, 1.2), (2.0, 0.01), (1.0, 1.0)]:
            d = polariton_decomposition(g, lam, 1.0)
            assert abs(d.dark_vector[1]) < 1e-15

    def test_mode_vectors_orthonormal(self):
        d = polariton_decomposition(0.7, 1.1, 2.0)
        gram = d.mode_vectors @ d.mode_vectors.conj().T
        assert np.allclose(gram, np.eye(3), atol=1e-12)

    def test_frequencies_match_numerical_eigenvalues(self):
        g, lam, omega_m = 0.6, 1.3, 0.0   # interaction picture: omega_m = 0
        d = polariton_decomposition(g, lam, omega_m)
        w = np.sort(np.linalg.eigvalsh(single_excitation_block(g, lam)))
        assert np.allclose(w, d.frequencies, atol=1e-12)

    def test_modes_are_eigenvectors(self):
        g, lam = 0.6, 1.3
        block = single_excitation_block(g, lam)
        d = polariton_decomposition(g, lam, 0.0)
        for vec, freq in zip(d.mode_vectors, d.frequencies):
            assert np.allclose(block @ vec, freq * vec, atol=1e-12)

    def test_undefined_for_zero_couplings(self):
        with pytest.raises(ValueError):
            polariton_decomposition(0.0, 0.0, 1.0)

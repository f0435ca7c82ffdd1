"""Hamiltonians of the hybrid tripartite system and the polariton analysis.

The torsional mode is the bus: it couples to the topological qubit with
strength g(t) (sign convention -g, from the magneto-Josephson expansion) and
to the NV dressed qubit with strength +lambda_e(t).  The default frame is
the resonant interaction picture, where the free terms cancel and only the
two Jaynes-Cummings couplings evolve the state; explicit detunings
(delta_tp, delta_nv) * sigma_z / 2 are available for off-resonance studies.

All frequencies are in simulation units (hbar = 1, g0 = 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .constants import HBAR, MEV
from .hilbert import SpaceLayout, TripartiteOps, tripartite_ops

__all__ = [
    "HybridModel",
    "PolaritonDecomposition",
    "TopologicalQubitMap",
    "topology_torsion_hamiltonian",
    "spin_torsion_hamiltonian",
    "full_hamiltonian",
    "polariton_decomposition",
]

Envelope = Callable[[float], float]


def _constant(value: float) -> Envelope:
    return lambda t: value


@dataclass(frozen=True)
class TopologicalQubitMap:
    """Pauli encoding of the four-Majorana qubit in the odd-parity subspace.

    The hybridization energies map onto Pauli operators as
    i g1 g2 -> -sigma_z, i g2 g3 -> -sigma_x, i g3 g4 -> +sigma_z, so the
    qubit transition frequency is set by E_r - E_l and the middle coupling
    E_m drives sigma_x.  Energies are in meV; omega_tp is in rad/s.
    """

    E_l: float
    E_m: float
    E_r: float

    pauli_map = {"i*g1*g2": "-sz", "i*g2*g3": "-sx", "i*g3*g4": "+sz"}

    @property
    def omega_tp(self) -> float:
        return (self.E_r - self.E_l) * MEV / HBAR


@dataclass(frozen=True)
class HybridModel:
    """Time-dependent generator of the tripartite dynamics.

    ``g_envelope`` and ``lambda_envelope`` are callables returning the
    coupling amplitudes (g0 units) at time t (1/g0 units).  With rwa=True
    the couplings are Jaynes-Cummings exchanges and the total excitation
    number commutes with H(t); rwa=False restores the full
    -g (b' + b) sigma_x form of the topology-torsion coupling.
    """

    layout: SpaceLayout = SpaceLayout()
    g_envelope: Envelope = staticmethod(_constant(1.0))
    lambda_envelope: Envelope = staticmethod(_constant(1.0))
    delta_tp: float = 0.0
    delta_nv: float = 0.0
    rwa: bool = True
    ops: TripartiteOps = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ops", tripartite_ops(self.layout))

    def hamiltonian(self, t: float) -> np.ndarray:
        """H(t) in the frame rotating at the common resonance frequency."""
        o = self.ops
        g = float(self.g_envelope(t))
        lam = float(self.lambda_envelope(t))
        if self.rwa:
            h = -g * (o.b_dag @ o.tp_minus + o.b @ o.tp_plus)
        else:
            h = -g * ((o.b_dag + o.b) @ (o.tp_minus + o.tp_plus))
        h = h + lam * (o.b_dag @ o.nv_minus + o.b @ o.nv_plus)
        if self.delta_tp:
            h = h + 0.5 * self.delta_tp * o.tp_z
        if self.delta_nv:
            h = h + 0.5 * self.delta_nv * o.nv_z
        return h

    def __call__(self, t: float) -> np.ndarray:
        return self.hamiltonian(t)

    @classmethod
    def from_frequencies(
        cls,
        omega_m: float,
        omega_tp: float,
        omega_nv: float,
        g_envelope: Envelope,
        lambda_envelope: Envelope,
        layout: SpaceLayout = SpaceLayout(),
        rwa: bool = True,
    ) -> "HybridModel":
        """Model from absolute mode frequencies; the common rotation at
        omega_m is removed, leaving the two qubit detunings."""
        return cls(
            layout=layout,
            g_envelope=g_envelope,
            lambda_envelope=lambda_envelope,
            delta_tp=omega_tp - omega_m,
            delta_nv=omega_nv - omega_m,
            rwa=rwa,
        )


def topology_torsion_hamiltonian(
    omega_m: float,
    omega_tp: float,
    g: float,
    rwa: bool,
    layout: SpaceLayout = SpaceLayout(),
) -> np.ndarray:
    """Topology-torsion Hamiltonian with explicit free terms.

    H = omega_m b'b + omega_tp sigma_z/2 - g (b'sigma- + b sigma+)  (rwa)
    H = omega_m b'b + omega_tp sigma_z/2 - g (b' + b) sigma_x       (full)

    sigma_z enters with the 1/2 splitting convention so that ``omega_tp``
    names the qubit transition frequency and omega_tp = omega_m is the
    resonant exchange condition.
    """
    o = tripartite_ops(layout)
    h = omega_m * o.n_phonon + 0.5 * omega_tp * o.tp_z
    if rwa:
        h = h - g * (o.b_dag @ o.tp_minus + o.b @ o.tp_plus)
    else:
        h = h - g * ((o.b_dag + o.b) @ (o.tp_minus + o.tp_plus))
    return h


def spin_torsion_hamiltonian(
    omega_m: float,
    omega_nv: float,
    lambda_e: float,
    layout: SpaceLayout = SpaceLayout(),
) -> np.ndarray:
    """Spin-torsion Hamiltonian, always in Jaynes-Cummings form:
    H = omega_m b'b + omega_nv sigma_z/2 + lambda_e (b'sigma- + b sigma+)."""
    o = tripartite_ops(layout)
    return (
        omega_m * o.n_phonon
        + 0.5 * omega_nv * o.nv_z
        + lambda_e * (o.b_dag @ o.nv_minus + o.b @ o.nv_plus)
    )


def full_hamiltonian(model: HybridModel, t: float) -> np.ndarray:
    """Evaluate the model generator at time t (interaction picture)."""
    return model.hamiltonian(t)


@dataclass(frozen=True)
class PolaritonDecomposition:
    """Normal modes of the resonant constant-coupling system.

    ``mode_vectors`` rows are (c_minus, c_dark, c_plus) over the excitation
    basis (sigma-_TP, b, sigma-_NV); ``frequencies`` are the matching
    (omega_-, omega_dark, omega_+) = (omega_m - R, omega_m, omega_m + R)
    with R = sqrt(g^2 + lambda_e^2).

    ``beta`` is the non-negative mixing angle atan2(g, lambda_e), running
    from 0 (coupling fully on the NV side) to pi/2 (fully on the
    topological side); the dark mode (cos(beta), 0, sin(beta)) carries no
    phonon component for any couplings.
    """

    beta: float
    frequencies: tuple[float, float, float]
    mode_vectors: np.ndarray = field(repr=False)

    @property
    def dark_vector(self) -> np.ndarray:
        return self.mode_vectors[1]


def polariton_decomposition(g: float, lambda_e: float, omega_m: float) -> PolaritonDecomposition:
    """Polariton/polaron normal modes at resonance omega_m = omega_TP = omega_NV.

    The bright polariton c_br = (-sin(beta), 0, cos(beta)) hybridizes with
    the phonon into polarons c_+- = (c_br +- b)/sqrt(2) at omega_m +- R; the
    dark polariton stays at omega_m.  Raises when both couplings vanish.
    """
    if g == 0 and lambda_e == 0:
        raise ValueError("polariton decomposition undefined for g = lambda_e = 0")
    rabi = np.hypot(g, lambda_e)
    beta = np.arctan2(g, lambda_e)
    c, s = np.cos(beta), np.sin(beta)
    dark = np.array([c, 0.0, s], dtype=complex)
    bright = np.array([-s, 0.0, c], dtype=complex)
    phonon = np.array([0.0, 1.0, 0.0], dtype=complex)
    c_plus = (bright + phonon) / np.sqrt(2.0)
    c_minus = (bright - phonon) / np.sqrt(2.0)
    return PolaritonDecomposition(
        beta=beta,
        frequencies=(omega_m - rabi, omega_m, omega_m + rabi),
        mode_vectors=np.vstack([c_minus, dark, c_plus]),
    )


def single_excitation_block(g: float, lambda_e: float) -> np.ndarray:
    """Interaction-picture Hamiltonian restricted to the one-excitation
    subspace, ordered (sigma-_TP, b, sigma-_NV)."""
    return np.array(
        [
            [0.0, -g, 0.0],
            [-g, 0.0, lambda_e],
            [0.0, lambda_e, 0.0],
        ],
        dtype=complex,
    )

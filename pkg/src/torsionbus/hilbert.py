"""Operator algebra for the tripartite space and the NV dressed states.

The tripartite Hilbert space is (topological qubit) x (truncated torsional
oscillator) x (NV dressed two-level system {|d>, |e>}) in that fixed tensor
order.  Operators are plain complex numpy arrays; everything is dense (total
dimension is 4 * fock_dim, i.e. 40 at the default truncation).

The three-level dressed-state construction (|g>, |d>, |e> from the driven
NV ground-state triplet) lives here as the validation path for the
two-level reduction used by the dynamics.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .constants import G_E, MU_B_HZ_PER_MT

__all__ = [
    "SpaceLayout",
    "DressedBasis",
    "TripartiteOps",
    "identity",
    "destroy",
    "create",
    "number",
    "sigma_minus",
    "sigma_plus",
    "sigma_z",
    "sigma_x",
    "pauli_ops",
    "ladder_ops",
    "embed",
    "tripartite_ops",
    "basis_state",
    "dress_nv",
    "nv_hamiltonian_lab",
    "partial_trace_nv",
]

SLOTS = ("TP", "Tor", "NV")


@dataclass(frozen=True)
class SpaceLayout:
    """Dimensions and ordering of the tripartite space (TP, Tor, NV)."""

    fock_dim: int = 10
    qubit_dim: int = 2
    nv_dim: int = 2

    def __post_init__(self):
        if self.fock_dim < 2:
            raise ValueError("fock_dim must be at least 2")
        if self.qubit_dim != 2 or self.nv_dim != 2:
            raise ValueError("qubit and NV slots are two-level systems")

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.qubit_dim, self.fock_dim, self.nv_dim)

    @property
    def ordering(self) -> tuple[str, str, str]:
        return SLOTS

    @property
    def total_dim(self) -> int:
        return self.qubit_dim * self.fock_dim * self.nv_dim


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def destroy(fock_dim: int) -> np.ndarray:
    """Truncated annihilation operator, <n-1|b|n> = sqrt(n)."""
    if fock_dim < 2:
        raise ValueError("fock_dim must be at least 2")
    return np.diag(np.sqrt(np.arange(1, fock_dim)), 1).astype(complex)


def create(fock_dim: int) -> np.ndarray:
    return destroy(fock_dim).conj().T


def number(fock_dim: int) -> np.ndarray:
    return np.diag(np.arange(fock_dim)).astype(complex)


def sigma_minus() -> np.ndarray:
    """Two-level lowering operator |0><1| (|d><e| for the NV slot)."""
    return np.array([[0, 1], [0, 0]], dtype=complex)


def sigma_plus() -> np.ndarray:
    return sigma_minus().conj().T


def sigma_z() -> np.ndarray:
    """|1><1| - |0><0|."""
    return np.diag([-1.0, 1.0]).astype(complex)


def sigma_x() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=complex)


def pauli_ops() -> dict[str, np.ndarray]:
    """The two-level operator set keyed by name."""
    return {
        "minus": sigma_minus(),
        "plus": sigma_plus(),
        "z": sigma_z(),
        "x": sigma_x(),
        "id": identity(2),
    }


def ladder_ops(fock_dim: int) -> tuple[np.ndarray, np.ndarray]:
    """(annihilation, creation) pair for the truncated oscillator."""
    return destroy(fock_dim), create(fock_dim)


def embed(op: np.ndarray, slot: str, layout: SpaceLayout) -> np.ndarray:
    """Tensor ``op`` with identities on the other slots of the layout."""
    if slot not in SLOTS:
        raise ValueError(f"slot must be one of {SLOTS}")
    dims = layout.dims
    expected = dims[SLOTS.index(slot)]
    if op.shape != (expected, expected):
        raise ValueError(f"operator shape {op.shape} does not match slot {slot} (dim {expected})")
    factors = [identity(d) for d in dims]
    factors[SLOTS.index(slot)] = op
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


@dataclass(frozen=True)
class TripartiteOps:
    """Embedded operators of the tripartite space, built once per layout."""

    layout: SpaceLayout
    tp_minus: np.ndarray = field(repr=False, default=None)
    tp_plus: np.ndarray = field(repr=False, default=None)
    tp_z: np.ndarray = field(repr=False, default=None)
    b: np.ndarray = field(repr=False, default=None)
    b_dag: np.ndarray = field(repr=False, default=None)
    n_phonon: np.ndarray = field(repr=False, default=None)
    nv_minus: np.ndarray = field(repr=False, default=None)
    nv_plus: np.ndarray = field(repr=False, default=None)
    nv_z: np.ndarray = field(repr=False, default=None)

    @property
    def total_excitation(self) -> np.ndarray:
        """N = b'b + sigma+sigma- (TP) + sigma+sigma- (NV)."""
        return self.n_phonon + self.tp_plus @ self.tp_minus + self.nv_plus @ self.nv_minus


def tripartite_ops(layout: SpaceLayout) -> TripartiteOps:
    nf = layout.fock_dim
    return TripartiteOps(
        layout=layout,
        tp_minus=embed(sigma_minus(), "TP", layout),
        tp_plus=embed(sigma_plus(), "TP", layout),
        tp_z=embed(sigma_z(), "TP", layout),
        b=embed(destroy(nf), "Tor", layout),
        b_dag=embed(create(nf), "Tor", layout),
        n_phonon=embed(number(nf), "Tor", layout),
        nv_minus=embed(sigma_minus(), "NV", layout),
        nv_plus=embed(sigma_plus(), "NV", layout),
        nv_z=embed(sigma_z(), "NV", layout),
    )


def basis_state(layout: SpaceLayout, tp: int, n: int, nv: int) -> np.ndarray:
    """Product basis ket |tp> |n> |nv> as a flat vector."""
    if not (0 <= tp < 2 and 0 <= n < layout.fock_dim and 0 <= nv < 2):
        raise ValueError("basis indices out of range")
    v = np.zeros(layout.total_dim, dtype=complex)
    v[(tp * layout.fock_dim + n) * 2 + nv] = 1.0
    return v


def partial_trace_nv(rho: np.ndarray, layout: SpaceLayout) -> np.ndarray:
    """Reduced 2x2 density matrix of the NV slot."""
    dims = layout.dims
    r = rho.reshape(*dims, *dims)
    return np.einsum("anianj->ij", r)


@dataclass(frozen=True)
class DressedBasis:
    """Dressed NV eigensystem over the {|0>, |b>, |d>} ordering.

    tan(2 alpha) = 2 sqrt(2) Omega / Delta;  omega_d = Delta and
    omega_{e/g} = (Delta +- sqrt(Delta^2 + 8 Omega^2)) / 2.
    """

    mixing_angle_alpha: float
    omega_g: float
    omega_d: float
    omega_e: float
    basis_vectors: np.ndarray = field(repr=False)  # rows: |g>, |d>, |e>


def dress_nv(delta: float, omega: float) -> DressedBasis:
    """Diagonalize the symmetrically detuned driven NV triplet.

    The bright/dark combinations are |b> = (|+1> + |-1>)/sqrt(2) and
    |d> = (|+1> - |-1>)/sqrt(2); the drive couples |0> only to |b>.
    Emits an "undriven" warning when omega = 0 (|e> degenerate with |d>).
    """
    if delta == 0 and omega == 0:
        raise ValueError("delta and omega cannot both be zero")
    if omega == 0:
        warnings.warn("undriven NV: omega = 0 leaves |e> degenerate with |d>", stacklevel=2)
    alpha = 0.5 * np.arctan2(2.0 * np.sqrt(2.0) * omega, delta)
    root = np.sqrt(delta**2 + 8.0 * omega**2)
    omega_e = 0.5 * (delta + root)
    omega_g = 0.5 * (delta - root)
    ca, sa = np.cos(alpha), np.sin(alpha)
    vectors = np.array(
        [
            [ca, -sa, 0.0],   # |g>
            [0.0, 0.0, 1.0],  # |d>
            [sa, ca, 0.0],    # |e>
        ],
        dtype=complex,
    )
    return DressedBasis(alpha, omega_g, delta, omega_e, vectors)


def nv_hamiltonian_lab(
    d_gs: float,
    b_z_mt: float,
    b_mg_mt: float,
    theta: float,
    b_drive_mt: float,
    omega_0: float,
) -> np.ndarray:
    """Rotating-frame NV Hamiltonian over {|0>, |+1>, |-1>} (frequencies in Hz).

    Delta_pm = D_gs +- g_e mu_B (B_z +- B_mg sin(theta)) - omega_0 and
    Omega = (sqrt(2)/4) g_e mu_B B_drive, with mu_B = 14 MHz/mT.
    """
    ge_mub = G_E * MU_B_HZ_PER_MT
    delta_p = d_gs + ge_mub * (b_z_mt + b_mg_mt * np.sin(theta)) - omega_0
    delta_m = d_gs - ge_mub * (b_z_mt - b_mg_mt * np.sin(theta)) - omega_0
    omega = np.sqrt(2.0) / 4.0 * ge_mub * b_drive_mt
    h = np.zeros((3, 3), dtype=complex)
    h[1, 1] = delta_p
    h[2, 2] = delta_m
    h[1, 0] = h[2, 0] = omega
    h[0, 1] = h[0, 2] = omega
    return h


def dressed_from_lab(h_lab: np.ndarray) -> np.ndarray:
    """Rewrite a 3x3 lab Hamiltonian in the {|0>, |b>, |d>} basis."""
    s = 1.0 / np.sqrt(2.0)
    # columns: the new basis vectors expressed over {|0>, |+1>, |-1>}
    u = np.array([[1, 0, 0], [0, s, s], [0, s, -s]], dtype=complex).T
    return u.conj().T @ h_lab @ u

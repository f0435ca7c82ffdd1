"""Master-equation integration and fidelity metrics.

``evolve`` integrates d rho/dt = -i [H(t), rho] + sum_k rate_k D(o_k) with
an adaptive explicit Runge-Kutta scheme on the vectorized density matrix
(relative tolerance 1e-8, absolute 1e-10 by default).  ``oracle_propagate``
is the independent verification back-end: it exponentiates the vectorized
Liouvillian on piecewise-constant segments and is restricted to small
dimensions.

The standard dissipator set of the hybrid device is
gamma_s D(S_z_NV), Gamma1 D(sigma-_TP), Gamma2 D(sigma+ sigma-_TP),
(n_th + 1) gamma_m D(b), n_th gamma_m D(b'), where S_z_NV is the spin-1/2
projection operator (sigma_z / 2) of the dressed NV qubit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .hilbert import SpaceLayout, tripartite_ops
from .params import CouplingParams

__all__ = [
    "DissipatorSpec",
    "TrajectoryResult",
    "IntegrationError",
    "standard_dissipators",
    "evolve",
    "fidelity",
    "oracle_propagate",
    "liouvillian",
]

ORACLE_MAX_DIM = 16


class IntegrationError(RuntimeError):
    """Raised when the integrator violates its trace-preservation contract."""


@dataclass(frozen=True)
class DissipatorSpec:
    """Collapse operators with their rates: sum_k rate_k D(op_k)."""

    collapse_ops: tuple[tuple[np.ndarray, float], ...]

    def __post_init__(self):
        for op, rate in self.collapse_ops:
            if rate < 0:
                raise ValueError("dissipator rates must be non-negative")
            if op.ndim != 2 or op.shape[0] != op.shape[1]:
                raise ValueError("collapse operators must be square matrices")

    @property
    def weighted_ops(self) -> list[np.ndarray]:
        """Operators scaled by sqrt(rate), dropping zero-rate channels."""
        return [np.sqrt(rate) * op for op, rate in self.collapse_ops if rate > 0]

    @staticmethod
    def empty() -> "DissipatorSpec":
        return DissipatorSpec(())


def standard_dissipators(
    couplings: CouplingParams,
    n_th: float,
    layout: SpaceLayout = SpaceLayout(),
) -> DissipatorSpec:
    """The five decoherence channels of the hybrid device (rates in g0 units).

    The NV dephasing operator is the spin projection S_z = sigma_z/2; with
    this convention the quoted rate gamma_s = 0.1 g0 reproduces the reported
    transfer fidelities.
    """
    o = tripartite_ops(layout)
    return DissipatorSpec(
        (
            (0.5 * o.nv_z, couplings.gamma_s),
            (o.tp_minus, couplings.Gamma1),
            (o.tp_plus @ o.tp_minus, couplings.Gamma2),
            (o.b, (n_th + 1.0) * couplings.gamma_m),
            (o.b_dag, n_th * couplings.gamma_m),
        )
    )


@dataclass
class TrajectoryResult:
    """Sampled solution of a master-equation run."""

    times: np.ndarray
    states: np.ndarray                      # (n_times, dim, dim)
    occupations: dict[str, np.ndarray] = field(default_factory=dict)
    fidelity: np.ndarray | None = None
    integrator_stats: dict = field(default_factory=dict)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


def _hamiltonian_callable(model) -> Callable[[float], np.ndarray]:
    if hasattr(model, "hamiltonian"):
        return model.hamiltonian
    if isinstance(model, np.ndarray):
        return lambda t: model
    if callable(model):
        return model
    raise TypeError("model must be a HybridModel, a matrix or a callable t -> matrix")


def _check_density_matrix(rho: np.ndarray, tol: float = 1e-9) -> None:
    if abs(np.trace(rho).real - 1.0) > 1e-6 or abs(np.trace(rho).imag) > 1e-9:
        raise ValueError("initial state must have unit trace")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("initial state must be Hermitian")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("initial state must be positive semidefinite")


def evolve(
    model,
    diss: DissipatorSpec | None,
    rho0: np.ndarray,
    times: Sequence[float],
    observables: dict[str, np.ndarray] | None = None,
    fidelity_target: np.ndarray | None = None,
    rtol: float = 1e-8,
    atol: float = 1e-10,
    method: str = "DOP853",
) -> TrajectoryResult:
    """Integrate the Lindblad equation and sample it on ``times``.

    ``model`` may be a HybridModel, a constant matrix, or a callable
    t -> matrix.  ``observables`` maps names to Hermitian operators whose
    expectation values are recorded; ``fidelity_target`` is an optional pure
    state compared against the full density matrix at each sample.
    Raises IntegrationError when the trace drifts by more than 1e-4.
    """
    times = np.asarray(times, dtype=float)
    rho0 = np.asarray(rho0, dtype=complex)
    _check_density_matrix(rho0)
    dim = rho0.shape[0]
    h_of_t = _hamiltonian_callable(model)

    c_ops = diss.weighted_ops if diss is not None else []
    c_dag = [c.conj().T for c in c_ops]
    c_dag_c = [d @ c for c, d in zip(c_ops, c_dag)]

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        rho = y.reshape(dim, dim)
        h = h_of_t(t)
        drho = -1j * (h @ rho - rho @ h)
        for c, d, q in zip(c_ops, c_dag, c_dag_c):
            drho += c @ rho @ d - 0.5 * (q @ rho + rho @ q)
        return drho.ravel()

    sol = solve_ivp(
        rhs,
        (times[0], times[-1]),
        rho0.ravel(),
        t_eval=times,
        rtol=rtol,
        atol=atol,
        method=method,
    )
    if not sol.success:
        raise IntegrationError(f"integrator failed: {sol.message}")
    states = sol.y.T.reshape(len(times), dim, dim)

    traces = np.einsum("tii->t", states).real
    if not np.all(np.isfinite(states)):
        raise IntegrationError(
            f"integration blew up (non-finite state; nfev={sol.nfev}, "
            f"span=[{times[0]}, {times[-1]}])"
        )
    drift = np.max(np.abs(traces - 1.0))
    if drift > 1e-4:
        raise IntegrationError(
            f"trace drift {drift:.3e} exceeds 1e-4 "
            f"(nfev={sol.nfev}, span=[{times[0]}, {times[-1]}])"
        )

    occupations = {}
    if observables:
        for name, op in observables.items():
            occupations[name] = np.einsum("tij,ji->t", states, op).real

    fid = None
    if fidelity_target is not None:
        fid = np.array([fidelity(rho, fidelity_target) for rho in states])

    stats = {"nfev": int(sol.nfev), "trace_drift": float(drift), "method": method}
    return TrajectoryResult(times, states, occupations, fid, stats)


def fidelity(rho: np.ndarray, target: np.ndarray) -> float:
    """Overlap <psi|rho|psi> of a density matrix with a pure target state."""
    target = np.asarray(target, dtype=complex).ravel()
    norm = np.linalg.norm(target)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError("target state must be normalized")
    return float(np.real(target.conj() @ rho @ target))


def liouvillian(h: np.ndarray, diss: DissipatorSpec | None) -> np.ndarray:
    """Vectorized Liouvillian L with d vec(rho)/dt = L vec(rho) (row-major)."""
    dim = h.shape[0]
    ident = np.eye(dim)
    lv = -1j * (np.kron(h, ident) - np.kron(ident, h.T))
    if diss is not None:
        for c in diss.weighted_ops:
            cdc = c.conj().T @ c
            lv += np.kron(c, c.conj()) - 0.5 * (np.kron(cdc, ident) + np.kron(ident, cdc.T))
    return lv


def oracle_propagate(
    model,
    diss: DissipatorSpec | None,
    rho0: np.ndarray,
    t: float | Sequence[tuple[np.ndarray, float]],
) -> np.ndarray:
    """Matrix-exponential propagation, the reference for integrator tests.

    For a constant generator pass the Hamiltonian and a duration ``t``; for
    piecewise-constant envelopes pass ``t`` as a list of (hamiltonian,
    duration) segments.  Refuses dimensions above 16: this back-end is a
    verification oracle, not a production path.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    dim = rho0.shape[0]
    if dim > ORACLE_MAX_DIM:
        raise ValueError(f"oracle_propagate is limited to dimension {ORACLE_MAX_DIM}")
    if isinstance(t, (int, float)):
        if isinstance(model, np.ndarray):
            h = model
        elif callable(model) and not hasattr(model, "hamiltonian"):
            h = model(0.0)
        else:
            raise TypeError("constant-generator oracle needs an explicit matrix")
        segments = [(h, float(t))]
    else:
        segments = [(np.asarray(h, dtype=complex), float(dt)) for h, dt in t]
    vec = rho0.ravel()
    for h, dt in segments:
        vec = expm(liouvillian(h, diss) * dt) @ vec
    return vec.reshape(dim, dim)

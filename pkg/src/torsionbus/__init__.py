"""Simulation toolkit for a hybrid quantum device: a Majorana nanowire qubit
and an NV-center spin coupled through a magnetized torsional cantilever.

Static lattice physics (edge modes, magneto-Josephson coupling) lives in
``bdg_lattice``; device parameter derivations in ``params``; the tripartite
operator algebra in ``hilbert``; Hamiltonians and the polariton analysis in
``models``; the master-equation integrator in ``lindblad``; and the three
dynamical scenarios (Rabi exchange, direct transfer, dark-state conversion)
in ``protocols``.  ``cli`` is the batch front-end.
"""

from .bdg_lattice import (
    BdGSpectrum,
    ConfigError,
    LatticeConfig,
    MajoranaModes,
    NotTopologicalError,
    SegmentConfig,
    build_hamiltonian,
    coupling_constant_g,
    diagonalize,
    extract_majoranas,
    hybridization_energy,
    is_topological,
    paper_lattice_config,
    spin_current,
    theta_sweep,
)
from .hilbert import DressedBasis, SpaceLayout, basis_state, dress_nv, nv_hamiltonian_lab, tripartite_ops
from .lindblad import (
    DissipatorSpec,
    IntegrationError,
    TrajectoryResult,
    evolve,
    fidelity,
    oracle_propagate,
    standard_dissipators,
)
from .models import (
    HybridModel,
    PolaritonDecomposition,
    TopologicalQubitMap,
    full_hamiltonian,
    polariton_decomposition,
    spin_torsion_hamiltonian,
    topology_torsion_hamiltonian,
)
from .params import (
    CantileverParams,
    CouplingParams,
    DerivedMechanics,
    derive_mechanics,
    paper_cantilever,
    paper_couplings,
    spin_torsion_coupling,
    to_simulation_units,
)
from .protocols import (
    PulseSchedule,
    TransferReport,
    adiabaticity_margin,
    paper_dark_schedules,
    run_dark_state_transfer,
    run_direct_transfer,
    run_rabi,
)

__version__ = "0.1.0"

"""Walk-based spectral measurement of Pauli-sum Hamiltonians, simulated
exactly at small scale, with fault-tolerant gate accounting."""

from .blocks import BOUNDARY_EPS, InvariantBlock, invariant_blocks, walk_eigenphases
from .census import GateCensus
from .circuits import Circuit, Gate, RegisterLayout, distinct_rotation_count
from .hamiltonian import (
    GroupedLcu,
    InterpolatedModel,
    LcuHamiltonian,
    RescaledLcu,
    dense_matrix,
    eigensystem,
    group,
    interpolate,
    long_range_ising,
    normalize,
    product_state,
    read_hamiltonian,
    tfim,
    write_hamiltonian,
)
from .measurement import (
    MeasurementRecord,
    ZenoTrace,
    estimate_energy,
    gamma,
    pe_step,
    project_to_eigenstate,
    recover_expectation,
    uniform_schedule,
    verify_observable_recovery,
    zeno_prepare,
)
from .pauli import PauliString, apply_pauli, multiply, star, to_matrix
from .resources import CostModel, CostQuery, encoding_table, taylor_cost, trotter_cost, walk_cost
from .simulator import QuantumState, circuit_unitary, make_rng
from .walk_binary import binary_walk
from .walk_core import Branch, WalkBundle, encoded_dense
from .walk_unary import hybrid_long_range_walk, unary_walk

__version__ = "0.1.0"

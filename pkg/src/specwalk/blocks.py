"""Two-dimensional invariant blocks of the walk, and spectral verification.

For every eigenpair (E_k, phi_k) of the encoded operator, the walk preserves
the plane spanned by

    phi0_k = sum_b amp_b |ctrl_b> |phi_k>     (the dressed eigenstate)
    phi1_k = (V - E_k) phi0_k / sqrt(1 - E_k^2)

on which the reflections act as

    S -> [[-1, 0], [0, 1]],   V -> [[E, sqrt(1-E^2)], [sqrt(1-E^2), -E]],

so the walk has eigenvalues exp(+-i arccos E_k) with eigenvectors
(phi0 -+ +- i phi1)/sqrt(2).  Eigenvalues within BOUNDARY_EPS of +-1 give a
one-dimensional block (phi1 has a 0/0 form there).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .simulator import QuantumState
from .walk_core import WalkBundle, dressed_state, encoded_dense

BOUNDARY_EPS = 1e-9


@dataclass
class InvariantBlock:
    energy: float
    theta: float
    system_vector: np.ndarray
    phi0: np.ndarray
    phi1: np.ndarray | None

    def __post_init__(self):
        # A boundary block is a bare walk eigenvector with eigenvalue +-1;
        # acos of a within-epsilon energy would smear the phase by ~sqrt(eps).
        if self.phi1 is None:
            self.theta = 0.0 if self.energy > 0 else math.pi

    @property
    def is_boundary(self) -> bool:
        return self.phi1 is None

    @property
    def phi_plus(self) -> np.ndarray:
        if self.phi1 is None:
            return self.phi0
        return (self.phi0 + 1j * self.phi1) / math.sqrt(2)

    @property
    def phi_minus(self) -> np.ndarray:
        if self.phi1 is None:
            return self.phi0
        return (self.phi0 - 1j * self.phi1) / math.sqrt(2)

    def eigenphases(self) -> tuple[float, ...]:
        """Walk eigenphases contributed by this block."""
        if self.phi1 is None:
            return (self.theta,)
        return (self.theta, -self.theta)


def _apply_circuit_to_vector(bundle: WalkBundle, circuit, vec: np.ndarray) -> np.ndarray:
    state = QuantumState(bundle.layout, vec.copy())
    state.apply_circuit(circuit)
    return state.vec


def invariant_blocks(bundle: WalkBundle) -> list[InvariantBlock]:
    """One block per eigenvector of the encoded operator.

    phi1 is produced by running the select circuit, so these blocks double
    as a check that the circuit realizes the intended branch table.
    """
    ham = encoded_dense(bundle.branches, bundle.n_system)
    energies, vectors = np.linalg.eigh(ham)
    blocks = []
    for k in range(len(energies)):
        e = float(energies[k])
        phi = vectors[:, k]
        phi0 = dressed_state(bundle.branches, bundle.layout, phi)
        if abs(e) >= 1.0 - BOUNDARY_EPS:
            blocks.append(InvariantBlock(e, math.acos(np.clip(e, -1, 1)), phi, phi0, None))
            continue
        v_phi0 = _apply_circuit_to_vector(bundle, bundle.select, phi0)
        phi1 = (v_phi0 - e * phi0) / math.sqrt(1.0 - e * e)
        blocks.append(InvariantBlock(e, math.acos(e), phi, phi0, phi1))
    return blocks


def subspace_basis(blocks) -> np.ndarray:
    """Columns phi0_k, phi1_k (orthonormal by construction)."""
    cols = []
    for b in blocks:
        cols.append(b.phi0)
        if b.phi1 is not None:
            cols.append(b.phi1)
    return np.column_stack(cols)


def block_matrices(bundle: WalkBundle, block: InvariantBlock):
    """2x2 matrices of S and V on span{phi0, phi1} (non-boundary blocks)."""
    if block.phi1 is None:
        raise ValueError("boundary blocks are one-dimensional")
    basis = np.column_stack([block.phi0, block.phi1])
    s_cols = np.column_stack(
        [_apply_circuit_to_vector(bundle, bundle.reflect, basis[:, i]) for i in range(2)]
    )
    v_cols = np.column_stack(
        [_apply_circuit_to_vector(bundle, bundle.select, basis[:, i]) for i in range(2)]
    )
    return basis.conj().T @ s_cols, basis.conj().T @ v_cols


@dataclass
class PhaseReport:
    expected: np.ndarray  # +-arccos(E_k) multiset from dense diagonalization
    measured: np.ndarray  # walk-circuit eigenphases on the initialized subspace
    pairs: list[tuple[float, float, float]]  # (expected, matched, abs error)
    closure_error: float

    @property
    def max_error(self) -> float:
        return max((p[2] for p in self.pairs), default=0.0)


def walk_eigenphases(bundle: WalkBundle) -> PhaseReport:
    """Diagonalize the walk circuit restricted to the initialized subspace and
    match its phases against +-arccos(E_k) on the unit circle."""
    blocks = invariant_blocks(bundle)
    basis = subspace_basis(blocks)
    images = np.column_stack(
        [
            _apply_circuit_to_vector(bundle, bundle.walk, basis[:, i])
            for i in range(basis.shape[1])
        ]
    )
    m = basis.conj().T @ images
    closure = float(np.linalg.norm(images - basis @ m))
    eigvals = np.linalg.eigvals(m)
    measured = np.angle(eigvals)
    expected = np.concatenate([b.eigenphases() for b in blocks])
    pairs = _match_phases(expected, measured)
    return PhaseReport(np.sort(expected), np.sort(measured), pairs, closure)


def _match_phases(expected, measured) -> list[tuple[float, float, float]]:
    """Greedy nearest matching on the unit circle (handles the +-pi seam)."""
    free = list(measured)
    pairs = []
    for e in sorted(expected):
        ze = complex(math.cos(e), math.sin(e))
        dists = [abs(ze - complex(math.cos(m), math.sin(m))) for m in free]
        i = int(np.argmin(dists))
        m = free.pop(i)
        # chord distance -> arc distance
        err = 2.0 * math.asin(min(1.0, dists[i] / 2.0))
        pairs.append((e, m, err))
    return pairs

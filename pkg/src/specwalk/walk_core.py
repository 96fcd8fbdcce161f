"""Shared structure of the walk operator across control encodings.

Every encoding reduces to a list of branches: a control-register basis state
carrying an amplitude and a signed Pauli word for the system.  The prepare
circuit B maps the control vacuum to sum_b amp_b |ctrl_b>, select applies the
word on each branch, and the walk is

    W = S * V * (-1),   S = B (1 - 2|0><0|) B'.

The walk circuit is assembled as [V][B'][vacuum reflection][B][global phase].
The controlled walk conditions select, the vacuum reflection, and the phase
on the extra qubit while leaving B and B' unconditioned; at control |0> the
circuit collapses to B B' = 1 gate-by-gate, and at |1> it is exactly W.
Conditioning only the prepare rotations instead (and nothing else) is not a
controlled-W: its off branch is -R0*V, which shifts the phase-measurement
statistics by an identity-weight-dependent amount.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, Gate, RegisterLayout
from .hamiltonian import GroupedLcu, RescaledLcu
from .pauli import PauliString, to_matrix


@dataclass(frozen=True)
class Branch:
    """One control basis state of the block encoding."""

    amplitude: float  # >= 0; signs live in the word
    word: PauliString
    control_state: int  # bits of the control register, LSB = first control qubit


@dataclass(frozen=True)
class WalkBundle:
    encoding: str
    layout: RegisterLayout
    branches: tuple[Branch, ...]
    prepare: Circuit
    prepare_dagger: Circuit
    select: Circuit
    reflect: Circuit
    walk: Circuit
    controlled_walk: Circuit
    rescaled: RescaledLcu | None = None
    grouped: GroupedLcu | None = None

    @property
    def n_system(self) -> int:
        return self.layout.system_qubits


def encoded_dense(branches, n_system: int) -> np.ndarray:
    """sum_b amp_b^2 * word_b as a dense matrix; the operator the walk encodes."""
    out = np.zeros((1 << n_system, 1 << n_system), dtype=complex)
    for b in branches:
        out += b.amplitude**2 * to_matrix(b.word)
    return out


def branch_weights_ok(branches, tol: float = 1e-10) -> bool:
    return abs(sum(b.amplitude**2 for b in branches) - 1.0) <= tol


def place_system_vector(layout: RegisterLayout, control_state: int, sys_vec: np.ndarray):
    """Full-register vector |control_state> x |sys_vec| (ancilla and pe |0>)."""
    full = np.zeros(1 << layout.total_qubits, dtype=complex)
    offset = control_state << layout.system_qubits
    full[offset : offset + len(sys_vec)] = sys_vec
    return full


def dressed_state(branches, layout: RegisterLayout, sys_vec: np.ndarray) -> np.ndarray:
    """B|0> tensor |psi> built from the branch table: sum_b amp_b |ctrl_b>|psi>."""
    full = np.zeros(1 << layout.total_qubits, dtype=complex)
    n = layout.system_qubits
    for b in branches:
        offset = b.control_state << n
        full[offset : offset + len(sys_vec)] += b.amplitude * sys_vec
    return full


def vacuum_reflection(layout: RegisterLayout, pe_control: bool = False) -> Circuit:
    """1 - 2|0><0| on the control register, X-conjugated multi-controlled Z.

    With `pe_control` the phase fires only when the pe qubit is set too.
    An empty control register degenerates to a bare (or pe-conditioned)
    global sign.
    """
    circ = Circuit(layout)
    ctrl = layout.control
    if not ctrl:
        if pe_control:
            circ.append(Gate.z(layout.pe_qubit))
        else:
            circ.append(Gate.global_phase(np.pi))
        return circ
    for q in ctrl:
        circ.append(Gate.x(q))
    qubits = ctrl + ((layout.pe_qubit,) if pe_control else ())
    circ.append(Gate.mcz(qubits))
    for q in ctrl:
        circ.append(Gate.x(q))
    return circ


def build_reflection(prepare: Circuit) -> Circuit:
    """S = B (1 - 2|0><0|) B' as a circuit: unprepare, reflect about the
    control vacuum, re-prepare."""
    layout = prepare.layout
    reflect = Circuit(layout)
    reflect.extend(prepare.inverse())
    reflect.extend(vacuum_reflection(layout))
    reflect.extend(prepare)
    return reflect


def assemble_walk(layout, prepare: Circuit, select: Circuit) -> tuple[Circuit, Circuit, Circuit]:
    """(B_dagger, S, W) from the prepare and select circuits."""
    prepare_dagger = prepare.inverse()
    reflect = build_reflection(prepare)
    walk = Circuit(layout)
    walk.extend(select)
    walk.extend(reflect)
    walk.append(Gate.global_phase(np.pi))
    return prepare_dagger, reflect, walk


def assemble_controlled_walk(layout, prepare: Circuit, controlled_select: Circuit) -> Circuit:
    """Exact controlled walk: select, vacuum reflection, and sign conditioned
    on the pe qubit; prepare and its inverse cancel on the off branch."""
    pe = layout.pe_qubit
    circ = Circuit(layout)
    circ.extend(controlled_select)
    circ.extend(prepare.inverse())
    circ.extend(vacuum_reflection(layout, pe_control=True))
    circ.extend(prepare)
    circ.append(Gate.z(pe))
    return circ

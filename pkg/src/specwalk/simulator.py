"""Exact dense statevector simulation over a partitioned register.

States are owned values; applying a gate mutates the owner's amplitude
vector in place and preserves the norm.  Measurements come in two modes:
`analyze` returns outcome probabilities and both renormalized posteriors
without consuming randomness; `sample` draws one outcome from an explicit
counter-based generator.  No global randomness anywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import (
    CSWAP,
    FANOUT,
    GPHASE,
    H,
    MCZ,
    MROT,
    PAULI,
    ROT,
    S,
    SDG,
    SWAP,
    T,
    TDG,
    TOFFOLI,
    Circuit,
    Gate,
    RegisterLayout,
)
from .pauli import PauliString, apply_pauli, to_matrix

SIMULATION_QUBIT_CAP = 22

_SQRT2_INV = 1 / math.sqrt(2)
_FIXED_1Q = {
    H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    S: np.diag([1, 1j]).astype(complex),
    SDG: np.diag([1, -1j]).astype(complex),
    T: np.diag([1, np.exp(1j * math.pi / 4)]),
    TDG: np.diag([1, np.exp(-1j * math.pi / 4)]),
}
# two-qubit fixed matrices, local index = bit(qubits[0]) + 2*bit(qubits[1])
_SWAP_MAT = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; every sampling entry point takes one (or a seed)."""
    return np.random.Generator(np.random.Philox(seed))


def _as_rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    if seed_or_rng is None:
        raise ValueError("sampling requires an explicit seed")
    return make_rng(int(seed_or_rng))


def _rotation_matrix(axis: str, angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def _fanout_matrix(angle: float) -> np.ndarray:
    # Givens rotation in the one-hot subspace span{|01>, |10>}; angle=pi/4
    # realizes |1,0> -> (|1,0> + |0,1>)/sqrt(2) with real amplitudes.
    c, s = math.cos(angle), math.sin(angle)
    return np.array(
        [[1, 0, 0, 0], [0, c, -s, 0], [0, s, c, 0], [0, 0, 0, 1]], dtype=complex
    )


def _apply_matrix(vec, total, qubits, mat, controls=()):
    """Apply `mat` on `qubits` (qubits[0] = least-significant local bit),
    restricted to the slice where each (qubit, value) control matches."""
    ten = vec.reshape((2,) * total)
    idx = [slice(None)] * total
    ctrl_set = set()
    for q, v in controls:
        idx[total - 1 - q] = v
        ctrl_set.add(q)
    sub = ten[tuple(idx)]
    remaining = [q for q in range(total - 1, -1, -1) if q not in ctrl_set]
    pos = {q: i for i, q in enumerate(remaining)}
    k = len(qubits)
    src = [pos[q] for q in reversed(qubits)]  # most-significant local bit first
    dest = list(range(sub.ndim - k, sub.ndim))
    moved = np.moveaxis(sub, src, dest)
    shape = moved.shape
    flat = moved.reshape(-1, 1 << k)
    out = flat @ mat.T
    ten[tuple(idx)] = np.moveaxis(out.reshape(shape), dest, src)


def _apply_phase_slice(vec, total, qubit_values, factor):
    ten = vec.reshape((2,) * total)
    idx = [slice(None)] * total
    for q, v in qubit_values:
        idx[total - 1 - q] = v
    ten[tuple(idx)] *= factor


@dataclass
class MeasureResult:
    qubit: int
    p_zero: float
    p_one: float
    outcome: int | None = None
    posterior: "QuantumState | None" = None
    posterior_zero: "QuantumState | None" = None
    posterior_one: "QuantumState | None" = None


@dataclass
class QuantumState:
    layout: RegisterLayout
    vec: np.ndarray

    @classmethod
    def zero_state(cls, layout: RegisterLayout, cap: int = SIMULATION_QUBIT_CAP):
        if layout.total_qubits > cap:
            raise ValueError(
                f"{layout.total_qubits} qubits exceeds the dense cap of {cap}"
            )
        vec = np.zeros(1 << layout.total_qubits, dtype=complex)
        vec[0] = 1.0
        return cls(layout, vec)

    @classmethod
    def from_system_state(cls, layout, system_vec, cap: int = SIMULATION_QUBIT_CAP):
        """All non-system qubits |0>, the system register in `system_vec`."""
        state = cls.zero_state(layout, cap)
        dim = 1 << layout.system_qubits
        if system_vec.shape != (dim,):
            raise ValueError("system vector has the wrong dimension")
        state.vec[:] = 0.0
        state.vec[:dim] = system_vec
        return state

    def copy(self) -> "QuantumState":
        return QuantumState(self.layout, self.vec.copy())

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vec))

    # --- unitary application ---------------------------------------------
    def apply(self, gate: Gate) -> "QuantumState":
        total = self.layout.total_qubits
        kind = gate.kind
        ctrl = tuple((q, 1) for q in gate.controls)
        if kind in _FIXED_1Q:
            _apply_matrix(self.vec, total, gate.qubits, _FIXED_1Q[kind], ctrl)
        elif kind == ROT:
            _apply_matrix(
                self.vec, total, gate.qubits, _rotation_matrix(gate.axis, gate.angle), ctrl
            )
        elif kind == MROT:
            d = len(gate.controls)
            for p, angle in enumerate(gate.angles):
                if angle == 0.0:
                    continue
                sel = tuple(
                    (q, (p >> (d - 1 - i)) & 1) for i, q in enumerate(gate.controls)
                )
                _apply_matrix(
                    self.vec, total, gate.qubits, _rotation_matrix("y", angle), sel
                )
        elif kind == PAULI:
            self._apply_pauli_gate(gate)
        elif kind in (SWAP, CSWAP):
            _apply_matrix(self.vec, total, gate.qubits, _SWAP_MAT, ctrl)
        elif kind == TOFFOLI:
            x = to_matrix(PauliString.single(1, 0, "X"))
            _apply_matrix(self.vec, total, gate.qubits, x, ctrl)
        elif kind == FANOUT:
            _apply_matrix(self.vec, total, gate.qubits, _fanout_matrix(gate.angle), ctrl)
        elif kind == MCZ:
            _apply_phase_slice(self.vec, total, tuple((q, 1) for q in gate.qubits), -1.0)
        elif kind == GPHASE:
            self.vec *= np.exp(1j * gate.angle)
        else:
            raise ValueError(f"unknown gate kind {kind!r}")
        return self

    def _apply_pauli_gate(self, gate: Gate) -> None:
        total = self.layout.total_qubits
        word, sup = gate.pauli.compress()
        if gate.pauli.is_identity:
            if gate.pauli.phase != 1:  # (controlled) global sign
                _apply_phase_slice(
                    self.vec, total, tuple((q, 1) for q in gate.controls), gate.pauli.phase
                )
            return
        targets = tuple(gate.qubits[i] for i in sup)
        ctrl = tuple((q, 1) for q in gate.controls)
        _apply_matrix(self.vec, total, targets, to_matrix(word), ctrl)

    def apply_circuit(self, circuit: Circuit) -> "QuantumState":
        before = self.norm
        for gate in circuit.gates:
            self.apply(gate)
        if abs(self.norm - before) > 1e-9:
            raise AssertionError("statevector norm drifted across the circuit")
        return self

    # --- inner products and observables ------------------------------------
    def inner(self, other: "QuantumState") -> complex:
        return complex(np.vdot(self.vec, other.vec))

    def expectation(self, sigma: PauliString, qubits: tuple[int, ...] | None = None) -> float:
        """<state| sigma |state> with sigma acting on `qubits` (default: the
        system register).  Real for +-1 signs; the imaginary residue is checked."""
        targets = qubits if qubits is not None else self.layout.system
        if sigma.n_qubits != len(targets):
            raise ValueError("operator width does not match the target register")
        shifted = self.copy()
        shifted._apply_pauli_gate(Gate.pauli_word(sigma, tuple(targets)))
        val = np.vdot(self.vec, shifted.vec)
        if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)):
            raise ValueError(f"expectation of a non-Hermitian word: {val}")
        return float(val.real)

    # --- measurement --------------------------------------------------------
    def probability_one(self, qubit: int) -> float:
        ten = self.vec.reshape((2,) * self.layout.total_qubits)
        idx = [slice(None)] * self.layout.total_qubits
        idx[self.layout.total_qubits - 1 - qubit] = 1
        return float(np.sum(np.abs(ten[tuple(idx)]) ** 2))

    def _collapsed(self, qubit: int, outcome: int, prob: float) -> "QuantumState":
        out = self.copy()
        ten = out.vec.reshape((2,) * out.layout.total_qubits)
        idx = [slice(None)] * out.layout.total_qubits
        idx[out.layout.total_qubits - 1 - qubit] = 1 - outcome
        ten[tuple(idx)] = 0.0
        out.vec /= math.sqrt(prob)
        return out

    def measure(self, qubit: int, mode: str = "analyze", rng=None) -> MeasureResult:
        if not 0 <= qubit < self.layout.total_qubits:
            raise ValueError(f"qubit {qubit} outside the register")
        p1 = self.probability_one(qubit)
        p0 = 1.0 - p1
        if abs(p0 + p1 - 1.0) > 1e-12:
            raise AssertionError("measurement probabilities do not sum to 1")
        if mode == "analyze":
            return MeasureResult(
                qubit,
                p0,
                p1,
                posterior_zero=self._collapsed(qubit, 0, p0) if p0 > 1e-300 else None,
                posterior_one=self._collapsed(qubit, 1, p1) if p1 > 1e-300 else None,
            )
        if mode == "sample":
            gen = _as_rng(rng)
            outcome = 1 if gen.random() < p1 else 0
            prob = p1 if outcome else p0
            return MeasureResult(
                qubit, p0, p1, outcome=outcome, posterior=self._collapsed(qubit, outcome, prob)
            )
        raise ValueError(f"unknown measurement mode {mode!r}")

    def project_control_vacuum(self):
        """Project the control register onto all-zeros vs its complement.

        Returns (success probability, success posterior, failure posterior);
        a posterior is None when its branch has no weight.
        """
        layout = self.layout
        if layout.control_qubits == 0:
            return 1.0, self.copy(), None
        total = layout.total_qubits
        ten = self.vec.reshape((2,) * total)
        idx = [slice(None)] * total
        for q in layout.control:
            idx[total - 1 - q] = 0
        block = ten[tuple(idx)]
        p = float(np.sum(np.abs(block) ** 2))
        success = None
        failure = None
        if p > 1e-300:
            sv = np.zeros_like(self.vec)
            sten = sv.reshape((2,) * total)
            sten[tuple(idx)] = block
            success = QuantumState(layout, sv / math.sqrt(p))
        if 1.0 - p > 1e-300:
            fv = self.vec.copy()
            ften = fv.reshape((2,) * total)
            ften[tuple(idx)] = 0.0
            failure = QuantumState(layout, fv / math.sqrt(1.0 - p))
        return p, success, failure

    def dump_json(self, threshold: float = 0.0) -> str:
        """Debug dump: a UTF-8 JSON array of (index, re, im) triples for
        amplitudes above `threshold` in magnitude."""
        import json

        triples = [
            [int(i), float(a.real), float(a.imag)]
            for i, a in enumerate(self.vec)
            if abs(a) > threshold
        ]
        return json.dumps(triples)

    def extract_system(self, tol: float = 1e-9) -> np.ndarray:
        """System-register vector, requiring all other qubits to be |0>."""
        dim = 1 << self.layout.system_qubits
        residue = float(np.sum(np.abs(self.vec[dim:]) ** 2))
        if residue > tol:
            raise ValueError(
                f"non-system registers are not in |0>: residual weight {residue:.3e}"
            )
        out = self.vec[:dim].copy()
        return out / np.linalg.norm(out)


def circuit_unitary(circuit: Circuit, cap: int = 12) -> np.ndarray:
    """Dense unitary of the circuit (small registers only)."""
    n = circuit.layout.total_qubits
    if n > cap:
        raise ValueError(f"{n} qubits exceeds the unitary-export cap of {cap}")
    dim = 1 << n
    cols = np.empty((dim, dim), dtype=complex)
    for b in range(dim):
        state = QuantumState.zero_state(circuit.layout)
        state.vec[:] = 0.0
        state.vec[b] = 1.0
        for gate in circuit.gates:
            state.apply(gate)
        cols[:, b] = state.vec
    return cols


def states_equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < tol or nb < tol:
        return na < tol and nb < tol
    return abs(abs(np.vdot(a, b)) / (na * nb) - 1.0) < tol

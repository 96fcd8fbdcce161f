"""Shared fixtures and independent oracles.

The kron-based builders here deliberately do not use the package's matrix
export, so matrix comparisons check two separate code paths.
"""
import numpy as np
import pytest

from specwalk import (
    LcuHamiltonian,
    PauliString,
    long_range_ising,
    normalize,
    tfim,
)

# --- independent dense oracle ------------------------------------------------

_I = np.eye(2, dtype=complex)
_OPS = {
    "I": _I,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_oracle(label: str) -> np.ndarray:
    """Matrix of a Pauli label built letter by letter (qubit 0 leftmost)."""
    sign = 1.0
    if label.startswith("-"):
        sign, label = -1.0, label[1:]
    out = np.array([[1.0]], dtype=complex)
    for ch in label:  # rightmost letter becomes the leftmost kron factor
        out = np.kron(_OPS[ch], out)
    return sign * out


def dense_oracle(h) -> np.ndarray:
    """Dense matrix of an LcuHamiltonian or RescaledLcu via kron_oracle."""
    pairs = h.terms if isinstance(h, LcuHamiltonian) else h.weights
    dim = 2**h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, p in pairs:
        out += coeff * kron_oracle(p.label())
    return out


def random_pauli(rng, n_qubits, allow_identity=False) -> PauliString:
    while True:
        x = int(rng.integers(0, 1 << n_qubits))
        z = int(rng.integers(0, 1 << n_qubits))
        if allow_identity or x or z:
            return PauliString(n_qubits, x, z)


def random_lcu(rng, n_qubits=3, max_terms=7) -> LcuHamiltonian:
    """Random Hamiltonian with distinct non-identity words, N <= max_terms."""
    n_terms = int(rng.integers(2, max_terms + 1))
    seen = {(0, 0)}
    pairs = [(float(rng.uniform(0, 0.5)), PauliString.identity(n_qubits))]
    while len(pairs) < n_terms + 1:
        p = random_pauli(rng, n_qubits)
        if (p.x_bits, p.z_bits) in seen:
            continue
        seen.add((p.x_bits, p.z_bits))
        coeff = float(rng.uniform(0.1, 1.0)) * (1 if rng.random() < 0.5 else -1)
        pairs.append((coeff, p))
    return LcuHamiltonian.from_terms(n_qubits, pairs)


# --- suite models --------------------------------------------------------------


@pytest.fixture(scope="session")
def suite_models():
    """The lattice models every spectral test runs over."""
    models = {}
    for n in (2, 3, 4):
        models[f"tfim{n}"] = tfim(n, 1.0, 1.0)
    for n in (3, 4):
        models[f"long_range{n}"] = long_range_ising(n, 1.0, 2.0)
    return models


@pytest.fixture(scope="session")
def half_identity_x():
    """The 2-term single-qubit model (I + X)/2, already normalized."""
    h = LcuHamiltonian.from_terms(
        1, [(0.5, PauliString.identity(1)), (0.5, PauliString.from_label("X"))]
    )
    return normalize(h, "none")


@pytest.fixture(scope="session")
def random_models():
    rng = np.random.default_rng(20240811)
    return [random_lcu(rng) for _ in range(20)]

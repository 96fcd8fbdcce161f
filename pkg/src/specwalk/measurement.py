"""Phase-estimation statistics, eigenstate projection, sequential-measurement
ground-state preparation, and observable recovery from walk eigenstates.

One ancilla drives the estimation: prepared |+>, a controlled walk, then an
X-basis measurement whose outcome probabilities are (1 +- E_k)/2 on a walk
eigenstate.  Analysis-mode routines compute exact probabilities and
posteriors; sample-mode routines consume an explicit seeded generator.
Energies are always the rescaled ones in [-1, 1]; containers carry the
normalization and shift needed to map back to the physical scale.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .blocks import BOUNDARY_EPS, InvariantBlock, invariant_blocks
from .hamiltonian import (
    InterpolatedModel,
    LcuHamiltonian,
    RescaledLcu,
    eigensystem,
    interpolate,
    normalize,
)
from .pauli import PauliString, star
from .simulator import QuantumState, make_rng, states_equal_up_to_phase
from .walk_core import WalkBundle, dressed_state


class BoundaryEnergyError(ValueError):
    """The eigenvalue sits at +-1, where the recovery formula degenerates."""


class UnrecoverableExpectationError(ValueError):
    """The recovery scale factor vanishes; this observable cannot be
    extracted from walk eigenstates at this energy."""


# --- single estimation steps -------------------------------------------------


def pe_step(state: QuantumState, controlled_walk, mode: str = "analyze", rng=None):
    """One estimation round: H on the pe qubit, the controlled walk, H again,
    then a computational measurement of the pe qubit (0 = '+').

    Returns (p_plus, posterior_plus, posterior_minus) in analyze mode and
    (outcome +-1, probability, posterior) in sample mode.  Posteriors have
    the pe qubit reset to |0> so steps compose.
    """
    from .circuits import Gate

    layout = state.layout
    if not layout.has_pe_qubit:
        raise ValueError("state layout has no phase-estimation qubit")
    pe = layout.pe_qubit
    work = state.copy()
    work.apply(Gate.h(pe))
    work.apply_circuit(controlled_walk)
    work.apply(Gate.h(pe))
    result = work.measure(pe, mode="analyze")
    p_plus = result.p_zero
    post_plus = result.posterior_zero
    post_minus = result.posterior_one
    if post_minus is not None:
        post_minus.apply(Gate.pauli_word(PauliString.single(1, 0, "X"), (pe,)))
    if mode == "analyze":
        return p_plus, post_plus, post_minus
    if mode == "sample":
        gen = rng if isinstance(rng, np.random.Generator) else make_rng(rng)
        if gen.random() < p_plus:
            return 1, p_plus, post_plus
        return -1, 1.0 - p_plus, post_minus
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class MeasurementRecord:
    outcomes: tuple[int, ...]
    estimate: float
    half_width: float
    shots: int
    seed: int
    non_eigenstate: bool = False

    def to_json(self) -> dict:
        return {
            "outcomes": list(self.outcomes),
            "estimate": self.estimate,
            "half_width": self.half_width,
            "shots": self.shots,
            "seed": self.seed,
            "non_eigenstate": self.non_eigenstate,
        }


def estimate_energy(
    state: QuantumState, controlled_walk, shots: int, seed: int, n_blocks: int = 10
) -> MeasurementRecord:
    """Repeated sampled estimation rounds on a refreshed ancilla.

    The shots are split into blocks; each block starts from a fresh copy of
    the input state and carries the measurement posterior within the block
    (re-preparation per block is how a finite-coherence run behaves).  The
    estimate is 2*(fraction of '+') - 1 with a fixed z=2 binomial half-width.
    On a walk eigenstate the rounds are i.i.d.; on anything else each block
    collapses toward a random eigenstate, the long-run estimate converges to
    the mixture mean, and the excess variance of the block means (threshold:
    four times the binomial expectation) raises the non_eigenstate flag.
    `state` is left in the final block's posterior.
    """
    if shots < 1:
        raise ValueError("need at least one shot")
    rng = make_rng(seed)
    initial = state.vec.copy()
    n_blocks = max(1, min(n_blocks, shots // 2)) if shots >= 4 else 1
    bounds = [round(i * shots / n_blocks) for i in range(n_blocks + 1)]
    outcomes: list[int] = []
    block_means: list[float] = []
    for i in range(n_blocks):
        state.vec[:] = initial
        size = bounds[i + 1] - bounds[i]
        if size == 0:
            continue
        # On a walk eigenstate both posteriors stay on the input ray, so the
        # remaining rounds are i.i.d.; drawing them in one batch consumes the
        # generator stream exactly like the sequential loop would.
        p_plus, post_plus, post_minus = pe_step(state, controlled_walk, mode="analyze")
        if _fixed_point(initial, post_plus) and _fixed_point(initial, post_minus):
            draws = rng.random(size)
            block = [1 if u < p_plus else -1 for u in draws]
            last = post_plus if block[-1] > 0 else post_minus
            state.vec[:] = last.vec
        else:
            block = []
            for _ in range(size):
                outcome, _, posterior = pe_step(
                    state, controlled_walk, mode="sample", rng=rng
                )
                block.append(outcome)
                state.vec[:] = posterior.vec
        outcomes.extend(block)
        block_means.append(sum(1 for o in block if o > 0) / len(block))
    plus = sum(1 for o in outcomes if o > 0)
    p_hat = plus / shots
    estimate = 2.0 * p_hat - 1.0
    half_width = 2 * 2.0 * math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / shots)
    return MeasurementRecord(
        tuple(outcomes),
        estimate,
        half_width,
        shots,
        seed,
        non_eigenstate=_drifting(block_means, p_hat, shots),
    )


def _fixed_point(vec, posterior, tol: float = 1e-12) -> bool:
    if posterior is None:
        return True
    return abs(abs(np.vdot(vec, posterior.vec)) - 1.0) < tol


def _drifting(block_means, p_hat, shots, factor: float = 4.0) -> bool:
    if len(block_means) < 2:
        return False
    size = shots / len(block_means)
    expected = p_hat * (1.0 - p_hat) / size
    if expected == 0.0:
        return bool(np.var(block_means) > 0.0)
    return bool(np.var(block_means) > factor * expected)


# --- deterministic projection -----------------------------------------------


@dataclass
class ProjectionResult:
    system_state: np.ndarray | None
    rounds: int
    success: bool
    round_probs: tuple[float, ...]
    cumulative_success: tuple[float, ...]


def _eigenspace_projection(state_vec, blocks, rng=None):
    """Projective measurement onto the walk eigenspaces (phases grouped
    within BOUNDARY_EPS).  Analysis mode (rng None) takes the most probable
    branch; sample mode draws one."""
    spaces: list[tuple[float, list[np.ndarray]]] = []
    for b in blocks:
        for phase, vec in ((b.theta, b.phi_plus), (-b.theta, b.phi_minus)):
            if b.phi1 is None and phase < 0:
                continue
            for i, (p0, vecs) in enumerate(spaces):
                if abs(math.remainder(phase - p0, 2 * math.pi)) < BOUNDARY_EPS:
                    vecs.append(vec)
                    break
            else:
                spaces.append((phase, [vec]))
    probs = []
    projections = []
    for _, vecs in spaces:
        proj = np.zeros_like(state_vec)
        for v in vecs:
            proj += v * np.vdot(v, state_vec)
        p = float(np.vdot(proj, proj).real)
        probs.append(p)
        projections.append(proj)
    total = sum(probs)
    if abs(total - 1.0) > 1e-8:
        raise AssertionError(f"state leaks out of the invariant subspace: {total}")
    if rng is None:
        i = int(np.argmax(probs))
    else:
        i = int(rng.choice(len(probs), p=np.array(probs) / total))
    return projections[i] / math.sqrt(probs[i]), probs[i]


def project_to_eigenstate(
    state: QuantumState,
    bundle: WalkBundle,
    max_rounds: int = 3,
    mode: str = "analyze",
    rng=None,
    blocks: list[InvariantBlock] | None = None,
) -> ProjectionResult:
    """Strip the control register off a walk eigenstate.

    Each round applies the unprepare circuit and measures whether the control
    register returned to vacuum (probability exactly 1/2 on a two-dimensional
    walk eigenstate; 1 on a bare dressed eigenstate).  On failure the state
    is re-prepared and projectively re-measured in the walk eigenbasis, and
    the round repeats; the cumulative success probability after L rounds is
    1 - 2**-L.

    Analysis mode follows the tree deterministically and reports exact round
    probabilities; sample mode draws every branch from `rng`.
    """
    if blocks is None:
        blocks = invariant_blocks(bundle)
    sampling = mode == "sample"
    if sampling:
        rng = rng if isinstance(rng, np.random.Generator) else make_rng(rng)
    current = state.copy()
    round_probs: list[float] = []
    cumulative: list[float] = []
    remaining = 1.0  # probability mass still on the all-failures path
    system_state = None
    rounds_used = 0
    for _ in range(max_rounds):
        work = current.copy()
        work.apply_circuit(bundle.prepare_dagger)
        p, success_state, failure_state = work.project_control_vacuum()
        rounds_used += 1
        round_probs.append(p)
        cumulative.append(1.0 - remaining * (1.0 - p))
        remaining *= 1.0 - p
        if sampling:
            if rng.random() < p:
                system_state = success_state.extract_system()
                break
        elif success_state is not None and system_state is None:
            system_state = success_state.extract_system()
        if failure_state is None:
            break
        # re-prepare, re-measure in the walk eigenbasis, and retry
        failure_state.apply_circuit(bundle.prepare)
        if sampling:
            _, _, posterior = pe_step(
                failure_state, bundle.controlled_walk, mode="sample", rng=rng
            )
            current = posterior
        else:
            projected, _ = _eigenspace_projection(failure_state.vec, blocks)
            current = QuantumState(bundle.layout, projected)
    return ProjectionResult(
        system_state,
        rounds_used,
        system_state is not None,
        tuple(round_probs),
        tuple(cumulative),
    )


# --- observable recovery ------------------------------------------------------


def gamma(sigma: PauliString, rescaled: RescaledLcu) -> float:
    """Weighted commutation sum  sum_j |beta_j|^2 (-1)**(sigma * P_j)."""
    total = 0.0
    for w, p in rescaled.weights:
        total += w * (-1.0 if star(sigma, p) else 1.0)
    return total


def recovery_scale(e_k: float, gamma_sigma: float, eps: float = BOUNDARY_EPS) -> float:
    """(1 + (Gamma - E^2)/(1 - E^2)) / 2, the attenuation of a system
    observable measured on a two-dimensional walk eigenstate."""
    if abs(e_k) >= 1.0 - eps:
        raise BoundaryEnergyError(f"eigenvalue {e_k} is at the spectral boundary")
    return 0.5 * (1.0 + (gamma_sigma - e_k * e_k) / (1.0 - e_k * e_k))


def recover_expectation(
    measured: float, e_k: float, gamma_sigma: float, eps: float = BOUNDARY_EPS
) -> float:
    """Invert the attenuation: the system-eigenstate expectation value."""
    scale = recovery_scale(e_k, gamma_sigma, eps)
    if abs(scale) <= eps:
        raise UnrecoverableExpectationError(
            f"recovery scale {scale} vanishes; observable not extractable"
        )
    return measured / scale


def verify_observable_recovery(bundle: WalkBundle, sigmas) -> list[dict]:
    """For every (sigma, eigenstate, sign): compare the recovered expectation
    against the direct eigenvector expectation.

    Returns one record per case with status 'pass', 'fail', or
    'invalid-precondition' (boundary energy or vanishing scale), so coverage
    is total even where the formula does not apply.
    """
    rescaled = bundle.rescaled
    blocks = invariant_blocks(bundle)
    records = []
    for sigma in sigmas:
        g = gamma(sigma, rescaled)
        for k, block in enumerate(blocks):
            direct = float(
                np.vdot(block.system_vector, _sigma_apply(sigma, block.system_vector)).real
            )
            for sign, vec in (("+", block.phi_plus), ("-", block.phi_minus)):
                rec = {
                    "sigma": sigma.label(),
                    "k": k,
                    "energy": block.energy,
                    "sign": sign,
                    "gamma": g,
                    "direct": direct,
                }
                if block.is_boundary:
                    rec.update(status="invalid-precondition", reason="boundary energy")
                    records.append(rec)
                    break  # one record per one-dimensional block
                walk_state = QuantumState(bundle.layout, vec.copy())
                measured = walk_state.expectation(sigma)
                rec["measured"] = measured
                try:
                    recovered = recover_expectation(measured, block.energy, g)
                except (BoundaryEnergyError, UnrecoverableExpectationError) as exc:
                    rec.update(status="invalid-precondition", reason=str(exc))
                    records.append(rec)
                    continue
                rec["recovered"] = recovered
                rec["error"] = abs(recovered - direct)
                rec["status"] = "pass" if rec["error"] <= 1e-9 else "fail"
                records.append(rec)
    return records


def _sigma_apply(sigma: PauliString, vec: np.ndarray) -> np.ndarray:
    from .pauli import apply_pauli

    return apply_pauli(vec, sigma)


# --- sequential-measurement preparation ---------------------------------------


@dataclass
class ZenoStep:
    g: float
    energy_rescaled: float
    energy: float
    ground_probability: float
    oracle_overlap: float
    success: bool


@dataclass
class ZenoTrace:
    schedule: tuple[float, ...]
    mode: str
    encoding: str
    seed: int | None
    steps: list[ZenoStep]
    success_probability: float
    final_state: np.ndarray
    final_fidelity: float

    def to_json(self) -> dict:
        return {
            "schedule": list(self.schedule),
            "mode": self.mode,
            "encoding": self.encoding,
            "seed": self.seed,
            "steps": [
                {
                    "g": s.g,
                    "energy_rescaled": s.energy_rescaled,
                    "energy": s.energy,
                    "ground_probability": s.ground_probability,
                    "oracle_overlap": s.oracle_overlap,
                    "success": s.success,
                }
                for s in self.steps
            ],
            "success_probability": self.success_probability,
            "final_fidelity": self.final_fidelity,
        }


def uniform_schedule(steps: int) -> tuple[float, ...]:
    if steps < 1:
        raise ValueError("need at least one step")
    return tuple((j + 1) / steps for j in range(steps))


def _validate_schedule(schedule) -> tuple[float, ...]:
    sched = tuple(float(g) for g in schedule)
    if not sched or sched[-1] != 1.0:
        raise ValueError("schedule must end at g = 1")
    if any(b <= a for a, b in zip((0.0,) + sched, sched)):
        raise ValueError("schedule must increase strictly from 0 to 1")
    return sched


def _build_walk(h: LcuHamiltonian, encoding: str, with_pe: bool) -> WalkBundle:
    from .walk_binary import binary_walk
    from .walk_unary import hybrid_long_range_walk, unary_walk

    rescaled = normalize(h, "auto")
    if encoding == "binary":
        return binary_walk(rescaled, with_pe=with_pe)
    if encoding == "unary":
        from .hamiltonian import group

        return unary_walk(group(rescaled), rescaled, with_pe=with_pe)
    if encoding == "hybrid":
        return hybrid_long_range_walk(rescaled, with_pe=with_pe)
    raise ValueError(f"unknown encoding {encoding!r}")


def zeno_prepare(
    model: InterpolatedModel,
    schedule,
    encoding: str = "binary",
    mode: str = "analyze",
    seed: int | None = None,
    shots: int = 200,
    max_rounds: int = 40,
) -> ZenoTrace:
    """Drag the supplied g=0 ground state to g=1 by a sequence of energy
    measurements along the interpolation schedule.

    Analysis mode: each measurement is the exact projective measurement onto
    the walk eigenspaces of H(g_j), the ground branch is followed, and the
    trace records exact branch probabilities, whose product telescopes into
    prod_j |<phi0(g_{j-1})|phi0(g_j)>|^2.  Sample mode: finite-shot
    estimation rounds followed by sampled projection, one trajectory.
    """
    if model.h0_ground is None:
        raise ValueError("the model must supply the g=0 ground state")
    schedule = _validate_schedule(schedule)
    sampling = mode == "sample"
    if sampling and seed is None:
        raise ValueError("sample mode requires a seed")
    rng = make_rng(seed) if sampling else None
    psi = model.h0_ground.astype(complex)
    psi = psi / np.linalg.norm(psi)
    _check_supplied_ground(model, psi)
    steps: list[ZenoStep] = []
    success_probability = 1.0
    prev_ground = psi
    for g in schedule:
        h = interpolate(model, g)
        bundle = _build_walk(h, encoding, with_pe=sampling)
        rescaled = bundle.rescaled
        blocks = invariant_blocks(bundle)
        oracle_vals, oracle_vecs = eigensystem(rescaled)
        ground_vec = oracle_vecs[:, 0]
        overlap = float(abs(np.vdot(prev_ground, ground_vec)) ** 2)
        state = QuantumState.from_system_state(bundle.layout, psi)
        state.apply_circuit(bundle.prepare)
        if sampling:
            estimate_energy(state, bundle.controlled_walk, shots, int(rng.integers(2**31)))
            projection = project_to_eigenstate(
                state, bundle, max_rounds=max_rounds, mode="sample", rng=rng, blocks=blocks
            )
            if not projection.success:
                raise RuntimeError("projection did not succeed within max_rounds")
            psi_next = projection.system_state
            ground_fid = float(abs(np.vdot(psi_next, ground_vec)) ** 2)
            e_bar = _state_energy(psi_next, rescaled)
            step_success = ground_fid > 0.5
            p_ground = ground_fid
        else:
            p_ground, posterior = _ground_branch(state.vec, blocks)
            success_probability *= p_ground
            walk_state = QuantumState(bundle.layout, posterior)
            walk_state.apply_circuit(bundle.prepare_dagger)
            p_vac, succ, _ = walk_state.project_control_vacuum()
            if abs(p_vac - 1.0) > 1e-9:
                raise AssertionError(
                    f"unprepared dressed eigenstate left the control register dirty: {p_vac}"
                )
            psi_next = succ.extract_system()
            e_bar = min(b.energy for b in blocks)
            step_success = True
        e_phys = rescaled.normalization * e_bar - rescaled.shift_added
        steps.append(ZenoStep(g, e_bar, e_phys, p_ground, overlap, step_success))
        psi = psi_next
        prev_ground = ground_vec
    final_h = interpolate(model, 1.0)
    _, final_vecs = eigensystem(final_h)
    final_fidelity = float(abs(np.vdot(psi, final_vecs[:, 0])) ** 2)
    if sampling:
        success_probability = float(
            np.prod([s.ground_probability for s in steps])
        )
    return ZenoTrace(
        schedule,
        mode,
        encoding,
        seed,
        steps,
        success_probability,
        psi,
        final_fidelity,
    )


def _check_supplied_ground(model: InterpolatedModel, psi: np.ndarray) -> None:
    from .hamiltonian import dense_matrix

    vals, _ = eigensystem(model.h0)
    energy = float(np.vdot(psi, dense_matrix(model.h0) @ psi).real)
    scale = max(1.0, abs(vals[0]))
    if abs(energy - vals[0]) > 1e-9 * scale:
        raise ValueError("supplied state is not a ground state of h0")


def _state_energy(psi: np.ndarray, rescaled: RescaledLcu) -> float:
    from .hamiltonian import dense_matrix

    return float(np.vdot(psi, dense_matrix(rescaled) @ psi).real)


def _ground_branch(state_vec, blocks):
    """Probability and normalized posterior of the lowest-energy branch of an
    exact energy measurement (degenerate ground energies share the branch)."""
    e0 = min(b.energy for b in blocks)
    proj = np.zeros_like(state_vec)
    for b in blocks:
        if b.energy <= e0 + 1e-12:
            for vec in (b.phi0,) if b.phi1 is None else (b.phi0, b.phi1):
                proj += vec * np.vdot(vec, state_vec)
    p = float(np.vdot(proj, proj).real)
    if p <= 0.0:
        raise ValueError("the state has no weight on the ground branch")
    return p, proj / math.sqrt(p)

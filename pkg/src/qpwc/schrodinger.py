"""State-vector picture of the same model universe, and the bridge to it.

Here the universe is a single stationary vector on qubit (x) clock whose
conditionals on the tick eigenstates are the qubit's moments: a photo album
rather than an evolving snapshot.  The total Hamiltonian carries a plus
sign on the clock generator, so relative states advance forward in the
tick label; the parity operator V (tick reversal on a symmetric grid)
transforms between this convention and the descriptor picture's minus
sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clock import Clock, shift_unitary
from .errors import (
    AsymmetricGridError,
    CommensurabilityError,
    SignatureMismatch,
    UndefinedRelativeState,
)
from .heisenberg import UniversalDescriptor, require_commensurate
from .operators import (
    Operator,
    SpaceSignature,
    StateVector,
    expectation,
    phase_distance,
    tensor,
)

_AMP_TOL = 1e-12


@dataclass(frozen=True)
class SchrodingerModel:
    """Qubit Hamiltonian plus clock, with total H (x) 1 + 1 (x) h."""

    qubit_hamiltonian: Operator
    clock: Clock = field(repr=False)

    @property
    def total(self) -> Operator:
        eye_q = Operator.identity(self.qubit_hamiltonian.signature)
        eye_c = Operator.identity(self.clock.signature)
        return tensor(self.qubit_hamiltonian, eye_c) + tensor(eye_q, self.clock.h_op)


@dataclass(frozen=True)
class HistoryState:
    """Universal vector with its per-tick weights and relative states.

    psi reconstructs exactly as sum_k weights[k] (relative_states[k] (x) |t_k>)
    with real nonnegative weights; ticks with zero weight hold None.
    """

    psi: StateVector
    clock: Clock = field(repr=False)
    weights: np.ndarray
    relative_states: tuple[StateVector | None, ...]

    @property
    def qubit_dim(self) -> int:
        return self.psi.signature.factors[0]


def _energy_lattice_defect(H: Operator, clock: Clock) -> tuple[float, float]:
    """Worst distance of a qubit energy from a pairable clock frequency.

    The album state puts every energy E against the clock frequency -E, so
    E must sit on the frequency lattice with -E inside the centered window.
    """
    unit = 2 * np.pi / clock.T
    w = np.linalg.eigvalsh((H.matrix + H.matrix.conj().T) / 2)
    worst, offender = 0.0, 0.0
    lo, hi = -(clock.d // 2), (clock.d + 1) // 2 - 1
    for E in w:
        x = E / unit
        defect = abs(x - round(x)) * unit
        if not lo <= -round(x) <= hi:
            defect = max(defect, unit)  # energy has no partner frequency
        if defect > worst:
            worst, offender = defect, float(E)
    return worst, offender


def build_history_state(psi0: StateVector, model: SchrodingerModel,
                        weights=None, enforce_commensurate: bool = True) -> HistoryState:
    """Album of forward-evolved snapshots: sum_k b_k (e^{-i H t_k} psi0) (x) |t_k>.

    Stationarity of the result needs more than commensurate Bohr gaps: each
    qubit energy must itself sit on the clock's frequency lattice with its
    negative inside the centered window, so every snapshot phase pairs with
    a clock frequency.  Both conditions are enforced unless
    ``enforce_commensurate=False``.
    """
    clock = model.clock
    H = model.qubit_hamiltonian
    if psi0.signature != H.signature:
        raise SignatureMismatch("psi0 must live on the qubit space")
    if abs(psi0.norm() - 1.0) > 1e-12:
        raise ValueError("psi0 must be normalized")
    if enforce_commensurate:
        require_commensurate(H, clock.T)
        defect, offender = _energy_lattice_defect(H, clock)
        if defect > 1e-9:
            raise CommensurabilityError(
                f"qubit energy {offender!r} has no matching clock frequency "
                f"(defect {defect:.3e}); shift the Hamiltonian by a c-number "
                f"or enlarge the clock"
            )
    d = clock.d
    if weights is None:
        weights = np.full(d, 1.0 / np.sqrt(d))
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (d,) or np.any(weights < 0):
        raise ValueError("weights must be d nonnegative reals")
    norm = np.linalg.norm(weights)
    if norm < _AMP_TOL:
        raise ValueError("all weights vanish: no state to build")
    weights = weights / norm
    w, v = np.linalg.eigh((H.matrix + H.matrix.conj().T) / 2)
    coeff = v.conj().T @ psi0.amplitudes
    nq = H.signature.dim
    amps = np.zeros((nq, d), dtype=complex)
    rels: list[StateVector | None] = []
    for k in range(d):
        snapshot = v @ (np.exp(-1j * w * clock.ticks[k]) * coeff)
        amps[:, k] = weights[k] * snapshot
        rels.append(StateVector(snapshot, H.signature) if weights[k] > _AMP_TOL else None)
    sig = H.signature.tensor(clock.signature)
    psi = StateVector(amps.reshape(-1), sig)
    weights.flags.writeable = False
    return HistoryState(psi=psi, clock=clock, weights=weights,
                        relative_states=tuple(rels))


def reconstruction_residual(h: HistoryState) -> float:
    """|| psi - sum_k b_k (rel_k (x) |t_k>) ||."""
    nq = h.qubit_dim
    d = h.clock.d
    rebuilt = np.zeros((nq, d), dtype=complex)
    for k, (b, rel) in enumerate(zip(h.weights, h.relative_states)):
        if rel is not None:
            rebuilt[:, k] = b * rel.amplitudes
    return float(np.linalg.norm(rebuilt.reshape(-1) - h.psi.amplitudes))


def relative_state(h: HistoryState, k: int) -> StateVector:
    """Normalized conditional <t_k | psi> / |<t_k | psi>|."""
    d = h.clock.d
    if not 0 <= k < d:
        raise IndexError(f"tick index {k} out of range for d={d}")
    amps = h.psi.amplitudes.reshape(h.qubit_dim, d)[:, k]
    norm = np.linalg.norm(amps)
    if norm <= _AMP_TOL:
        raise UndefinedRelativeState(
            f"tick {k} has zero amplitude: the conditional state is undefined"
        )
    return StateVector(amps / norm, SpaceSignature((h.qubit_dim,)))


def null_space_overlap_deficit(h: HistoryState, model: SchrodingerModel,
                               max_dim: int = 16) -> float:
    """1 - (weight of psi inside ker(H_total)), found by an eigensolver.

    A small-clock cross-check of the constructive zero-eigenvector claim:
    the album pairs every qubit energy with its negative clock frequency, so
    the built state should live entirely in the numerical null space.
    """
    if model.clock.d > max_dim:
        raise ValueError(f"null-space cross-check is limited to d <= {max_dim}")
    w, v = np.linalg.eigh(model.total.matrix)
    kernel = v[:, np.abs(w) < 1e-9]
    if kernel.shape[1] == 0:
        return 1.0
    coeff = kernel.conj().T @ h.psi.amplitudes
    return float(1.0 - np.vdot(coeff, coeff).real)


def stationarity_residual(h: HistoryState, model: SchrodingerModel) -> float:
    """|| (H_total - <H_total>) psi ||: eigenstate defect up to a global offset."""
    ham = model.total.matrix
    psi = h.psi.amplitudes
    hv = ham @ psi
    mean = np.vdot(psi, hv)
    return float(np.linalg.norm(hv - mean * psi))


def schrodinger_residual(h: HistoryState, model: SchrodingerModel) -> float:
    """Worst one-tick integration defect of the conditionals.

    max_k || |psi(t_{k+1})> - e^{-i H dt} |psi(t_k)> || up to a per-tick
    global phase, cyclically over all ticks.  Exact for commensurate album
    states; requires every tick to carry amplitude.
    """
    clock = model.clock
    d = clock.d
    w, v = np.linalg.eigh(model.qubit_hamiltonian.matrix)
    step = (v * np.exp(-1j * w * clock.dt)) @ v.conj().T
    rels = [relative_state(h, k).amplitudes for k in range(d)]
    worst = 0.0
    for k in range(d):
        worst = max(worst, phase_distance(rels[(k + 1) % d], step @ rels[k]))
    return worst


def shift_eigenstate_defect(clock: Clock, n: int) -> float:
    """Distance of e^{-i n dt h} |t_k> from |t_{k+n}>, worst tick, mod phase."""
    u = shift_unitary(clock, n * clock.dt).matrix
    d = clock.d
    worst = 0.0
    for k in range(d):
        e_k = np.zeros(d, dtype=complex)
        e_k[k] = 1.0
        target = np.zeros(d, dtype=complex)
        target[(k + n) % d] = 1.0
        worst = max(worst, phase_distance(u @ e_k, target))
    return worst


def parity_V(clock: Clock) -> Operator:
    """Tick-reversal permutation |t_k> -> |t_{d-1-k}>.

    Requires the symmetric grid t0 = -T/2 + dt/2, where tick values come in
    +/- pairs; then V* t V = -t exactly and V is an involution.  On even
    grids the frequency window keeps one unpaired frequency, so V* h V = -h
    only off that line; parity_frequency_defect reports the gap.
    """
    t0_sym = -clock.T / 2 + clock.dt / 2
    if abs(clock.spec.t0 - t0_sym) > 1e-9 * max(1.0, clock.T):
        raise AsymmetricGridError(
            f"parity needs the symmetric grid t0={t0_sym!r}, clock has t0={clock.spec.t0!r}"
        )
    d = clock.d
    m = np.zeros((d, d))
    for k in range(d):
        m[d - 1 - k, k] = 1.0
    return Operator(m, clock.signature)


def parity_frequency_defect(clock: Clock) -> float:
    """|| V* h V + h ||: zero for odd d; 2 pi d / T for even d, carried
    entirely by the unpaired window-edge frequency."""
    v = parity_V(clock).matrix
    h = clock.h_op.matrix
    return float(np.linalg.norm(v.conj().T @ h @ v + h, 2))


def parity_time_reversal_defect(clock: Clock) -> float:
    """|| V* (t - mean) V + (t - mean) ||, exact zero on the symmetric grid."""
    v = parity_V(clock).matrix
    center = float(np.mean(clock.ticks))
    t = clock.t_op.matrix - center * np.eye(clock.d)
    return float(np.linalg.norm(v.conj().T @ t @ v + t, 2))


def parity_expectation_invariance(clock: Clock, observable: Operator,
                                  psi: StateVector) -> float:
    """|<psi|A|psi> - <V^-1 psi| V* A V |V^-1 psi>|: zero for unitary V."""
    nq = psi.signature.factors[0]
    vfull = np.kron(np.eye(nq), parity_V(clock).matrix)
    a = observable.matrix
    before = np.vdot(psi.amplitudes, a @ psi.amplitudes)
    moved = vfull.conj().T @ psi.amplitudes  # V^-1 = V* for the permutation
    after = np.vdot(moved, (vfull.conj().T @ a @ vfull) @ moved)
    return float(abs(before - after))


@dataclass(frozen=True)
class PictureEquivalenceReport:
    max_deviation: float
    schrodinger_trajectories: np.ndarray  # (3, d)
    heisenberg_trajectories: np.ndarray  # (3, d)


def picture_equivalence_check(h: HistoryState, u: UniversalDescriptor) -> PictureEquivalenceReport:
    """Expectation trajectories of the triple agree tick by tick.

    State-picture side: <psi(t_k)| q0_i |psi(t_k)> from the album's
    conditionals against the universe's seed triple.  Descriptor side:
    <psi0| q_i(t_k) |psi0> from the tick-conditioned triple against the
    seed state.  Both trace the same unitary qubit evolution, so they agree
    to rounding.
    """
    if u.clock.spec != h.clock.spec:
        raise SignatureMismatch("pictures built on different clocks")
    d = h.clock.d
    t0 = h.clock.ticks[0]
    # undo the tick-0 evolution to recover seed state and seed triple
    wq, vq = np.linalg.eigh(u.qubit_hamiltonian.matrix)
    back = (vq * np.exp(1j * wq * t0)) @ vq.conj().T
    psi_seed = back @ relative_state(h, 0).amplitudes
    all_blocks = [u.component_blocks(i) for i in range(3)]
    seeds = [back @ blocks[0] @ back.conj().T for blocks in all_blocks]
    s_traj = np.zeros((3, d))
    h_traj = np.zeros((3, d))
    worst = 0.0
    for k in range(d):
        psik = relative_state(h, k).amplitudes
        for i in range(3):
            s_val = np.vdot(psik, seeds[i] @ psik).real
            h_val = np.vdot(psi_seed, all_blocks[i][k] @ psi_seed).real
            s_traj[i, k] = s_val
            h_traj[i, k] = h_val
            worst = max(worst, abs(s_val - h_val))
    return PictureEquivalenceReport(worst, s_traj, h_traj)


def phase_irrelevance_residual(h: HistoryState, observable: Operator) -> float:
    """Global phases of the universal vector change no expectation value."""
    psi = h.psi
    rotated = StateVector(np.exp(1j * 0.7321) * psi.amplitudes, psi.signature)
    return float(abs(expectation(psi, observable) - expectation(rotated, observable)))

"""Heisenberg-picture model universe: a qubit tensored with a cyclic clock.

The universe's state is carried by operator-valued descriptors: a Pauli
triple whose components are functions of the clock's time observable,

    q_i = sum_k  (e^{i H t_k} q0_i e^{-i H t_k}) (x) P_k,

together with the fixed clock generator h and a constant state vector.
Conditioning on a tick recovers the familiar Heisenberg-evolved qubit
triple; the whole construction is invariant under the joint time
translation generated by the universe Hamiltonian.

Commensurability.  The cyclic clock wraps after d ticks, so the qubit's
Bohr frequencies must be integer multiples of 2 pi / T or the wrap tick
breaks the translation invariance.  Even then, the tensor-sum Hamiltonian
H (x) 1 - 1 (x) h has eigenvalue pairs that differ by exactly 2 pi / dt
(the qubit energies push g frequency pairs past the centered window edge),
and the descriptors connect those aliased pairs at full weight.  The
invariance group of the model is the cyclic group generated by
exp(-i dt (H (x) 1 - 1 (x) h)); its principal generator, obtained by
folding the tensor-sum eigenvalues into (-pi/dt, pi/dt], commutes with the
descriptors exactly and generates the continuous stationarity checks.
stationarity_generator builds that folded generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .clock import Clock, shift_unitary, tick_projector
from .errors import (
    CommensurabilityError,
    NoClockSignal,
    NoMatch,
    SignatureMismatch,
)
from .operators import (
    Operator,
    SpaceSignature,
    StateVector,
    expectation,
    is_hermitian,
    op_norm,
    partial_trace,
    tensor,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_i, _j, _k] = 1.0
    _EPS[_j, _i, _k] = -1.0


@dataclass(frozen=True)
class PauliTriple:
    """Three Hermitian operators obeying q_i q_j = delta_ij + i eps_ijk q_k."""

    x: Operator
    y: Operator
    z: Operator

    def __post_init__(self):
        sig = self.x.signature
        if self.y.signature != sig or self.z.signature != sig:
            raise SignatureMismatch("triple components on different spaces")

    @property
    def signature(self) -> SpaceSignature:
        return self.x.signature

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    @classmethod
    def pauli(cls) -> "PauliTriple":
        sig = SpaceSignature((2,))
        return cls(Operator(SIGMA_X, sig), Operator(SIGMA_Y, sig), Operator(SIGMA_Z, sig))

    @classmethod
    def rotated(cls, theta: float, phi: float) -> "PauliTriple":
        """The standard triple conjugated by the (theta, phi) frame rotation."""
        base = cls.pauli()
        u = _expm_herm(SIGMA_Z, -1j * phi / 2) @ _expm_herm(SIGMA_Y, -1j * theta / 2)
        sig = base.signature
        return cls(*(Operator(u.conj().T @ c.matrix @ u, sig) for c in base))


def pauli_algebra_residual(triple: PauliTriple) -> float:
    """Worst-case norm defect of q_i q_j - delta_ij 1 - i eps_ijk q_k."""
    comps = list(triple)
    sig = triple.signature
    eye = np.eye(sig.dim)
    worst = 0.0
    for i in range(3):
        if not is_hermitian(comps[i]):
            return float("inf")
        for j in range(3):
            expect = (eye if i == j else 0.0 * eye) + 1j * sum(
                _EPS[i, j, k] * comps[k].matrix for k in range(3)
            )
            worst = max(worst, op_norm(comps[i].matrix @ comps[j].matrix - expect))
    return worst


def _expm_herm(h: np.ndarray, s: complex) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(s * w)) @ v.conj().T


def bohr_frequencies(H: Operator) -> np.ndarray:
    """Distinct positive eigenvalue gaps of a Hermitian operator."""
    if not is_hermitian(H):
        raise ValueError("Hamiltonian must be Hermitian")
    w = np.linalg.eigvalsh((H.matrix + H.matrix.conj().T) / 2)
    gaps = np.abs(w[:, None] - w[None, :]).reshape(-1)
    return np.unique(gaps[gaps > 0])


def commensurability_defect(H: Operator, T: float) -> tuple[float, float]:
    """(worst distance of a Bohr frequency from the 2 pi / T lattice, offender)."""
    unit = 2 * np.pi / T
    worst, offender = 0.0, 0.0
    for g in bohr_frequencies(H):
        x = g / unit
        defect = abs(x - round(x)) * unit
        if defect > worst:
            worst, offender = defect, float(g)
    return worst, offender


def require_commensurate(H: Operator, T: float, tol: float = 1e-9):
    defect, offender = commensurability_defect(H, T)
    if defect > tol:
        raise CommensurabilityError(
            f"Bohr frequency {offender!r} is {defect:.3e} off the 2*pi/T lattice "
            f"(T={T!r}); the cyclic clock's wrap-around would break stationarity"
        )


def qubit_period(H: Operator, T: float, tol: float = 1e-9) -> float | None:
    """Smallest P > 0 with e^{-i H P} proportional to the identity.

    None when H is a multiple of the identity (no clock dependence at all).
    Requires commensurate H; the period is then T / gcd of the integer
    Bohr multiples.
    """
    unit = 2 * np.pi / T
    ints = []
    for g in bohr_frequencies(H):
        x = g / unit
        if abs(x - round(x)) > tol / unit:
            return None  # no exact period on the clock lattice
        ints.append(int(round(x)))
    if not ints:
        return None
    g_all = 0
    for n in ints:
        g_all = gcd(g_all, n)
    return T / g_all if g_all else None


def _evolved_blocks(q0: Operator, H: Operator, clock: Clock) -> np.ndarray:
    """B_k = e^{i H t_k} q0 e^{-i H t_k} for every tick, shape (d, nq, nq)."""
    w, v = np.linalg.eigh((H.matrix + H.matrix.conj().T) / 2)
    q = v.conj().T @ q0.matrix @ v
    phases = np.exp(1j * np.outer(clock.ticks, w))  # (d, nq)
    blocks = phases[:, :, None] * q[None, :, :] * phases.conj()[:, None, :]
    return np.einsum("ab,kbc,dc->kad", v, blocks, v.conj())


@dataclass(frozen=True)
class UniversalDescriptor:
    """The model universe's operator-valued state: triple, clock, qubit H."""

    triple: PauliTriple
    clock: Clock = field(repr=False)
    qubit_hamiltonian: Operator
    commensurate: bool

    @property
    def qubit_dim(self) -> int:
        return self.qubit_hamiltonian.signature.dim

    def component_blocks(self, i: int) -> np.ndarray:
        """Per-tick diagonal blocks of component i, shape (d, nq, nq)."""
        d = self.clock.d
        nq = self.qubit_dim
        m = list(self.triple)[i].matrix.reshape(nq, d, nq, d)
        return np.einsum("akbk->kab", m)


def build_universal(q0: PauliTriple, H: Operator, clock: Clock,
                    enforce_commensurate: bool = True) -> UniversalDescriptor:
    """Assemble the tick-conditioned Heisenberg triple on qubit (x) clock.

    Each component is sum_k (e^{i H t_k} q0_i e^{-i H t_k}) (x) P_k: the
    qubit triple evolved forward to the tick value, placed on that tick's
    spectral projector.  ``enforce_commensurate=False`` keeps the
    deliberately broken construction available so the necessity of the
    commensurability condition can be demonstrated.
    """
    residual = pauli_algebra_residual(q0)
    if residual > 1e-9:
        raise ValueError(f"q0 violates the Pauli algebra (residual {residual:.3e})")
    if q0.signature != H.signature:
        raise SignatureMismatch("q0 and H must share the qubit space")
    if not is_hermitian(H):
        raise ValueError("qubit Hamiltonian must be Hermitian")
    defect, _ = commensurability_defect(H, clock.T)
    commensurate = defect <= 1e-9
    if enforce_commensurate:
        require_commensurate(H, clock.T)
    d = clock.d
    nq = H.signature.dim
    sig = H.signature.tensor(clock.signature)
    comps = []
    for q0_i in q0:
        blocks = _evolved_blocks(q0_i, H, clock)
        m = np.zeros((nq, d, nq, d), dtype=complex)
        idx = np.arange(d)
        m[:, idx, :, idx] = blocks
        comps.append(Operator(m.reshape(nq * d, nq * d), sig))
    return UniversalDescriptor(PauliTriple(*comps), clock, H, commensurate)


def total_hamiltonian(u: UniversalDescriptor) -> Operator:
    """H (x) 1 - 1 (x) h: the tensor-sum universe Hamiltonian.

    Its spectrum is the set of differences {E_n - w_m}.  The minus sign on
    the clock part is what makes conditioning on later ticks show forward
    Heisenberg evolution.
    """
    eye_c = Operator.identity(u.clock.signature)
    eye_q = Operator.identity(u.qubit_hamiltonian.signature)
    return tensor(u.qubit_hamiltonian, eye_c) - tensor(eye_q, u.clock.h_op)


def stationarity_generator(u: UniversalDescriptor) -> Operator:
    """Principal generator of the universe's time-translation group.

    Same eigenvectors as the tensor-sum Hamiltonian, with each eigenvalue
    E_n - w_m folded into (-pi/dt, pi/dt].  The fold merges the aliased
    window-edge pairs, so the folded generator commutes with everything the
    one-tick translation commutes with; on a commensurate universe that
    includes the descriptors, exactly.
    """
    clock = u.clock
    d, T = clock.d, clock.T
    unit = 2 * np.pi / T
    EH, VH = np.linalg.eigh(
        (u.qubit_hamiltonian.matrix + u.qubit_hamiltonian.matrix.conj().T) / 2
    )
    # integer representatives live on (-d/2, d/2] for even d and the
    # symmetric window for odd d, matching the clock's attainable values
    lo = 1 - d // 2 if d % 2 == 0 else -(d // 2)
    folded = np.empty((len(EH), d))
    for n, E in enumerate(EH):
        x = (E - clock.frequencies) / unit
        k = np.round(x)
        near = np.abs(x - k) < 1e-6
        kf = ((k.astype(int) - lo) % d) + lo
        # off-lattice eigenvalues fold continuously into [-d/2, d/2)
        xf = ((x + d / 2) % d) - d / 2
        folded[n] = np.where(near, kf, xf) * unit
    w = np.kron(VH, clock.dft)
    m = (w * folded.reshape(-1)) @ w.conj().T
    sig = u.qubit_hamiltonian.signature.tensor(clock.signature)
    return Operator((m + m.conj().T) / 2, sig)


def no_evolution_residual(u: UniversalDescriptor) -> tuple[float, float, float]:
    """op_norm([L, q_i]) per component, with L the stationarity generator."""
    L = stationarity_generator(u).matrix
    out = []
    for comp in u.triple:
        m = comp.matrix
        out.append(float(np.linalg.norm(L @ m - m @ L, 2)))
    return tuple(out)


def alpha_independence_residual(u: UniversalDescriptor, alphas=(0.1, 1.0, np.pi)) -> float:
    """Worst change of any component under conjugation by exp(-i L alpha)."""
    L = stationarity_generator(u)
    worst = 0.0
    for alpha in alphas:
        ua = _expm_herm(L.matrix, -1j * alpha)
        for comp in u.triple:
            worst = max(worst, float(np.linalg.norm(
                ua.conj().T @ comp.matrix @ ua - comp.matrix, 2)))
    return worst


def relative_descriptor(u: UniversalDescriptor, k: int) -> PauliTriple:
    """Qubit triple conditioned on tick k: trace over the clock against P_k."""
    if not 0 <= k < u.clock.d:
        raise IndexError(f"tick index {k} out of range for d={u.clock.d}")
    eye_q = Operator.identity(u.qubit_hamiltonian.signature)
    pk = tensor(eye_q, tick_projector(u.clock, k))
    comps = [partial_trace(comp @ pk, keep=[0]) for comp in u.triple]
    return PauliTriple(*comps)


def descriptor_reconstruction_residual(u: UniversalDescriptor) -> float:
    """||sum_k q(t_k) (x) P_k - q|| over components: zero for tick-diagonal q."""
    worst = 0.0
    d = u.clock.d
    for i, comp in enumerate(u.triple):
        blocks = u.component_blocks(i)
        nq = u.qubit_dim
        m = np.zeros((nq, d, nq, d), dtype=complex)
        idx = np.arange(d)
        m[:, idx, :, idx] = blocks
        worst = max(worst, op_norm(m.reshape(nq * d, nq * d) - comp.matrix))
    return worst


def discrete_step_residual(u: UniversalDescriptor) -> float:
    """Worst ||q(t_{k+1}) - e^{i H dt} q(t_k) e^{-i H dt}|| over ticks, components.

    The exact one-tick Heisenberg equation of motion; on a commensurate
    universe the wrap step from tick d-1 back to tick 0 closes exactly too.
    """
    s = _expm_herm(u.qubit_hamiltonian.matrix, 1j * u.clock.dt)
    worst = 0.0
    for i in range(3):
        blocks = u.component_blocks(i)
        stepped = np.einsum("ab,kbc,dc->kad", s, blocks, s.conj())
        diff = np.roll(blocks, -1, axis=0) - stepped
        worst = max(worst, max(float(np.linalg.norm(diff[k], 2)) for k in range(u.clock.d)))
    return worst


def universal_derivative(u: UniversalDescriptor) -> tuple[Operator, Operator, Operator]:
    """i [1 (x) h, q_i] per component: the clock-side derivative."""
    eye_q = Operator.identity(u.qubit_hamiltonian.signature)
    hc = tensor(eye_q, u.clock.h_op).matrix
    out = []
    for comp in u.triple:
        m = 1j * (hc @ comp.matrix - comp.matrix @ hc)
        out.append(Operator(m, comp.signature))
    return tuple(out)


def clock_shift(u: UniversalDescriptor, lam: float) -> UniversalDescriptor:
    """Conjugate every component by 1 (x) e^{i h lam}: shift the clock state.

    For lam = n dt this moves the tick-k block to tick k - n, i.e. the
    shifted universe reads 'the qubit at tick k has aged n extra ticks'.
    """
    eye_q = np.eye(u.qubit_dim)
    w = np.kron(eye_q, shift_unitary(u.clock, -lam).matrix)  # e^{+i h lam}
    comps = [
        Operator(w @ comp.matrix @ w.conj().T, comp.signature) for comp in u.triple
    ]
    return UniversalDescriptor(PauliTriple(*comps), u.clock, u.qubit_hamiltonian,
                               u.commensurate)


@dataclass(frozen=True)
class ReadoutResult:
    lam: float
    residual: float
    ambiguous: bool
    period: float | None


def clock_readout(u_shifted: UniversalDescriptor, u_ref: UniversalDescriptor,
                  match_tol: float = 1e-6) -> ReadoutResult:
    """Recover the clock shift relating two universes built from the same data.

    Grid search over the d tick shifts for the smallest nonnegative lam with
    e^{i h lam} q_ref(t) e^{-i h lam} matching the shifted descriptors.  When
    the qubit conjugation is periodic with period P < T the answer is only
    defined modulo P; the result is then lam mod P with ``ambiguous`` set.

    Raises NoClockSignal when the reference universe has no clock dependence
    (qubit Hamiltonian proportional to the identity) and NoMatch when no
    grid shift reaches ``match_tol``.
    """
    if u_ref.clock.spec != u_shifted.clock.spec:
        raise SignatureMismatch("readout needs both universes on the same clock")
    if bohr_frequencies(u_ref.qubit_hamiltonian).size == 0:
        raise NoClockSignal(
            "qubit Hamiltonian is a c-number: the descriptors do not depend on "
            "the clock, so its state cannot be read out"
        )
    d = u_ref.clock.d
    residuals = np.empty(d)
    for n in range(d):
        trial = clock_shift(u_ref, n * u_ref.clock.dt)
        residuals[n] = sum(
            op_norm(a - b) for a, b in zip(trial.triple, u_shifted.triple)
        )
    best = int(np.argmin(residuals))
    if residuals[best] >= match_tol:
        raise NoMatch(
            f"no tick shift matches within {match_tol:.1e}; "
            f"best residual {residuals[best]:.3e} at {best} ticks"
        )
    period = qubit_period(u_ref.qubit_hamiltonian, u_ref.clock.T)
    ambiguous = bool(period is not None and period < u_ref.clock.T - 1e-12)
    matches = np.flatnonzero(residuals < match_tol)
    lam = float(matches.min()) * u_ref.clock.dt
    return ReadoutResult(lam=lam, residual=float(residuals[best]),
                         ambiguous=ambiguous, period=period)


@dataclass(frozen=True)
class ModelUniverse:
    """Descriptors plus a constant state vector for expectation values."""

    descriptor: UniversalDescriptor
    hamiltonian: Operator
    heisenberg_state: StateVector
    stationary: bool
    stationarity_residual: float

    @property
    def clock(self) -> Clock:
        return self.descriptor.clock


def build_model_universe(u: UniversalDescriptor, psi0: StateVector,
                         weights=None) -> ModelUniverse:
    """Attach a history-superposition state to the descriptors.

    The state is sum_k b_k (e^{i H t_k} psi0) (x) |t_k> with real weights
    b_k >= 0 (uniform by default).  With uniform weights and qubit energies
    that are integer multiples of 2 pi / T inside the frequency window, this
    is an exact eigenstate of the tensor-sum Hamiltonian; the ``stationary``
    flag records whether the built state achieved residual <= 1e-8.
    """
    clock = u.clock
    d = clock.d
    if weights is None:
        weights = np.full(d, 1.0 / np.sqrt(d))
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (d,) or np.any(weights < 0):
        raise ValueError("weights must be d nonnegative reals")
    wnorm = np.linalg.norm(weights)
    if wnorm < 1e-12:
        raise ValueError("cannot build a universe state with all ticks zeroed")
    weights = weights / wnorm
    if psi0.signature != u.qubit_hamiltonian.signature:
        raise SignatureMismatch("psi0 must live on the qubit space")
    w, v = np.linalg.eigh(u.qubit_hamiltonian.matrix)
    coeff = v.conj().T @ psi0.amplitudes
    nq = u.qubit_dim
    amps = np.zeros((nq, d), dtype=complex)
    for k in range(d):
        evolved = v @ (np.exp(1j * w * clock.ticks[k]) * coeff)
        amps[:, k] = weights[k] * evolved
    sig = u.qubit_hamiltonian.signature.tensor(clock.signature)
    psi = StateVector(amps.reshape(-1), sig)
    ham = total_hamiltonian(u)
    hv = ham.matrix @ psi.amplitudes
    mean = np.vdot(psi.amplitudes, hv)
    residual = float(np.linalg.norm(hv - mean * psi.amplitudes))
    return ModelUniverse(
        descriptor=u,
        hamiltonian=ham,
        heisenberg_state=psi,
        stationary=residual <= 1e-8,
        stationarity_residual=residual,
    )


def tick_probability(m: ModelUniverse, k: int) -> float:
    """<1 (x) P_k> on the universe state."""
    eye_q = Operator.identity(m.descriptor.qubit_hamiltonian.signature)
    return expectation(
        m.heisenberg_state, tensor(eye_q, tick_projector(m.clock, k))
    ).real


def expectation_stationarity_residual(m: ModelUniverse, observables,
                                      alphas=(0.1, 1.0, np.pi)) -> float:
    """Worst |<e^{i H a} A e^{-i H a}> - <A>| over observables and alphas."""
    psi = m.heisenberg_state.amplitudes
    ham = m.hamiltonian.matrix
    worst = 0.0
    for alpha in alphas:
        ua = _expm_herm(ham, -1j * alpha)
        for a in observables:
            mat = a.matrix if isinstance(a, Operator) else np.asarray(a)
            before = np.vdot(psi, mat @ psi)
            after = np.vdot(psi, ua.conj().T @ mat @ ua @ psi)
            worst = max(worst, abs(after - before))
    return float(worst)


@dataclass(frozen=True)
class MissingTimeReport:
    zeroed_ticks: tuple[int, ...]
    descriptor_deviation: float
    max_tick_probability: float
    stationarity_residual: float
    stationary: bool


def missing_time_check(m: ModelUniverse, zeroed_ticks) -> MissingTimeReport:
    """Zero the given ticks' amplitudes and verify nothing is lost.

    The descriptors do not depend on the state, so the relative triple at a
    zeroed tick must equal the reference universe's: the events that 'would
    have happened' there remain encoded.  The zeroed state itself cannot be
    an exact eigenstate of the universe Hamiltonian (every eigenstate of the
    qubit (x) clock tensor-sum has exactly uniform tick weight), so its
    stationarity residual is reported honestly alongside.
    """
    zeroed = tuple(sorted(set(int(k) for k in zeroed_ticks)))
    d = m.clock.d
    if any(k < 0 or k >= d for k in zeroed):
        raise IndexError(f"zeroed ticks {zeroed} out of range for d={d}")
    weights = np.full(d, 1.0 / np.sqrt(d))
    for k in zeroed:
        weights[k] = 0.0
    if not np.any(weights > 0):
        raise ValueError("cannot zero every tick: the state would vanish")
    # same qubit data, fresh state with holes
    psi0 = _reference_psi0(m)
    zeroed_universe = build_model_universe(m.descriptor, psi0, weights=weights)
    dev = 0.0
    for k in zeroed:
        ref = relative_descriptor(m.descriptor, k)
        test = relative_descriptor(zeroed_universe.descriptor, k)
        for a, b in zip(ref, test):
            dev = max(dev, op_norm(a - b))
    leak = max((tick_probability(zeroed_universe, k) for k in zeroed), default=0.0)
    return MissingTimeReport(
        zeroed_ticks=zeroed,
        descriptor_deviation=dev,
        max_tick_probability=leak,
        stationarity_residual=zeroed_universe.stationarity_residual,
        stationary=zeroed_universe.stationary,
    )


def _reference_psi0(m: ModelUniverse) -> StateVector:
    """Qubit state conditioned on tick 0, renormalized."""
    nq = m.descriptor.qubit_dim
    d = m.clock.d
    amps = m.heisenberg_state.amplitudes.reshape(nq, d)[:, 0]
    n = np.linalg.norm(amps)
    if n < 1e-12:
        raise ValueError("reference universe has no amplitude at tick 0")
    # undo the tick-0 evolution so the rebuilt state shares relative phases
    w, v = np.linalg.eigh(m.descriptor.qubit_hamiltonian.matrix)
    back = (v * np.exp(-1j * w * m.clock.ticks[0])) @ v.conj().T
    return StateVector(back @ (amps / n), m.descriptor.qubit_hamiltonian.signature)


def clock_shift_asymmetry(u: UniversalDescriptor) -> float:
    """max_i ||q_i(t + dt) - q_i(t)||: nonzero whenever the qubit evolves."""
    shifted = clock_shift(u, u.clock.dt)
    return max(op_norm(a - b) for a, b in zip(shifted.triple, u.triple))


def coefficient_table(u: UniversalDescriptor, max_dim: int = 16) -> list[tuple[int, PauliTriple]]:
    """Power-expansion coefficients of the triple in the time observable.

    Solves the Vandermonde system over the tick grid, entrywise.  Monomial
    conditioning limits this diagnostic to small clocks (d <= ``max_dim``).
    """
    d = u.clock.d
    if d > max_dim:
        raise ValueError(f"coefficient table is a small-clock diagnostic (d <= {max_dim})")
    V = np.vander(u.clock.ticks, N=d, increasing=True)
    sig = u.qubit_hamiltonian.signature
    nq = sig.dim
    tables = []
    for i in range(3):
        blocks = u.component_blocks(i)  # (d, nq, nq)
        coeffs = np.linalg.solve(V, blocks.reshape(d, nq * nq))
        tables.append(coeffs.reshape(d, nq, nq))
    out = []
    for n in range(d):
        triple = PauliTriple(*(
            Operator((tables[i][n] + tables[i][n].conj().T) / 2, sig) for i in range(3)
        ))
        out.append((n, triple))
    return out

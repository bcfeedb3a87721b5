"""Two clocks on a joint space, synchronized up to an integer rate and a
grid offset.

The synchronization relation t2 = a t1 + b is realized two ways: as the
correlated joint state sum_k |t_k>_1 |a t_k + b>_2 (whose tick statistics
make the rate and offset sharp), and as the operator substitution
t2 -> a t1 + b used by the derivative-exchange identity
d/dt1 = a d/dt2.  Offsets are circular (mod T2): the finite clocks wrap,
so offset statistics use phase averages rather than plain means.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clock import Clock, ClockSpec, build_clock, shift_unitary, validate_window
from .errors import CommensurabilityError, NonHermitianError, SignatureMismatch
from .operators import (
    Operator,
    SpaceSignature,
    StateVector,
    expectation,
    is_hermitian,
    tensor,
)
from .qcalculus import CSeries


@dataclass(frozen=True)
class ClockPair:
    """Two clocks with a rate-a, offset-b synchronization map between grids."""

    c1: Clock = field(repr=False)
    c2: Clock = field(repr=False)
    rate: int
    offset: float
    tick_map: np.ndarray  # c2 tick index of (a t1_k + b) mod T2

    @property
    def signature(self) -> SpaceSignature:
        return self.c1.signature.tensor(self.c2.signature)

    def t1_joint(self) -> Operator:
        return tensor(self.c1.t_op, Operator.identity(self.c2.signature))

    def t2_joint(self) -> Operator:
        return tensor(Operator.identity(self.c1.signature), self.c2.t_op)

    def h1_joint(self) -> Operator:
        return tensor(self.c1.h_op, Operator.identity(self.c2.signature))

    def h2_joint(self) -> Operator:
        return tensor(Operator.identity(self.c1.signature), self.c2.h_op)

    def rate_op(self) -> Operator:
        """The rate as a q-number constant: a * identity on the joint space."""
        return float(self.rate) * Operator.identity(self.signature)

    def offset_op(self) -> Operator:
        """The offset as a q-number constant: b * identity on the joint space."""
        return float(self.offset) * Operator.identity(self.signature)


def build_pair(spec1: ClockSpec, spec2: ClockSpec, rate: int = 1,
               offset: float = 0.0) -> ClockPair:
    """Build both clocks and the grid map k -> index of (a t1_k + b) on c2.

    Every mapped point must land on c2's tick lattice modulo T2; otherwise
    the pair is incommensurate and refused.
    """
    if int(rate) != rate or rate < 1:
        raise ValueError(f"rate must be a positive integer, got {rate}")
    rate = int(rate)
    c1, c2 = build_clock(spec1), build_clock(spec2)
    mapping = np.empty(c1.d, dtype=int)
    for k, tk in enumerate(c1.ticks):
        x = (rate * tk + offset - c2.spec.t0) / c2.dt
        xm = x % c2.d
        j = int(round(xm)) % c2.d
        if abs(xm - round(xm)) > 1e-9:
            raise CommensurabilityError(
                f"rate {rate} and offset {offset!r} carry tick {k} of clock 1 "
                f"off clock 2's grid (fractional index {xm!r})"
            )
        mapping[k] = j
    mapping.flags.writeable = False
    return ClockPair(c1=c1, c2=c2, rate=rate, offset=float(offset), tick_map=mapping)


def correlated_state(pair: ClockPair) -> StateVector:
    """(1/sqrt d1) sum_k |t_k>_1 |map(k)>_2: clock 2 reads a t1 + b."""
    d1, d2 = pair.c1.d, pair.c2.d
    amps = np.zeros((d1, d2), dtype=complex)
    amps[np.arange(d1), pair.tick_map] = 1.0 / np.sqrt(d1)
    return StateVector(amps.reshape(-1), pair.signature)


def build_sync_state(pair: ClockPair) -> StateVector:
    """The ideal synchronized state; demands rate 1, offset 0, equal grids."""
    if pair.rate != 1 or abs(pair.offset) > 1e-12:
        raise ValueError(
            "ideal synchronization needs rate=1 and offset=0; build the "
            "correlated_state of a rated/offset pair instead"
        )
    if pair.c1.spec != pair.c2.spec:
        raise ValueError("ideal synchronization needs two identical clock specs")
    return correlated_state(pair)


def sharpness(a_op: Operator, psi: StateVector) -> float:
    """<A^2> - <A>^2; zero (within 1e-10) means the observable is sharp."""
    if not is_hermitian(a_op):
        raise NonHermitianError("sharpness is defined for Hermitian observables")
    if psi.signature != a_op.signature:
        raise SignatureMismatch("state and observable on different spaces")
    # <A^2> = ||A psi||^2 for Hermitian A: avoids the dense square
    apsi = a_op.matrix @ psi.amplitudes
    mean = np.vdot(psi.amplitudes, apsi).real
    second = np.vdot(apsi, apsi).real
    return second - mean * mean


def joint_tick_distribution(pair: ClockPair, psi: StateVector) -> np.ndarray:
    """P(k, j) = |<t_k, t_j | psi>|^2, shape (d1, d2)."""
    return np.abs(psi.amplitudes.reshape(pair.c1.d, pair.c2.d)) ** 2


@dataclass(frozen=True)
class SyncReport:
    rate: int
    offset: float
    rate_sharpness: float
    offset_sharpness: float
    offset_op_mean: float
    offset_op_variance: float
    correlation: np.ndarray  # (d1, d2)


def _circular_fit(pair: ClockPair, prob: np.ndarray, rate: int) -> complex:
    """Resultant of exp(2 pi i (t2 - rate t1) / T2) under the distribution."""
    t1, t2 = pair.c1.ticks, pair.c2.ticks
    phases = np.exp(2j * np.pi * (t2[None, :] - rate * t1[:, None]) / pair.c2.T)
    return complex(np.sum(prob * phases))


def _candidate_rates(pair: ClockPair) -> list[int]:
    cands = []
    for a in range(1, pair.c2.d + 1):
        x = a * pair.c1.dt / pair.c2.dt
        if abs(x - round(x)) < 1e-9:
            cands.append(a)
    return cands


def sync_report(pair: ClockPair, psi: StateVector) -> SyncReport:
    """Estimate rate and offset from the joint tick statistics.

    The rate estimate maximizes the circular concentration of t2 - a t1 over
    the commensurate integer candidates; the offset is that fit's circular
    mean (mod T2).  Sharpness figures are resultant-length defects scaled to
    time squared, zero exactly when the correlation is deterministic.  The
    plain operator mean and variance of t2 - rate * t1 (no wrap handling)
    are reported alongside.
    """
    prob = joint_tick_distribution(pair, psi)
    cands = _candidate_rates(pair)
    fits = [abs(_circular_fit(pair, prob, a)) for a in cands]
    best = int(np.argmax(fits))
    rate = cands[best]
    z = _circular_fit(pair, prob, rate)
    resultant = abs(z)
    scale = pair.c2.T / (2 * np.pi)
    offset = (np.angle(z) * scale) % pair.c2.T if resultant > 1e-300 else 0.0
    if offset > pair.c2.T - 1e-9 * pair.c2.T:
        offset = 0.0
    diff = pair.t2_joint() - float(rate) * pair.t1_joint()
    return SyncReport(
        rate=rate,
        offset=float(offset),
        rate_sharpness=float(1.0 - min(1.0, resultant)),
        offset_sharpness=float(scale**2 * 2.0 * (1.0 - min(1.0, resultant))),
        offset_op_mean=expectation(psi, diff).real,
        offset_op_variance=sharpness(diff, psi),
        correlation=prob,
    )


def lockstep_defect(pair: ClockPair) -> float:
    """Evolve the ideal sync state one tick with h1 + h2; the diagonal
    correlation must come back exactly, rotated by one tick on both clocks."""
    psi = build_sync_state(pair)
    u = np.kron(shift_unitary(pair.c1, pair.c1.dt).matrix,
                shift_unitary(pair.c2, pair.c2.dt).matrix)
    stepped = u @ psi.amplitudes
    d = pair.c1.d
    target = np.zeros((d, d), dtype=complex)
    target[(np.arange(d) + 1) % d, (pair.tick_map + 1) % d] = 1.0 / np.sqrt(d)
    return float(np.linalg.norm(stepped - target.reshape(-1)))


def constants_commute_defect(pair: ClockPair) -> float:
    """Rate and offset constants commute with every clock-1 observable.

    Reported in the Frobenius norm, which majorizes the spectral norm; the
    commutators here are structurally zero, so any norm agrees.
    """
    worst = 0.0
    for const in (pair.rate_op(), pair.offset_op()):
        for obs in (pair.t1_joint(), pair.h1_joint()):
            m = const.matrix @ obs.matrix - obs.matrix @ const.matrix
            worst = max(worst, float(np.linalg.norm(m)))
    return worst


def _affine_series_values(series: CSeries, pair: ClockPair) -> np.ndarray:
    """f(a t1_k + b) over clock 1's ticks, no wrap: the substitution image."""
    return series.evaluate(pair.rate * pair.c1.ticks + pair.offset)


def unwrapped_window(pair: ClockPair, steps: int = 1) -> np.ndarray:
    """Clock-1 ticks whose affine image stays below T2 with room for
    ``steps`` forward differences on either grid."""
    margin = steps * max(pair.rate * pair.c1.dt, pair.c2.dt)
    t2_origin = pair.c2.spec.t0
    good = [
        k
        for k, tk in enumerate(pair.c1.ticks)
        if pair.rate * tk + pair.offset + margin < t2_origin + pair.c2.T - 1e-9
        and pair.rate * tk + pair.offset >= t2_origin - 1e-9
    ]
    if not good:
        raise ValueError("no unwrapped ticks for this pair")
    return np.asarray(good, dtype=int)


def derivative_exchange_residual(pair: ClockPair, series: CSeries,
                                 realization: str = "finite_difference",
                                 window=None) -> float:
    """Windowed defect of d/dt1 f(a t1 + b) = a [d/dt2 f](a t1 + b).

    The left side differentiates the substituted symbol with clock 1's own
    algebra; the right side differentiates f with clock 2's algebra and
    transports the result back through the tick map.  With the finite
    difference realization and rate 1 the two sides coincide exactly away
    from the wrap; for faster clocks the defect shrinks like dt.
    """
    c1, c2 = pair.c1, pair.c2
    if window is None:
        window = unwrapped_window(pair, steps=2)
    idx = validate_window(c1, window)
    g1 = np.diag(_affine_series_values(series, pair)).astype(complex)
    f2 = np.diag(series.evaluate(c2.ticks)).astype(complex)
    if realization == "finite_difference":
        u1 = shift_unitary(c1, c1.dt).matrix
        u2 = shift_unitary(c2, c2.dt).matrix
        lhs = (u1.conj().T @ g1 @ u1 - g1) / c1.dt
        d2f = (u2.conj().T @ f2 @ u2 - f2) / c2.dt
    elif realization == "commutator":
        lhs = 1j * (c1.h_op.matrix @ g1 - g1 @ c1.h_op.matrix)
        d2f = 1j * (c2.h_op.matrix @ f2 - f2 @ c2.h_op.matrix)
    else:
        raise ValueError(f"unknown realization {realization!r}")
    vmap = np.zeros((c2.d, c1.d), dtype=complex)
    vmap[pair.tick_map, np.arange(c1.d)] = 1.0
    rhs = pair.rate * (vmap.conj().T @ d2f @ vmap)
    diff = (lhs - rhs)[np.ix_(idx, idx)]
    return float(np.linalg.norm(diff, 2))


def substitution_exchange_residual(pair: ClockPair, series: CSeries,
                                   window=None) -> float:
    """Cross-check reading: compare against the scalar chain rule
    a f'(a t1 + b) evaluated spectrally on clock 1."""
    c1 = pair.c1
    if window is None:
        window = unwrapped_window(pair, steps=2)
    idx = validate_window(c1, window)
    u1 = shift_unitary(c1, c1.dt).matrix
    g1 = np.diag(_affine_series_values(series, pair)).astype(complex)
    lhs = (u1.conj().T @ g1 @ u1 - g1) / c1.dt
    rhs = pair.rate * np.diag(
        series.derivative().evaluate(pair.rate * c1.ticks + pair.offset)
    ).astype(complex)
    return float(np.linalg.norm((lhs - rhs)[np.ix_(idx, idx)], 2))

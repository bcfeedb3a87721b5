import numpy as np
import pytest
import scipy.linalg

from qpwc.clock import ClockSpec, build_clock
from qpwc.config import qubit_hamiltonian
from qpwc.errors import CommensurabilityError, NoClockSignal, NoMatch
from qpwc.heisenberg import (
    PauliTriple,
    alpha_independence_residual,
    build_model_universe,
    build_universal,
    clock_readout,
    clock_shift,
    clock_shift_asymmetry,
    coefficient_table,
    descriptor_reconstruction_residual,
    discrete_step_residual,
    expectation_stationarity_residual,
    missing_time_check,
    no_evolution_residual,
    pauli_algebra_residual,
    qubit_period,
    relative_descriptor,
    stationarity_generator,
    tick_probability,
    total_hamiltonian,
    universal_derivative,
)
from qpwc.operators import (
    Operator,
    SpaceSignature,
    StateVector,
    commutator,
    op_norm,
    tensor,
)

TWO_PI = 2 * np.pi
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
QSIG = SpaceSignature((2,))


def std_clock(d=16, T=TWO_PI):
    return build_clock(ClockSpec(d, T))


def std_universe(omega_units=1, d=16, q0=None):
    c = std_clock(d)
    H = qubit_hamiltonian(omega_units * TWO_PI / c.T)
    return build_universal(q0 or PauliTriple.pauli(), H, c)


def plus_state():
    return StateVector(np.array([1, 1]) / np.sqrt(2))


# --- triples -----------------------------------------------------------------


def test_pauli_triple_algebra():
    assert pauli_algebra_residual(PauliTriple.pauli()) < 1e-14


def test_rotated_triple_algebra():
    assert pauli_algebra_residual(PauliTriple.rotated(0.7, 1.3)) < 1e-12


def test_broken_triple_rejected_by_builder():
    sig = QSIG
    broken = PauliTriple(Operator(SX, sig), Operator(SX, sig), Operator(SZ, sig))
    with pytest.raises(ValueError):
        build_universal(broken, qubit_hamiltonian(1.0), std_clock())


# --- construction ---------------------------------------------------------------


def test_zero_hamiltonian_gives_constant_descriptors():
    c = std_clock()
    u = build_universal(PauliTriple.pauli(), qubit_hamiltonian(0.0), c)
    eye_c = np.eye(c.d)
    for comp, pauli in zip(u.triple, (SX, SY, SZ)):
        assert np.allclose(comp.matrix, np.kron(pauli, eye_c), atol=1e-12)


def test_relative_blocks_match_dense_conjugation_oracle():
    # independent oracle: scipy expm conjugation per tick
    u = std_universe(omega_units=1, d=8)
    H = u.qubit_hamiltonian.matrix
    for k in range(8):
        rel = relative_descriptor(u, k)
        for got, q0 in zip(rel, (SX, SY, SZ)):
            uk = scipy.linalg.expm(1j * H * u.clock.ticks[k])
            want = uk @ q0 @ uk.conj().T
            assert np.allclose(got.matrix, want, atol=1e-10)


def test_relative_blocks_trace_trig_curves():
    # omega = 2 pi / T: x component rotates as cos(w t) sx - sin(w t) sy
    u = std_universe(omega_units=1, d=16)
    w = TWO_PI / u.clock.T
    for k in (0, 3, 9):
        t = u.clock.ticks[k]
        want = np.cos(w * t) * SX - np.sin(w * t) * SY
        assert np.allclose(relative_descriptor(u, k).x.matrix, want, atol=1e-10)
        assert np.allclose(relative_descriptor(u, k).z.matrix, SZ, atol=1e-12)


def test_conserved_component_stays_constant():
    u = std_universe(omega_units=2, d=8)
    eye_c = np.eye(8)
    assert np.allclose(u.triple.z.matrix, np.kron(SZ, eye_c), atol=1e-12)


def test_commensurability_enforced_with_offending_frequency():
    c = std_clock()
    with pytest.raises(CommensurabilityError, match="Bohr frequency"):
        build_universal(PauliTriple.pauli(), qubit_hamiltonian(1.37), c)
    # explicit opt-out keeps the violating construction available
    u = build_universal(PauliTriple.pauli(), qubit_hamiltonian(1.37), c,
                        enforce_commensurate=False)
    assert not u.commensurate


def test_universal_triple_satisfies_pauli_algebra():
    u = std_universe()
    assert pauli_algebra_residual(u.triple) < 1e-9


def test_relative_triples_satisfy_pauli_algebra_at_every_tick():
    u = std_universe()
    for k in range(u.clock.d):
        assert pauli_algebra_residual(relative_descriptor(u, k)) < 1e-9


def test_descriptor_reconstruction():
    assert descriptor_reconstruction_residual(std_universe()) < 1e-12


def test_tick_zero_is_initial_condition():
    u = std_universe()
    rel = relative_descriptor(u, 0)
    for got, want in zip(rel, (SX, SY, SZ)):
        assert np.allclose(got.matrix, want, atol=1e-12)


# --- dynamics ---------------------------------------------------------------------


def test_total_hamiltonian_zero_qubit():
    c = std_clock(8)
    u = build_universal(PauliTriple.pauli(), qubit_hamiltonian(0.0), c)
    ham = total_hamiltonian(u)
    assert np.allclose(ham.matrix, -np.kron(np.eye(2), c.h_op.matrix), atol=1e-12)


def test_total_hamiltonian_spectrum_is_difference_set():
    u = std_universe(omega_units=1, d=8)
    got = np.sort(np.linalg.eigvalsh(total_hamiltonian(u).matrix))
    energies = np.linalg.eigvalsh(u.qubit_hamiltonian.matrix)
    want = np.sort((energies[:, None] - u.clock.frequencies[None, :]).reshape(-1))
    assert np.allclose(got, want, atol=1e-9)
    assert np.min(np.abs(got)) < 1e-9  # zero mode exists when commensurate


def test_no_evolution_residual_zero_hamiltonian():
    c = std_clock(8)
    u = build_universal(PauliTriple.pauli(), qubit_hamiltonian(0.0), c)
    assert max(no_evolution_residual(u)) < 1e-12


@pytest.mark.parametrize("omega_units", [1, 2, 3])
@pytest.mark.parametrize("d", [16, 32])
def test_no_evolution_residual_commensurate(omega_units, d):
    u = std_universe(omega_units, d)
    assert max(no_evolution_residual(u)) < 1e-9


def test_no_evolution_residual_incommensurate_large():
    c = std_clock(32)
    u = build_universal(PauliTriple.pauli(), qubit_hamiltonian(1.37), c,
                        enforce_commensurate=False)
    assert max(no_evolution_residual(u)) > 1e-3


def test_folded_generator_matches_tensor_sum_off_the_window_edge():
    # both generators produce the same one-tick translation unitary
    u = std_universe(omega_units=1, d=16)
    ham = total_hamiltonian(u).matrix
    gen = stationarity_generator(u).matrix
    step_t = scipy.linalg.expm(-1j * u.clock.dt * ham)
    step_l = scipy.linalg.expm(-1j * u.clock.dt * gen)
    assert np.linalg.norm(step_t - step_l, 2) < 1e-9


def test_alpha_independence():
    u = std_universe(omega_units=1, d=16)
    assert alpha_independence_residual(u) < 1e-8


def test_discrete_heisenberg_step_exact():
    for omega_units in (1, 2):
        u = std_universe(omega_units, 16)
        assert discrete_step_residual(u) < 1e-12


def test_discrete_step_fails_when_incommensurate():
    c = std_clock(16)
    u = build_universal(PauliTriple.pauli(), qubit_hamiltonian(1.37), c,
                        enforce_commensurate=False)
    assert discrete_step_residual(u) > 1e-3


def test_universal_derivative_zero_for_constant_universe():
    c = std_clock(8)
    u = build_universal(PauliTriple.pauli(), qubit_hamiltonian(0.0), c)
    assert all(op_norm(x) < 1e-12 for x in universal_derivative(u))


def test_universal_derivative_hermitian():
    u = std_universe()
    for x in universal_derivative(u):
        assert op_norm(x - x.dagger) < 1e-10


def test_equation_of_motion_equivalence_both_directions():
    # stationary <=> exact discrete Heisenberg stepping, on a set containing
    # one violating instance
    cases = []
    cases.append(std_universe(omega_units=1, d=16))
    cases.append(std_universe(omega_units=3, d=16))
    c = std_clock(16)
    cases.append(build_universal(PauliTriple.pauli(), qubit_hamiltonian(1.37), c,
                                 enforce_commensurate=False))
    for u in cases:
        stationary = max(no_evolution_residual(u)) < 1e-9
        stepwise = discrete_step_residual(u) < 1e-9
        assert stationary == stepwise


def test_clock_only_shift_is_not_a_symmetry():
    u = std_universe(omega_units=1, d=16)
    assert clock_shift_asymmetry(u) > 1e-3


def test_clock_shift_roundtrip():
    u = std_universe(omega_units=1, d=16)
    back = clock_shift(clock_shift(u, 3 * u.clock.dt), -3 * u.clock.dt)
    assert max(op_norm(a - b) for a, b in zip(back.triple, u.triple)) < 1e-10


# --- readout ------------------------------------------------------------------------


def test_readout_zero_shift():
    u = std_universe(omega_units=1, d=16)
    res = clock_readout(u, u)
    assert res.lam == 0.0
    assert not res.ambiguous


def test_readout_recovers_grid_shifts():
    u = std_universe(omega_units=1, d=16)
    for n in (1, 3, 7, 12):
        shifted = clock_shift(u, n * u.clock.dt)
        res = clock_readout(shifted, u)
        assert res.lam == pytest.approx(n * u.clock.dt, abs=1e-12)
        assert res.residual < 1e-9


def test_readout_period_ambiguity():
    # omega = 2 * 2pi/T: qubit period T/2, shifts only identifiable mod T/2
    d = 16
    u = std_universe(omega_units=2, d=d)
    shift = (d // 2 + 1) * u.clock.dt
    res = clock_readout(clock_shift(u, shift), u)
    assert res.ambiguous
    assert res.period == pytest.approx(u.clock.T / 2, abs=1e-12)
    assert res.lam == pytest.approx(1 * u.clock.dt, abs=1e-12)


def test_readout_no_clock_signal_for_scalar_hamiltonian():
    c = std_clock(8)
    u = build_universal(PauliTriple.pauli(), qubit_hamiltonian(0.0), c)
    with pytest.raises(NoClockSignal):
        clock_readout(u, u)


def test_readout_no_match_for_foreign_target():
    u = std_universe(omega_units=1, d=16, q0=PauliTriple.pauli())
    other = std_universe(omega_units=1, d=16, q0=PauliTriple.rotated(0.9, 0.4))
    with pytest.raises(NoMatch):
        clock_readout(other, u)


def test_qubit_period_detection():
    T = TWO_PI
    assert qubit_period(qubit_hamiltonian(1.0), T) == pytest.approx(T)
    assert qubit_period(qubit_hamiltonian(2.0), T) == pytest.approx(T / 2)
    assert qubit_period(qubit_hamiltonian(0.0), T) is None


# --- model universe and missing times ------------------------------------------------


def test_model_universe_state_is_stationary():
    u = std_universe(omega_units=1, d=16)
    m = build_model_universe(u, plus_state())
    assert m.stationary
    assert m.stationarity_residual < 1e-12


def test_model_universe_uniform_tick_probability():
    u = std_universe(omega_units=1, d=16)
    m = build_model_universe(u, plus_state())
    for k in (0, 5, 15):
        assert tick_probability(m, k) == pytest.approx(1 / 16, abs=1e-12)


def test_expectation_stationarity_for_random_observables():
    u = std_universe(omega_units=1, d=16)
    m = build_model_universe(u, plus_state())
    rng = np.random.default_rng(42)
    obs = []
    for _ in range(10):
        z = rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32))
        obs.append(Operator((z + z.conj().T) / 2, m.hamiltonian.signature))
    assert expectation_stationarity_residual(m, obs) < 1e-8


def test_missing_time_empty_set_trivial():
    u = std_universe(omega_units=1, d=8)
    m = build_model_universe(u, plus_state())
    report = missing_time_check(m, [])
    assert report.descriptor_deviation == 0.0
    assert report.max_tick_probability == 0.0


def test_missing_time_single_tick():
    u = std_universe(omega_units=1, d=8)
    m = build_model_universe(u, plus_state())
    report = missing_time_check(m, [3])
    assert report.descriptor_deviation < 1e-9
    assert report.max_tick_probability < 1e-10
    # the punctured album cannot be an exact eigenstate: reported, not hidden
    assert not report.stationary
    assert report.stationarity_residual > 1e-3


def test_missing_time_all_ticks_impossible():
    u = std_universe(omega_units=1, d=8)
    m = build_model_universe(u, plus_state())
    with pytest.raises(ValueError):
        missing_time_check(m, range(8))


# --- coefficient table ----------------------------------------------------------------


def test_coefficient_table_reconstructs_blocks():
    u = std_universe(omega_units=1, d=8)
    table = coefficient_table(u)
    c = u.clock
    for i in range(3):
        blocks = u.component_blocks(i)
        rebuilt = np.zeros_like(blocks)
        for n, triple in table:
            a_n = list(triple)[i].matrix
            for k in range(c.d):
                rebuilt[k] += a_n * c.ticks[k] ** n
        assert np.max(np.abs(rebuilt - blocks)) < 1e-6


def test_coefficient_table_entries_hermitian_traceless_and_clock_commuting():
    u = std_universe(omega_units=1, d=8)
    eye_q = Operator.identity(u.qubit_hamiltonian.signature)
    t_full = tensor(eye_q, u.clock.t_op)
    h_full = tensor(eye_q, u.clock.h_op)
    for n, triple in coefficient_table(u):
        for a_n in triple:
            assert op_norm(a_n - a_n.dagger) < 1e-10
            assert abs(a_n.trace()) < 1e-6
            # qubit-side coefficients commute with both clock observables
            # identically, whatever the solve noise in a_n itself
            embedded = tensor(a_n, Operator.identity(u.clock.signature))
            assert op_norm(commutator(embedded, t_full)) < 1e-12
            assert op_norm(commutator(embedded, h_full)) < 1e-12


def test_coefficient_table_large_clock_refused():
    u = std_universe(omega_units=1, d=32)
    with pytest.raises(ValueError):
        coefficient_table(u)

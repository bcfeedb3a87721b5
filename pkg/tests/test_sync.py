import numpy as np
import pytest

from qpwc.clock import ClockSpec
from qpwc.errors import CommensurabilityError, NonHermitianError
from qpwc.operators import Operator, StateVector, expectation
from qpwc.qcalculus import CSeries
from qpwc.sync import (
    build_pair,
    build_sync_state,
    constants_commute_defect,
    correlated_state,
    derivative_exchange_residual,
    joint_tick_distribution,
    lockstep_defect,
    sharpness,
    substitution_exchange_residual,
    sync_report,
    unwrapped_window,
)

TWO_PI = 2 * np.pi
SX = np.array([[0, 1], [1, 0]], dtype=complex)


def spec(d=8, T=TWO_PI):
    return ClockSpec(d, T)


def ideal_pair(d=8):
    return build_pair(spec(d), spec(d), 1, 0.0)


# --- pair construction --------------------------------------------------------


def test_symmetric_pair():
    p = ideal_pair()
    assert np.array_equal(p.tick_map, np.arange(8))


def test_rate_two_maps_to_even_ticks():
    p = build_pair(spec(8), spec(16), 2, 0.0)
    # grid-mapping oracle: 2 t_k = 2k dt1 = 4k dt2 on the doubled clock
    assert np.array_equal(p.tick_map, (4 * np.arange(8)) % 16)


def test_offset_shifts_mapping_by_one():
    dt2 = TWO_PI / 8
    p = build_pair(spec(8), spec(8), 1, dt2)
    assert np.array_equal(p.tick_map, (np.arange(8) + 1) % 8)


def test_incommensurate_offset_rejected():
    with pytest.raises(CommensurabilityError):
        build_pair(spec(8), spec(8), 1, 0.3 * TWO_PI / 8)


def test_non_integer_rate_rejected():
    with pytest.raises(ValueError):
        build_pair(spec(8), spec(8), 0, 0.0)


# --- sync states -----------------------------------------------------------------


def test_bell_type_state_for_two_ticks():
    p = ideal_pair(2)
    psi = build_sync_state(p)
    want = np.zeros(4)
    want[0] = want[3] = 1 / np.sqrt(2)
    assert np.allclose(psi.amplitudes, want, atol=1e-14)


def test_sync_state_requires_ideal_parameters():
    p = build_pair(spec(8), spec(8), 1, TWO_PI / 8)
    with pytest.raises(ValueError):
        build_sync_state(p)


def test_difference_observable_sharp_on_ideal_state():
    p = ideal_pair()
    psi = build_sync_state(p)
    diff = p.t2_joint() - p.t1_joint()
    assert abs(expectation(psi, diff)) < 1e-12
    assert abs(sharpness(diff, psi)) < 1e-12


def test_correlation_is_diagonal_uniform():
    p = ideal_pair()
    prob = joint_tick_distribution(p, build_sync_state(p))
    want = np.eye(8) / 8
    assert np.allclose(prob, want, atol=1e-12)


# --- sharpness ---------------------------------------------------------------------


def test_sharpness_zero_on_eigenstate():
    sz = Operator(np.diag([1.0, -1.0]))
    assert sharpness(sz, StateVector([1, 0])) == pytest.approx(0.0, abs=1e-14)


def test_sharpness_one_for_balanced_superposition():
    # |0> is the even superposition of the +-1 eigenstates of sigma_x
    assert sharpness(Operator(SX), StateVector([1, 0])) == pytest.approx(1.0, abs=1e-14)


def test_sharpness_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        sharpness(Operator(np.array([[0, 1], [0, 0]])), StateVector([1, 0]))


def test_sharpness_nonnegative_on_random_inputs():
    rng = np.random.default_rng(41)
    for _ in range(25):
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        a = Operator((m + m.conj().T) / 2)
        v = rng.normal(size=6) + 1j * rng.normal(size=6)
        psi = StateVector(v / np.linalg.norm(v))
        assert sharpness(a, psi) >= -1e-12


# --- reports ------------------------------------------------------------------------


def test_report_on_ideal_state():
    p = ideal_pair()
    report = sync_report(p, build_sync_state(p))
    assert report.rate == 1
    assert report.offset == pytest.approx(0.0, abs=1e-12)
    assert report.rate_sharpness < 1e-10
    assert report.offset_sharpness < 1e-10
    assert report.offset_op_mean == pytest.approx(0.0, abs=1e-12)
    assert report.offset_op_variance == pytest.approx(0.0, abs=1e-12)


def test_report_recovers_offset_by_one():
    dt = TWO_PI / 8
    p = build_pair(spec(8), spec(8), 1, dt)
    report = sync_report(p, correlated_state(p))
    assert report.rate == 1
    assert report.offset == pytest.approx(dt, abs=1e-12)
    assert report.offset_sharpness < 1e-10
    # the plain operator variance sees the wrap, the circular figure does not
    assert report.offset_op_variance > 1e-3


def test_report_recovers_rate_two():
    p = build_pair(spec(8), spec(16), 2, 0.0)
    report = sync_report(p, correlated_state(p))
    assert report.rate == 2
    assert report.offset == pytest.approx(0.0, abs=1e-12)
    assert report.rate_sharpness < 1e-10


def test_report_flags_product_state_unsharp():
    p = ideal_pair()
    amps = np.zeros((8, 8), dtype=complex)
    amps[0, :] = 1 / np.sqrt(8)
    psi = StateVector(amps.reshape(-1), p.signature)
    report = sync_report(p, psi)
    assert report.offset_sharpness > 1e-3


def test_lockstep_evolution_preserves_correlation():
    assert lockstep_defect(ideal_pair()) < 1e-10


def test_constants_commute_with_clock_one_observables():
    p = build_pair(spec(4), spec(8), 2, 0.0)
    assert constants_commute_defect(p) < 1e-12


# --- derivative exchange -----------------------------------------------------------


def test_exchange_constant_symbol_exact_zero():
    p = build_pair(spec(8), spec(16), 2, 0.0)
    assert derivative_exchange_residual(p, CSeries((4.2,))) < 1e-13


def test_exchange_linear_rate_one_exact():
    for b_ticks in (0, 1):
        dt = TWO_PI / 16
        p = build_pair(spec(16), spec(16), 1, b_ticks * dt)
        r = derivative_exchange_residual(p, CSeries.monomial(1))
        assert r < 1e-9


def test_exchange_commutator_realization_rate_one_exact():
    p = build_pair(spec(16), spec(16), 1, 0.0)
    r = derivative_exchange_residual(p, CSeries.monomial(2), realization="commutator")
    assert r < 1e-9


def test_exchange_square_symbol_sweeps_down():
    residuals = []
    for d in (8, 16, 32):
        p = build_pair(spec(d), spec(2 * d), 2, 0.0)
        residuals.append(derivative_exchange_residual(p, CSeries.monomial(2)))
    assert all(b < a for a, b in zip(residuals, residuals[1:]))
    # first-order stencil mismatch: halves with the tick spacing
    assert residuals[-1] / residuals[0] == pytest.approx(0.25, rel=0.1)


def test_substitution_cross_check_sweeps_down():
    residuals = []
    for d in (8, 16, 32):
        p = build_pair(spec(d), spec(2 * d), 2, 0.0)
        residuals.append(substitution_exchange_residual(p, CSeries.monomial(2)))
    assert all(b < a for a, b in zip(residuals, residuals[1:]))


def test_unwrapped_window_respects_margin():
    p = build_pair(spec(8), spec(16), 2, 0.0)
    idx = unwrapped_window(p, steps=2)
    for k in idx:
        assert 2 * p.c1.ticks[k] + 2 * 2 * p.c1.dt < p.c2.T + 1e-12

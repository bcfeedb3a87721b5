"""Analytic functions of the clock's time observable and their derivatives.

A coefficient sequence {a_n} defines both a truncated power series
sum a_n t^n of the time operator and, through the time PVM, the spectral
table sum_k f(t_k) P_k.  Derivatives come in three realizations:

* commutator:        i [h, f(t)]
* spectral:          sum_k f'(t_k) P_k
* finite difference: (U* f(t) U - f(t)) / dt  with U the one-tick shift

The three agree in the large-d limit on smooth states; on a finite clock
they differ by wrap-around terms, so windowed comparisons are first-class
citizens here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clock import Clock, central_window, shift_unitary, validate_window
from .errors import SignatureMismatch
from .operators import Operator, commutator, is_hermitian, op_norm


@dataclass(frozen=True)
class CSeries:
    """Real coefficients {a_n}, lowest order first."""

    coeffs: tuple[float, ...]
    kind: str = "polynomial"  # or "truncated-series"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))
        if not self.coeffs:
            raise ValueError("a coefficient sequence needs at least a_0")
        if not all(np.isfinite(a) for a in self.coeffs):
            raise ValueError("coefficients must be finite")
        if self.kind not in ("polynomial", "truncated-series"):
            raise ValueError(f"unknown series kind {self.kind!r}")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, x: np.ndarray, order: int | None = None) -> np.ndarray:
        """Horner evaluation of the (optionally truncated) series at x."""
        if order is None:
            order = self.order
        if order > self.order:
            raise ValueError(f"order {order} exceeds stored order {self.order}")
        out = np.zeros_like(np.asarray(x, dtype=float))
        for a in reversed(self.coeffs[: order + 1]):
            out = out * x + a
        return out

    def derivative(self) -> "CSeries":
        """Coefficient rule: {a_n} -> {n a_n} shifted down one order."""
        if self.order == 0:
            return CSeries((0.0,), self.kind)
        return CSeries(tuple(n * a for n, a in enumerate(self.coeffs))[1:], self.kind)

    def serialize(self) -> str:
        return ",".join(repr(a) for a in self.coeffs)

    @classmethod
    def parse(cls, text: str, kind: str = "polynomial") -> "CSeries":
        return cls(tuple(float(p) for p in text.split(",")), kind)

    @classmethod
    def monomial(cls, n: int) -> "CSeries":
        return cls((0.0,) * n + (1.0,))


def combine(a: float, f: CSeries, b: float, g: CSeries) -> CSeries:
    """a f + b g, padded to the longer order."""
    n = max(f.order, g.order) + 1
    fa = list(f.coeffs) + [0.0] * (n - len(f.coeffs))
    ga = list(g.coeffs) + [0.0] * (n - len(g.coeffs))
    kind = "polynomial" if f.kind == g.kind == "polynomial" else "truncated-series"
    return CSeries(tuple(a * x + b * y for x, y in zip(fa, ga)), kind)


@dataclass(frozen=True)
class QFunction:
    """An operator-valued function of the clock time, with its symbol."""

    op: Operator
    source: CSeries
    clock: Clock = field(repr=False)

    def __post_init__(self):
        if not is_hermitian(self.op):
            raise ValueError("a function of the time observable must be Hermitian")


def eval_spectral(series: CSeries, clock: Clock) -> QFunction:
    """sum_k f(t_k) P_k.  Exact spectral mapping: Sp(f(t)) = {f(t_k)}."""
    values = series.evaluate(clock.ticks)
    # the tick projectors are the standard basis, so the PVM sum is diagonal
    return QFunction(Operator(np.diag(values), clock.signature), series, clock)


def eval_series(series: CSeries, clock: Clock, order: int | None = None) -> QFunction:
    """Truncated power series by raw matrix powers of the time observable."""
    if order is None:
        order = series.order
    if order > series.order:
        raise ValueError(f"order {order} exceeds stored coefficients ({series.order})")
    d = clock.d
    acc = np.zeros((d, d), dtype=complex)
    power = np.eye(d, dtype=complex)
    t = clock.t_op.matrix
    for n in range(order + 1):
        acc += series.coeffs[n] * power
        power = power @ t
    return QFunction(Operator(acc, clock.signature), series, clock)


def partial_sum_convergence(series: CSeries, clock: Clock, subspace) -> list[float]:
    """Restricted-norm tails ||(S - S_k)|_W|| for k = 0..order.

    S is the full spectral evaluation; the norm is the operator norm on the
    span of the subspace ticks (for these diagonal operators, the max of
    |f - f_k| over the subspace ticks).
    """
    idx = validate_window(clock, subspace)
    full = series.evaluate(clock.ticks)
    return [
        float(np.max(np.abs((full - series.evaluate(clock.ticks, order=k))[idx])))
        for k in range(series.order + 1)
    ]


def partial_sum_bound_violation(series: CSeries, clock: Clock, subspace) -> float:
    """Largest violation of ||S_k|_W|| >= |f_k(t)| over subspace ticks and k.

    The left side is the restricted norm of the partial sum built by raw
    matrix powers; the right side is the scalar Horner value at each tick.
    Nonpositive up to rounding: the restricted norm of a diagonal operator
    majorizes every restricted eigenvalue.
    """
    idx = validate_window(clock, subspace)
    worst = -np.inf
    for k in range(series.order + 1):
        lhs = windowed_norm(eval_series(series, clock, order=k).op, clock, subspace)
        rhs = float(np.max(np.abs(series.evaluate(clock.ticks, order=k)[idx])))
        worst = max(worst, rhs - lhs)
    return float(worst)


def deriv_commutator(f: QFunction, clock: Clock) -> Operator:
    """i [h, f(t)]."""
    if f.clock.spec != clock.spec:
        raise SignatureMismatch("function was built on a different clock")
    return 1j * commutator(clock.h_op, f.op)


def deriv_spectral(series: CSeries, clock: Clock) -> Operator:
    """sum_k f'(t_k) P_k with the symbol differentiated exactly."""
    return eval_spectral(series.derivative(), clock).op


def deriv_finite_difference(series: CSeries, clock: Clock) -> Operator:
    """One-tick forward difference, transported by the clock's own shift.

    (U* f(t) U - f(t)) / dt with U = shift_unitary(clock, dt): the smallest
    shift the clock itself realizes exactly.  Exact for linear symbols away
    from the wrap tick.
    """
    f = eval_spectral(series, clock)
    u = shift_unitary(clock, clock.dt)
    m = (u.dagger @ f.op @ u - f.op).matrix / clock.dt
    return Operator(m, clock.signature)


DERIVATIVE_REALIZATIONS = ("commutator", "spectral", "finite_difference")


def derivative(series: CSeries, clock: Clock, realization: str) -> Operator:
    if realization == "commutator":
        return deriv_commutator(eval_spectral(series, clock), clock)
    if realization == "spectral":
        return deriv_spectral(series, clock)
    if realization == "finite_difference":
        return deriv_finite_difference(series, clock)
    raise ValueError(f"unknown derivative realization {realization!r}")


def linearity_check(f: CSeries, g: CSeries, a: float, b: float, clock: Clock) -> dict[str, float]:
    """||D(a f + b g) - (a D f + b D g)|| for each derivative realization."""
    combo = combine(a, f, b, g)
    out = {}
    for name in DERIVATIVE_REALIZATIONS:
        direct = derivative(combo, clock, name)
        split = a * derivative(f, clock, name) + b * derivative(g, clock, name)
        out[name] = op_norm(direct - split)
    return out


def windowed_norm(a: Operator, clock: Clock, window) -> float:
    idx = validate_window(clock, window)
    return float(np.linalg.norm(a.matrix[np.ix_(idx, idx)], 2))


def derivative_agreement(series: CSeries, clock: Clock, window=None,
                         realizations=DERIVATIVE_REALIZATIONS) -> float:
    """Worst windowed pairwise disagreement among derivative realizations."""
    if window is None:
        window = central_window(clock)
    ops = [derivative(series, clock, name) for name in realizations]
    worst = 0.0
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            worst = max(worst, windowed_norm(ops[i] - ops[j], clock, window))
    return worst


def derivative_agreement_on_state(series: CSeries, clock: Clock, window=None,
                                  realizations=DERIVATIVE_REALIZATIONS) -> float:
    """Worst pairwise disagreement applied to a smooth wavepacket.

    Unlike the projected operator norm, this metric converges as d grows:
    the nonlocal commutator tails only act on the wavepacket's (tiny) wrap
    and frequency-edge content.
    """
    if window is None:
        window = central_window(clock)
    idx = validate_window(clock, window)
    d = clock.d
    ks = np.arange(d)
    # sigma ~ sqrt(d): both the wrap-tick and frequency-edge tails then decay
    sigma = max(2.0, np.sqrt(d))
    g = np.exp(-((ks - float(np.mean(idx))) ** 2) / (2 * sigma**2)).astype(complex)
    g /= np.linalg.norm(g)
    ops = [derivative(series, clock, name) for name in realizations]
    worst = 0.0
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            worst = max(worst, float(np.linalg.norm((ops[i].matrix - ops[j].matrix) @ g)))
    return worst


def smooth_test_set(T: float) -> list[CSeries]:
    """The fixed smooth symbols used by agreement sweeps: t, t^2, sin-like."""
    w0 = 2 * np.pi / T / 2
    sin_coeffs = [0.0] * 10
    fact = 1.0
    for n in range(1, 10):
        fact *= n
        if n % 2 == 1:
            sin_coeffs[n] = (-1.0) ** ((n - 1) // 2) * w0**n / fact
    return [
        CSeries.monomial(1),
        CSeries.monomial(2),
        CSeries(tuple(sin_coeffs), kind="truncated-series"),
    ]

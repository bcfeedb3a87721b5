"""qpwc: finite cyclic quantum clocks and relational-time verification.

A numerical laboratory for operator-valued time: dense operator algebra,
discrete-Fourier-conjugate clocks, functions of the time observable with
three derivative realizations, a qubit-clock model universe in both the
descriptor and state-vector pictures, two-clock synchronization, and a
deterministic verification CLI.
"""

from .clock import Clock, ClockSpec, build_clock, central_window, shift_unitary
from .errors import (
    AsymmetricGridError,
    CommensurabilityError,
    NoClockSignal,
    NoMatch,
    NonHermitianError,
    QpwcError,
    SignatureMismatch,
    UndefinedRelativeState,
    UnknownCheck,
)
from .heisenberg import (
    ModelUniverse,
    PauliTriple,
    UniversalDescriptor,
    build_model_universe,
    build_universal,
    clock_readout,
    clock_shift,
    missing_time_check,
    no_evolution_residual,
    relative_descriptor,
    stationarity_generator,
    total_hamiltonian,
)
from .operators import (
    Operator,
    SpaceSignature,
    SpectralDecomposition,
    StateVector,
    commutator,
    eig_hermitian,
    expectation,
    mat_exp,
    op_norm,
    partial_trace,
    tensor,
    tensor_state,
)
from .qcalculus import (
    CSeries,
    QFunction,
    deriv_commutator,
    deriv_finite_difference,
    deriv_spectral,
    eval_series,
    eval_spectral,
    linearity_check,
    partial_sum_convergence,
)
from .schrodinger import (
    HistoryState,
    SchrodingerModel,
    build_history_state,
    parity_V,
    picture_equivalence_check,
    relative_state,
    schrodinger_residual,
    stationarity_residual,
)
from .sync import (
    ClockPair,
    build_pair,
    build_sync_state,
    correlated_state,
    derivative_exchange_residual,
    sharpness,
    sync_report,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

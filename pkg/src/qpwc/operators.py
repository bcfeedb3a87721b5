"""Dense operator algebra on tensor products of finite Hilbert spaces.

Everything is an explicit complex matrix tagged with the ordered list of
tensor-factor dimensions it acts on.  Values are immutable after
construction (the underlying arrays are marked read-only), so they can be
shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable

import numpy as np
import scipy.linalg

from .errors import NonHermitianError, SignatureMismatch

HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class SpaceSignature:
    """Ordered factor dimensions of a tensor-product space."""

    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(f) for f in self.factors))
        if not self.factors:
            raise ValueError("signature needs at least one factor")
        if any(f < 1 for f in self.factors):
            raise ValueError(f"factor dimensions must be >= 1, got {self.factors}")

    @property
    def dim(self) -> int:
        return prod(self.factors)

    def tensor(self, other: "SpaceSignature") -> "SpaceSignature":
        return SpaceSignature(self.factors + other.factors)

    def __str__(self) -> str:
        return "x".join(str(f) for f in self.factors)


def _as_square_matrix(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"operator matrix must be square, got shape {m.shape}")
    return m


class Operator:
    """A dense complex square matrix on a signed tensor-product space."""

    __slots__ = ("matrix", "signature")

    def __init__(self, matrix, signature: SpaceSignature | None = None):
        m = _as_square_matrix(matrix)
        if signature is None:
            signature = SpaceSignature((m.shape[0],))
        if signature.dim != m.shape[0]:
            raise SignatureMismatch(
                f"matrix side {m.shape[0]} != signature dim {signature.dim}"
            )
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "signature", signature)

    def __setattr__(self, name, value):
        raise AttributeError("Operator is immutable")

    @classmethod
    def identity(cls, signature: SpaceSignature) -> "Operator":
        return cls(np.eye(signature.dim), signature)

    @classmethod
    def zero(cls, signature: SpaceSignature) -> "Operator":
        return cls(np.zeros((signature.dim, signature.dim)), signature)

    @property
    def dim(self) -> int:
        return self.signature.dim

    @property
    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.signature)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def _check_same_space(self, other: "Operator"):
        if self.signature != other.signature:
            raise SignatureMismatch(
                f"operands on {self.signature} vs {other.signature}"
            )

    def __add__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.matrix + other.matrix, self.signature)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.matrix - other.matrix, self.signature)

    def __neg__(self) -> "Operator":
        return Operator(-self.matrix, self.signature)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.matrix * complex(scalar), self.signature)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.matrix @ other.matrix, self.signature)

    def __repr__(self) -> str:
        return f"Operator(dim={self.dim}, signature={self.signature})"


class StateVector:
    """A complex vector on a signed tensor-product space."""

    __slots__ = ("amplitudes", "signature", "normalized")

    def __init__(self, amplitudes, signature: SpaceSignature | None = None,
                 normalized: bool = True):
        v = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if signature is None:
            signature = SpaceSignature((v.size,))
        if signature.dim != v.size:
            raise SignatureMismatch(
                f"vector length {v.size} != signature dim {signature.dim}"
            )
        if normalized and abs(np.vdot(v, v).real - 1.0) > 1e-12:
            raise ValueError("state flagged normalized but <v|v> != 1 within 1e-12")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "normalized", bool(normalized))

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable")

    @classmethod
    def basis(cls, signature: SpaceSignature, index: int) -> "StateVector":
        v = np.zeros(signature.dim)
        v[index] = 1.0
        return cls(v, signature)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "StateVector") -> complex:
        if self.signature != other.signature:
            raise SignatureMismatch("inner product across different spaces")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(dim={self.signature.dim}, signature={self.signature})"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues with their (possibly degenerate) spectral projectors.

    Pairs are sorted ascending by eigenvalue; eigenvalues closer than the
    merging tolerance used at construction share one projector.  The
    projector set is a projection-valued measure: mutually orthogonal and
    summing to the identity.
    """

    eigenpairs: tuple[tuple[float, Operator], ...]

    @property
    def eigenvalues(self) -> list[float]:
        return [ev for ev, _ in self.eigenpairs]

    @property
    def projectors(self) -> list[Operator]:
        return [p for _, p in self.eigenpairs]

    def reconstruct(self) -> Operator:
        sig = self.eigenpairs[0][1].signature
        m = np.zeros((sig.dim, sig.dim), dtype=complex)
        for ev, p in self.eigenpairs:
            m += ev * p.matrix
        return Operator(m, sig)


def tensor(a: Operator, b: Operator) -> Operator:
    """Kronecker product; the signature is the concatenated factor list."""
    return Operator(np.kron(a.matrix, b.matrix), a.signature.tensor(b.signature))


def tensor_state(a: StateVector, b: StateVector) -> StateVector:
    return StateVector(
        np.kron(a.amplitudes, b.amplitudes),
        a.signature.tensor(b.signature),
        normalized=a.normalized and b.normalized,
    )


def commutator(a: Operator, b: Operator) -> Operator:
    """ab - ba.  Bilinear and antisymmetric by construction."""
    a._check_same_space(b)
    return Operator(a.matrix @ b.matrix - b.matrix @ a.matrix, a.signature)


def op_norm(a: Operator | np.ndarray) -> float:
    """Largest singular value (the spectral norm).

    For Hermitian positive operators this equals the supremum of the
    quadratic form over unit vectors; for everything else the quadratic-form
    supremum is not a norm, so the spectral norm is used throughout.
    """
    m = a.matrix if isinstance(a, Operator) else np.asarray(a)
    return float(np.linalg.norm(m, 2))


def hermiticity_defect(a: Operator) -> float:
    return float(np.max(np.abs(a.matrix - a.matrix.conj().T)))


def is_hermitian(a: Operator, tol: float = HERMITICITY_TOL) -> bool:
    scale = max(1.0, float(np.max(np.abs(a.matrix))))
    return hermiticity_defect(a) <= tol * scale


def eig_hermitian(a: Operator, degeneracy_tol: float | None = None) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian operator.

    Eigenvalues within ``degeneracy_tol`` of each other (chained) are merged
    into a single projector.  The default tolerance is 1e-8 * op_norm(a),
    which separates distinct clock ticks at all supported dimensions while
    absorbing floating-point splitting.
    """
    if not is_hermitian(a):
        raise NonHermitianError(
            f"eig_hermitian needs a Hermitian input, defect {hermiticity_defect(a):.3e}"
        )
    m = (a.matrix + a.matrix.conj().T) / 2.0
    w, v = np.linalg.eigh(m)
    if degeneracy_tol is None:
        degeneracy_tol = 1e-8 * max(np.max(np.abs(w)), 1e-300)
    pairs = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > degeneracy_tol:
            block = v[:, start:i]
            proj = Operator(block @ block.conj().T, a.signature)
            pairs.append((float(np.mean(w[start:i])), proj))
            start = i
    return SpectralDecomposition(tuple(pairs))


def mat_exp(a: Operator, s: complex = 1.0) -> Operator:
    """exp(s * a).

    Hermitian inputs go through the eigendecomposition, which keeps
    exp(i * real * a) unitary to machine precision; anything else falls back
    to the scaling-and-squaring expm.
    """
    if is_hermitian(a):
        m = (a.matrix + a.matrix.conj().T) / 2.0
        w, v = np.linalg.eigh(m)
        return Operator((v * np.exp(complex(s) * w)) @ v.conj().T, a.signature)
    return Operator(scipy.linalg.expm(complex(s) * a.matrix), a.signature)


def partial_trace(a: Operator, keep: Iterable[int]) -> Operator:
    """Trace out every tensor factor not listed in ``keep``.

    Kept factors stay in their original order.  The full trace is preserved:
    trace(partial_trace(a, keep)) == trace(a).
    """
    dims = a.signature.factors
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one factor")
    if keep[0] < 0 or keep[-1] >= n:
        raise IndexError(f"factor index out of range for signature {a.signature}")
    arr = a.matrix.reshape(dims + dims)
    row = list(range(n))
    col = [n + i if i in keep else i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(arr, row + col, out)
    new_sig = SpaceSignature(tuple(dims[i] for i in keep))
    return Operator(reduced.reshape(new_sig.dim, new_sig.dim), new_sig)


def expectation(psi: StateVector, a: Operator) -> complex:
    """<psi| a |psi>.  Real to within 1e-12 for Hermitian a."""
    if psi.signature != a.signature:
        raise SignatureMismatch(
            f"state on {psi.signature}, operator on {a.signature}"
        )
    return complex(np.vdot(psi.amplitudes, a.matrix @ psi.amplitudes))


def variance(psi: StateVector, a: Operator) -> float:
    """<a^2> - <a>^2 for Hermitian a (the sharpness defect)."""
    if not is_hermitian(a):
        raise NonHermitianError("variance is defined for Hermitian operators")
    mean = expectation(psi, a).real
    second = expectation(psi, a @ a).real
    return second - mean * mean


def canonical_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rephase so the first amplitude above tol is real and positive."""
    v = np.asarray(v, dtype=complex)
    for x in v:
        if abs(x) > tol:
            return v * (abs(x) / x)
    return v.copy()


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """min over global phases of || u - e^{i phi} v ||."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    ov = np.vdot(v, u)
    if abs(ov) < 1e-300:
        return float(np.sqrt(np.vdot(u, u).real + np.vdot(v, v).real))
    phase = ov / abs(ov)
    return float(np.linalg.norm(u - phase * v))

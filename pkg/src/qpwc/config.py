"""Flat key=value configs and builders for clocks, universes, and pairs.

Recognized keys:

    d, T, t0            clock dimension, period, tick origin
    qubit_omega         qubit splitting in units of 2*pi/T (integer for a
                        commensurate universe)
    q0                  'pauli' or 'rotated:<theta>,<phi>'
    psi0                'plus' (default), 'minus', 'zero', 'one'
    d2, T2, t02         second clock of a synchronization pair
    rate, offset        pair rate (integer) and offset (time units)
    tol.<check_id>      per-check tolerance override for the verify suite
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .clock import Clock, ClockSpec, build_clock
from .heisenberg import PauliTriple, UniversalDescriptor, build_universal
from .operators import Operator, SpaceSignature, StateVector
from .sync import ClockPair, build_pair


def parse_config(text: str) -> dict[str, str]:
    """Parse 'key=value' lines; '#' starts a comment; blanks ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno} is not key=value: {raw!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def load_config(path) -> dict[str, str]:
    return parse_config(Path(path).read_text())


def _get(cfg: dict[str, str], key: str, cast, default=None):
    if key not in cfg:
        if default is None:
            raise KeyError(f"config is missing required key {key!r}")
        return default
    return cast(cfg[key])


def parse_q0(spec: str) -> PauliTriple:
    if spec == "pauli":
        return PauliTriple.pauli()
    if spec.startswith("rotated:"):
        parts = spec[len("rotated:"):].split(",")
        if len(parts) != 2:
            raise ValueError(f"rotated q0 needs 'rotated:<theta>,<phi>', got {spec!r}")
        return PauliTriple.rotated(float(parts[0]), float(parts[1]))
    raise ValueError(f"unknown q0 spec {spec!r}")


def parse_psi0(name: str) -> StateVector:
    sig = SpaceSignature((2,))
    table = {
        "plus": np.array([1, 1]) / np.sqrt(2),
        "minus": np.array([1, -1]) / np.sqrt(2),
        "zero": np.array([1, 0]),
        "one": np.array([0, 1]),
    }
    if name not in table:
        raise ValueError(f"unknown psi0 spec {name!r}")
    return StateVector(table[name], sig)


def qubit_hamiltonian(omega: float) -> Operator:
    """H = (omega/2) (sigma_z + 1), with energies {0, omega}.

    The c-number shift puts both energies on the clock's frequency lattice
    whenever omega does sit there, which makes the album states exact
    eigenvectors of the total Hamiltonian; it changes no commutator and no
    conditioned evolution.
    """
    m = (omega / 2) * np.array([[2, 0], [0, 0]], dtype=complex)
    return Operator(m, SpaceSignature((2,)))


@dataclass(frozen=True)
class UniverseBundle:
    """Everything a verification run needs, built once from a config."""

    clock: Clock = field(repr=False)
    omega: float
    qubit_h: Operator
    q0: PauliTriple
    psi0: StateVector
    descriptor: UniversalDescriptor = field(repr=False)


def clock_spec_from_config(cfg: dict[str, str]) -> ClockSpec:
    return ClockSpec(
        _get(cfg, "d", int),
        _get(cfg, "T", float),
        _get(cfg, "t0", float, 0.0),
    )


def universe_from_config(cfg: dict[str, str], d: int | None = None) -> UniverseBundle:
    spec = clock_spec_from_config(cfg)
    if d is not None:
        spec = ClockSpec(d, spec.T, spec.t0)
    clock = build_clock(spec)
    omega_units = _get(cfg, "qubit_omega", float, 1.0)
    omega = omega_units * 2 * np.pi / spec.T
    qh = qubit_hamiltonian(omega)
    q0 = parse_q0(_get(cfg, "q0", str, "pauli"))
    psi0 = parse_psi0(_get(cfg, "psi0", str, "plus"))
    commensurate = abs(omega_units - round(omega_units)) < 1e-9
    descriptor = build_universal(q0, qh, clock, enforce_commensurate=commensurate)
    return UniverseBundle(clock=clock, omega=omega, qubit_h=qh, q0=q0,
                          psi0=psi0, descriptor=descriptor)


def pair_from_config(cfg: dict[str, str], d: int | None = None) -> ClockPair:
    base = clock_spec_from_config(cfg)
    d2 = _get(cfg, "d2", int, base.d)
    spec1 = base if d is None else ClockSpec(d, base.T, base.t0)
    spec2 = ClockSpec(d2, _get(cfg, "T2", float, base.T), _get(cfg, "t02", float, base.t0))
    if d is not None:
        # scale the partner clock with the swept dimension
        spec2 = ClockSpec(max(2, int(round(d * d2 / base.d))), spec2.T, spec2.t0)
    return build_pair(spec1, spec2,
                      _get(cfg, "rate", int, 1),
                      _get(cfg, "offset", float, 0.0))


def tolerance_overrides(cfg: dict[str, str]) -> dict[str, float]:
    return {
        key[len("tol."):]: float(value)
        for key, value in cfg.items()
        if key.startswith("tol.")
    }


DEFAULT_CONFIG = """\
# default verification universe
d=32
T=6.283185307179586
t0=0.0
qubit_omega=1
q0=pauli
psi0=plus
# synchronization pair (rate-2 partner clock on the same period)
d2=64
T2=6.283185307179586
t02=0.0
rate=2
offset=0.0
"""

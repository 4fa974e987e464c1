"""Gibbs states, energy functionals, and the thermalizing channel.

A qubit with gap ``omega`` has Hamiltonian H = diag(-omega/2, +omega/2), i.e.
|0> is the ground state.  Contact with a bath at inverse temperature ``beta``
is modeled at the infinite-interaction-time limit: a four-operator Kraus
channel whose output is the Gibbs state diag(p, 1-p) for *any* input, with
ground population p = (1 + tanh(beta*omega/2))/2.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .qcore import as_complex, single_qubit_state


@dataclass(frozen=True)
class QubitSpec:
    """Energy gap of one qubit (dimensionless units, hbar = 1)."""

    omega: float

    def __post_init__(self):
        if not (self.omega > 0 and np.isfinite(self.omega)):
            raise ValidationError(f"qubit gap must be positive, got {self.omega!r}")


@dataclass(frozen=True)
class BathSpec:
    """Inverse temperature of one bath (dimensionless units, k_B = 1)."""

    beta: float

    def __post_init__(self):
        if not (self.beta > 0 and np.isfinite(self.beta)):
            raise ValidationError(f"inverse temperature must be positive, got {self.beta!r}")


def _omega(qubit):
    return qubit.omega if isinstance(qubit, QubitSpec) else QubitSpec(float(qubit)).omega


def _beta(bath):
    return bath.beta if isinstance(bath, BathSpec) else BathSpec(float(bath)).beta


def gibbs_population(qubit, bath):
    """Ground-state population p = (1 + tanh(beta*omega/2))/2 in (1/2, 1)."""
    return 0.5 * (1.0 + np.tanh(0.5 * _beta(bath) * _omega(qubit)))


def gibbs_state(qubit, bath):
    """Thermal state diag(p, 1-p) with p = gibbs_population(qubit, bath)."""
    p = gibbs_population(qubit, bath)
    return np.diag([p, 1.0 - p]).astype(np.complex128)


def hamiltonian(qubit):
    """H = diag(-omega/2, +omega/2)."""
    w = _omega(qubit)
    return np.diag([-0.5 * w, 0.5 * w]).astype(np.complex128)


def energy(rho, qubit):
    """Mean energy Tr(rho H) of a single-qubit state."""
    arr = single_qubit_state(rho)
    w = _omega(qubit)
    return float(0.5 * w * (arr[1, 1].real - arr[0, 0].real))


@dataclass(frozen=True)
class KrausChannel:
    """A finite list of same-shape Kraus operators with sum_k K†K = I."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(as_complex(k) for k in self.operators)
        if not ops:
            raise ValidationError("channel needs at least one Kraus operator")
        d = ops[0].shape
        if any(k.shape != d for k in ops) or d[0] != d[1]:
            raise ValidationError("Kraus operators must share one square shape")
        total = sum(k.conj().T @ k for k in ops)
        err = np.max(np.abs(total - np.eye(d[0])))
        if err > 1e-12:
            raise ValidationError(f"completeness sum deviates from identity by {err:.3e}")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self):
        return self.operators[0].shape[0]


def thermalizing_channel(qubit, bath):
    """Infinite-time thermalization toward gibbs_state(qubit, bath).

    The four operators move and keep population with weights p and 1-p; the
    channel's output is exactly diag(p, 1-p) regardless of the input state,
    with all coherences erased.
    """
    p = gibbs_population(qubit, bath)
    sp, sq = np.sqrt(p), np.sqrt(1.0 - p)
    k1 = np.array([[sp, 0], [0, 0]], dtype=np.complex128)
    k2 = np.array([[0, sp], [0, 0]], dtype=np.complex128)
    k3 = np.array([[0, 0], [0, sq]], dtype=np.complex128)
    k4 = np.array([[0, 0], [sq, 0]], dtype=np.complex128)
    return KrausChannel((k1, k2, k3, k4))


def apply_channel(channel, rho):
    """Kraus-sum evaluation sum_k K rho K†; trace is preserved to 1e-10."""
    arr = as_complex(rho)
    if arr.shape != (channel.dim, channel.dim):
        raise ValidationError(
            f"state dimension {arr.shape} does not match channel dimension {channel.dim}"
        )
    out = np.zeros_like(arr)
    for k in channel.operators:
        out += k @ arr @ k.conj().T
    drift = abs(out.trace() - arr.trace())
    if drift > 1e-10:
        raise ValidationError(f"channel failed to preserve trace (drift {drift:.3e})")
    return out

"""Path-polarization optics simulation of the engine hardware.

Encoding: a qubit with gap omega = 0.02*(d/8) lives on two beam-displacer
rails separated by d pixels of a 512-row spatial grid, with |0> = horizontal
polarization at row -d/2 and |1> = vertical polarization at row +d/2.  A
hologram row at height z carries a phase phi(z) that sets the local
amplitude-transfer of the thermalizing step; rows come in 4-pixel bands, one
band per 0.02 step of omega, antisymmetric between the two halves of the
grid: phi(-z) = phi(z) - pi.

Two half-wave-plate settings realize the four Kraus operators of the
thermalizing channel as two setting branches (population-keeping cosine pair
and population-moving sine pair); summing both settings after path
decoherence reproduces the abstract channel exactly.

Projective measurements are realized photon-pair-wise: each basis vector is
Schmidt-decomposed into local unitaries and a bias filter around a
polarization-singlet projection with efficiency eta = ((a/b)^2 + 1)/2.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .qcore import as_complex, single_qubit_state
from .thermo import BathSpec, gibbs_population

GRID_ROWS = 512
Z_MAX = GRID_ROWS // 2  # rows z = -256..-1, 1..256 (no row 0)
OMEGA_STEP = 0.02
PIXELS_PER_STEP = 8
OMEGA_MAX = OMEGA_STEP * (GRID_ROWS // PIXELS_PER_STEP)

_SINGLET = np.zeros((4, 4), dtype=np.complex128)
_SINGLET[1, 1] = _SINGLET[2, 2] = 0.5
_SINGLET[1, 2] = _SINGLET[2, 1] = -0.5

_SWAP = np.zeros((4, 4), dtype=np.complex128)
_SWAP[0, 0] = _SWAP[1, 2] = _SWAP[2, 1] = _SWAP[3, 3] = 1.0


def omega_of_d(d):
    """Gap encoded by a rail separation of d pixels: omega = 0.02*(d/8)."""
    if int(d) != d or d <= 0 or d % PIXELS_PER_STEP != 0 or d > GRID_ROWS:
        raise ValidationError(
            f"rail separation must be a positive multiple of {PIXELS_PER_STEP} "
            f"up to {GRID_ROWS}, got {d!r}"
        )
    return OMEGA_STEP * (int(d) // PIXELS_PER_STEP)


def d_of_omega(omega):
    """Rail separation for an on-grid gap (multiple of 0.02, at most 1.28)."""
    k = omega / OMEGA_STEP
    ki = int(round(k))
    if abs(k - ki) > 1e-9 or ki < 1 or ki > GRID_ROWS // PIXELS_PER_STEP:
        raise ValidationError(
            f"gap {omega!r} is not on the {OMEGA_STEP} grid up to {OMEGA_MAX}"
        )
    return ki * PIXELS_PER_STEP


def omega_of_z(z):
    """Gap of the 4-pixel band containing grid row z (rows carry their band value)."""
    if int(z) != z or z == 0 or abs(z) > Z_MAX:
        raise ValidationError(f"row must be a nonzero integer within +-{Z_MAX}, got {z!r}")
    return OMEGA_STEP * ((abs(int(z)) + 3) // 4)


@dataclass(frozen=True, eq=False)
class Hologram:
    """Per-row phase profile phi(z) encoding one bath temperature.

    ``phases`` holds the 512 rows in ascending z order (-256..-1, 1..256).
    The upper half satisfies phi(z) = 2*arcsin(sqrt(p(omega(z), beta))) in
    [pi/2, pi]; the lower half is the antisymmetric partner phi(-z) = phi(z) - pi.
    """

    beta: float
    phases: np.ndarray

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=np.float64)
        if phases.shape != (GRID_ROWS,):
            raise ValidationError(f"hologram needs {GRID_ROWS} rows, got {phases.shape}")
        upper = phases[Z_MAX:]
        lower = phases[:Z_MAX]
        if np.any(upper < 0.5 * np.pi - 1e-12) or np.any(upper > np.pi + 1e-12):
            raise ValidationError("upper-half phases must lie in [pi/2, pi]")
        if np.max(np.abs(lower[::-1] - (upper - np.pi))) > 1e-12:
            raise ValidationError("hologram halves are not antisymmetric partners")
        phases = phases.copy()
        phases.setflags(write=False)
        object.__setattr__(self, "phases", phases)

    def phase_at(self, z):
        """Phase of row z (z in -256..-1, 1..256)."""
        if int(z) != z or z == 0 or abs(z) > Z_MAX:
            raise ValidationError(f"row must be a nonzero integer within +-{Z_MAX}, got {z!r}")
        z = int(z)
        idx = Z_MAX + z - 1 if z > 0 else Z_MAX + z
        return float(self.phases[idx])

    def rows(self):
        """All (z, phase) pairs in ascending z order."""
        zs = list(range(-Z_MAX, 0)) + list(range(1, Z_MAX + 1))
        return list(zip(zs, self.phases.tolist()))


def solve_hologram(bath):
    """Phase profile realizing thermalization toward inverse temperature beta.

    Row z > 0 encodes sin^2(phi/2) = p(omega(z), beta), i.e.
    phi = 2*arcsin(sqrt(p)); the mirrored row carries phi - pi.
    """
    beta = bath.beta if isinstance(bath, BathSpec) else BathSpec(float(bath)).beta
    upper = np.empty(Z_MAX)
    for z in range(1, Z_MAX + 1):
        p = gibbs_population(omega_of_z(z), beta)
        upper[z - 1] = 2.0 * np.arcsin(np.sqrt(p))
    phases = np.concatenate([(upper - np.pi)[::-1], upper])
    return Hologram(beta=beta, phases=phases)


@dataclass(frozen=True)
class PathPolState:
    """Single-photon amplitudes over (grid row, polarization) modes.

    Keys are (z, "H"|"V") with z a nonzero row within the grid; the total
    squared norm may be below 1 (post-selection losses are allowed).
    """

    amplitudes: dict

    def __post_init__(self):
        amps = {}
        for key, value in self.amplitudes.items():
            z, pol = key
            if int(z) != z or z == 0 or abs(z) > Z_MAX:
                raise ValidationError(f"row {z!r} is off the +-{Z_MAX} grid")
            if pol not in ("H", "V"):
                raise ValidationError(f"polarization must be 'H' or 'V', got {pol!r}")
            value = complex(value)
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValidationError("non-finite amplitude")
            amps[(int(z), pol)] = value
        total = sum(abs(v) ** 2 for v in amps.values())
        if total > 1.0 + 1e-12:
            raise ValidationError(f"squared norm {total:.6f} exceeds 1")
        object.__setattr__(self, "amplitudes", amps)

    def norm_squared(self):
        return sum(abs(v) ** 2 for v in self.amplitudes.values())


def encode_qubit(vec, d):
    """Put amplitude vec[0] on (-d/2, H) and vec[1] on (+d/2, V)."""
    omega_of_d(d)  # validates the separation
    vec = np.asarray(vec, dtype=np.complex128)
    if vec.shape != (2,):
        raise ValidationError(f"expected a length-2 amplitude vector, got shape {vec.shape}")
    half = int(d) // 2
    return PathPolState({(-half, "H"): vec[0], (half, "V"): vec[1]})


def decode_qubit(state, d):
    """Amplitudes on the (-d/2, H) and (+d/2, V) rails as a length-2 vector."""
    half = int(d) // 2
    allowed = {(-half, "H"), (half, "V")}
    extra = set(state.amplitudes) - allowed
    if extra:
        raise ValidationError(f"state occupies modes off the +-{half} rails: {sorted(extra)}")
    return np.array(
        [state.amplitudes.get((-half, "H"), 0.0), state.amplitudes.get((half, "V"), 0.0)],
        dtype=np.complex128,
    )


def _rail_half_separation(state):
    half = None
    for z, pol in state.amplitudes:
        z0 = -z if pol == "H" else z
        if z0 <= 0 or z0 % (PIXELS_PER_STEP // 2) != 0:
            raise ValidationError(f"mode ({z}, {pol}) is off the +-d/2 rails")
        if half is None:
            half = z0
        elif half != z0:
            raise ValidationError("state occupies rails of different separations")
    if half is None:
        raise ValidationError("empty state carries no rail information")
    return half


def thermalize_optically(state, holo, setting):
    """One half-wave-plate setting of the optical thermalizing step.

    Setting 1 is the population-keeping (cosine) pair: each rail is attenuated
    by cos(phi/2) of its own hologram row.  Setting 2 is the population-moving
    (sine) pair: amplitudes hop rails with a polarization flip, weighted by
    sin(phi/2) of the source row (the interferometer's polarization flip is
    already folded in, so no stray sign is exposed).  Summing the two
    setting outputs after rail decoherence equals the abstract thermalizing
    channel.
    """
    half = _rail_half_separation(state)
    a_h = state.amplitudes.get((-half, "H"), 0.0)
    a_v = state.amplitudes.get((half, "V"), 0.0)
    phi_lo = holo.phase_at(-half)
    phi_hi = holo.phase_at(half)
    if setting == 1:
        amps = {
            (-half, "H"): np.cos(0.5 * phi_lo) * a_h,
            (half, "V"): np.cos(0.5 * phi_hi) * a_v,
        }
    elif setting == 2:
        amps = {
            (-half, "H"): np.sin(0.5 * phi_hi) * a_v,
            (half, "V"): -np.sin(0.5 * phi_lo) * a_h,
        }
    else:
        raise ValidationError(f"setting must be 1 or 2, got {setting!r}")
    return PathPolState(amps)


def rail_components(state):
    """Split a state into its per-row components (path decoherence).

    Amplitudes on different grid rows are distinguishable by position, so any
    coherence between them is lost; each row becomes its own branch.
    """
    by_row = {}
    for (z, pol), value in state.amplitudes.items():
        if value != 0:
            by_row.setdefault(z, {})[(z, pol)] = value
    return [PathPolState(amps) for _, amps in sorted(by_row.items())]


def thermal_channel_optical(rho, qubit, bath):
    """The thermalizing channel evaluated through the optics layer.

    Eigen-decomposes the input, pushes each eigenvector through both
    half-wave-plate settings and the path decoherence, and reassembles the
    output density operator.  Equals apply_channel(thermalizing_channel)
    up to floating-point rounding.
    """
    arr = single_qubit_state(rho)
    d = d_of_omega(qubit.omega if hasattr(qubit, "omega") else float(qubit))
    holo = solve_hologram(bath)
    out = np.zeros((2, 2), dtype=np.complex128)
    w, v = np.linalg.eigh(arr)
    for weight, column in zip(w, v.T):
        if weight <= 1e-15:
            continue
        encoded = encode_qubit(column, d)
        for setting in (1, 2):
            emitted = thermalize_optically(encoded, holo, setting)
            for component in rail_components(emitted):
                u = decode_qubit(component, d)
                out += weight * np.outer(u, u.conj())
    return out


class SchmidtForm(NamedTuple):
    """vec = (u1 x u2)(a|HV> - b|VH>) with 0 <= a <= b."""

    u1: np.ndarray
    u2: np.ndarray
    a: float
    b: float


def schmidt_projector(vec):
    """Deterministic Schmidt form of a two-qubit unit vector.

    The SVD gauge freedom is fixed so equal inputs always yield identical
    outputs: for a degenerate singular pair the right vectors are chosen as
    the polarization axes (V then H); for a product vector the second pair is
    the explicit orthogonal complement; finally the largest-magnitude entry
    of each right vector is made real positive, with the joint phase carried
    by the left vector.
    """
    vec = as_complex(vec).reshape(-1)
    if vec.shape != (4,):
        raise ValidationError(f"expected a two-qubit vector, got shape {vec.shape}")
    nrm = np.linalg.norm(vec)
    if abs(nrm - 1.0) > 1e-10:
        raise ValidationError(f"vector norm deviates from 1 by {abs(nrm - 1.0):.3e}")
    c = vec.reshape(2, 2)
    u, s, vh = np.linalg.svd(c)
    x = [u[:, 0], u[:, 1]]
    y = [vh[0, :].conj(), vh[1, :].conj()]
    b, a = float(s[0]), float(s[1])
    if b - a <= 1e-11:
        # degenerate pair: anchor the right vectors on the polarization axes
        yb = np.array([1.0, 0.0], dtype=np.complex128)
        ya = np.array([0.0, 1.0], dtype=np.complex128)
        xb = c @ yb / b
        xb = xb / np.linalg.norm(xb)
        xa = c @ ya / a
        xa = xa - (xb.conj() @ xa) * xb
        xa = xa / np.linalg.norm(xa)
        x = [xb, xa]
        y = [yb, ya]
    else:
        if a <= 1e-12:
            # product vector: SVD's null pair is arbitrary, build it explicitly
            x[1] = np.array([-np.conj(x[0][1]), np.conj(x[0][0])])
            y[1] = np.array([-np.conj(y[0][1]), np.conj(y[0][0])])
        for k in range(2):
            j = int(np.argmax(np.abs(y[k])))
            ph = y[k][j] / abs(y[k][j])
            y[k] = y[k] / ph
            x[k] = x[k] / ph
    u1 = np.column_stack([x[1], -x[0]])
    u2 = np.column_stack([np.conj(y[0]), np.conj(y[1])])
    rebuilt = a * np.kron(u1[:, 0], u2[:, 1]) - b * np.kron(u1[:, 1], u2[:, 0])
    if np.max(np.abs(rebuilt - vec)) > 1e-10:
        raise ValidationError("schmidt reconstruction failed")
    return SchmidtForm(u1=u1, u2=u2, a=a, b=b)


@dataclass(frozen=True)
class BiasSetting:
    """Half-wave-plate angle of the bias interferometer and its efficiency.

    The bias filter transmits H with amplitude sin(2*theta) and V unchanged;
    the efficiency eta = (sin^2(2*theta) + 1)/2 lies in [1/2, 1].
    """

    theta_deg: float
    efficiency: float

    def __post_init__(self):
        if not (0.0 <= self.theta_deg <= 45.0 + 1e-9):
            raise ValidationError(f"bias angle must lie in [0, 45] degrees, got {self.theta_deg!r}")
        if not (0.5 - 1e-12 <= self.efficiency <= 1.0 + 1e-12):
            raise ValidationError(f"efficiency must lie in [1/2, 1], got {self.efficiency!r}")

    def h_transmission(self):
        return math.sin(math.radians(2.0 * self.theta_deg))


def bias_from_coefficients(a, b):
    """Bias setting realizing Schmidt weights (a, b): theta = arcsin(a/b)/2."""
    if not (0.0 <= a <= b) or b <= 0.0:
        raise ValidationError(f"need 0 <= a <= b with b > 0, got a={a!r}, b={b!r}")
    if abs(a * a + b * b - 1.0) > 1e-10:
        raise ValidationError(f"coefficients must satisfy a^2 + b^2 = 1, got {a * a + b * b:.6f}")
    ratio = min(a / b, 1.0)
    theta = 0.5 * math.degrees(math.asin(ratio))
    return BiasSetting(theta_deg=theta, efficiency=0.5 * (ratio * ratio + 1.0))


class TrainOperators(NamedTuple):
    """Operator sandwich of one projector's optical train.

    ``ideal`` is the interfering train (local unitaries and bias filters
    around the singlet projection) and equals efficiency * |vec><vec|;
    ``transmit`` and ``reflect`` are the two distinguishable-photon
    coincidence trains in which the singlet projection is replaced by both
    photons passing, or both photons being exchanged, at the interference
    point.
    """

    ideal: np.ndarray
    transmit: np.ndarray
    reflect: np.ndarray
    efficiency: float


def projector_train_operators(vec):
    """The three coincidence-train operators of one measurement vector."""
    u1, u2, a, b = schmidt_projector(vec)
    ratio = a / b
    dia = np.diag([ratio, 1.0]).astype(np.complex128)
    eta = 0.5 * (ratio * ratio + 1.0)
    pre = np.kron(dia @ u1.conj().T, u2.conj().T)
    post = np.kron(u1 @ dia, u2)
    return TrainOperators(
        ideal=post @ _SINGLET @ pre,
        transmit=post @ pre,
        reflect=post @ _SWAP @ pre,
        efficiency=eta,
    )


def project_optically(basis, rho):
    """Non-selective measurement through the per-projector optical trains.

    Each branch is renormalized by its efficiency eta_k^2; the result equals
    measurement_channel(basis, rho) identically.
    """
    arr = as_complex(rho)
    out = np.zeros((4, 4), dtype=np.complex128)
    for k in range(4):
        train = projector_train_operators(basis.vectors[k])
        g = train.ideal
        out += (g @ arr @ g.conj().T) / train.efficiency**2
    return out

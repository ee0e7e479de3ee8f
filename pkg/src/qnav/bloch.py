"""Bloch-vector geometry and the canonical two-state frame.

States map to Bloch vectors of radius 1/2. The canonical frame places
the initial and target states symmetrically about the equator in the
xz-plane, with the background axis rotated along.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTaskError, DimensionError, WindTooStrongError
from .linalg import HermitianOperator, SIGMA_X, SIGMA_Y, SIGMA_Z, pauli_decompose, split_trace

# below this separation the task is degenerate, above pi minus it antipodal
DEGENERATE_THETA_TOL = 1e-9

__all__ = [
    "DEGENERATE_THETA_TOL",
    "BLOCH_RADIUS",
    "CanonicalFrame",
    "WindSpec",
    "state_to_bloch",
    "angular_separation",
    "build_canonical_frame",
    "transform_wind",
    "wind_operator",
]

BLOCH_RADIUS = 0.5


def state_to_bloch(psi):
    """Bloch vector (radius 1/2) of a qubit state; global phase drops out."""
    if psi.dim != 2:
        raise DimensionError(f"Bloch map needs dim 2, got {psi.dim}")
    a, b = psi.amplitudes
    cross = np.conj(a) * b
    return np.array([cross.real, cross.imag, 0.5 * (abs(a) ** 2 - abs(b) ** 2)])


def angular_separation(psi_i, psi_f):
    """Angle between the Bloch vectors of two states, 2*arccos|<psi_i|psi_f>|."""
    if psi_i.dim != 2 or psi_f.dim != 2:
        raise DimensionError("angular separation is defined for qubit states")
    overlap = abs(np.vdot(psi_i.amplitudes, psi_f.amplitudes))
    return 2.0 * float(np.arccos(np.clip(overlap, 0.0, 1.0)))


@dataclass(frozen=True, eq=False)
class CanonicalFrame:
    """Proper rotation from lab Bloch coordinates to the canonical frame.

    Rows of `rotation` are the canonical axes expressed in lab
    coordinates. `antipodal_tiebreak` records that the in-plane axis was
    chosen by the deterministic tie-break because the states are
    (numerically) antipodal and the generic construction degenerates.
    """

    rotation: np.ndarray
    theta: float
    antipodal_tiebreak: bool = False

    def __post_init__(self):
        r = np.array(self.rotation, dtype=float, copy=True)
        if r.shape != (3, 3):
            raise DimensionError(f"rotation must be 3x3, got {r.shape}")
        r.setflags(write=False)
        object.__setattr__(self, "rotation", r)

    def to_canonical(self, v):
        return self.rotation @ np.asarray(v, dtype=float)

    def to_lab(self, v):
        return self.rotation.T @ np.asarray(v, dtype=float)


def _tiebreak_unit_orthogonal(b_hat):
    """Deterministic unit vector orthogonal to b_hat.

    Picks the coordinate axis least aligned with b_hat and removes the
    parallel component.
    """
    k = int(np.argmin(np.abs(b_hat)))
    e = np.zeros(3)
    e[k] = 1.0
    e -= np.dot(e, b_hat) * b_hat
    return e / np.linalg.norm(e)


def build_canonical_frame(psi_i, psi_f):
    """Frame placing psi_i at 1/2(cos t/2, 0, sin t/2) and psi_f mirrored below.

    Raises DegenerateTaskError when the states coincide. For antipodal
    states the in-plane direction is arbitrary; a deterministic
    tie-break is used and flagged on the returned frame.
    """
    theta = angular_separation(psi_i, psi_f)
    if theta < DEGENERATE_THETA_TOL:
        raise DegenerateTaskError(
            f"states coincide (separation {theta:.3e}); tau = 0, no control needed"
        )
    b_i = state_to_bloch(psi_i)
    b_f = state_to_bloch(psi_f)
    z_ax = b_i - b_f
    z_ax = z_ax / np.linalg.norm(z_ax)
    antipodal = theta > np.pi - DEGENERATE_THETA_TOL
    if antipodal:
        x_ax = _tiebreak_unit_orthogonal(z_ax)
    else:
        x_ax = b_i + b_f
        x_ax = x_ax / np.linalg.norm(x_ax)
        # one Gram-Schmidt pass keeps orthogonality at machine precision
        z_ax -= np.dot(z_ax, x_ax) * x_ax
        z_ax /= np.linalg.norm(z_ax)
    y_ax = np.cross(z_ax, x_ax)
    rot = np.vstack([x_ax, y_ax, z_ax])
    return CanonicalFrame(rotation=rot, theta=float(theta), antipodal_tiebreak=antipodal)


@dataclass(frozen=True, eq=False)
class WindSpec:
    """Background Hamiltonian strength and Bloch axis.

    epsilon is the trace norm tr(h0^2) of the traceless background; it
    must stay strictly below the unit control budget. epsilon == 0 means
    no wind and carries no axis.
    """

    epsilon: float
    axis: np.ndarray | None

    def __post_init__(self):
        eps = float(self.epsilon)
        if eps < 0.0:
            raise ValueError(f"epsilon must be nonnegative, got {eps}")
        if eps >= 1.0:
            raise WindTooStrongError(
                f"background trace norm {eps:.6g} reaches the unit control budget"
            )
        object.__setattr__(self, "epsilon", eps)
        if eps == 0.0:
            object.__setattr__(self, "axis", None)
            return
        if self.axis is None:
            raise ValueError("nonzero wind needs an axis")
        ax = np.asarray(self.axis, dtype=float)
        if ax.shape != (3,):
            raise DimensionError(f"axis must have shape (3,), got {ax.shape}")
        norm = float(np.linalg.norm(ax))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"axis norm {norm!r} deviates from 1 beyond 1e-12")
        ax = ax / norm
        ax.setflags(write=False)
        object.__setattr__(self, "axis", ax)

    @property
    def is_zero(self):
        return self.epsilon == 0.0


def transform_wind(frame, h0):
    """WindSpec of a 2x2 background, with the axis in canonical coordinates.

    Any trace part of h0 is split off first; it only shifts global phase
    and is accounted for by the caller.
    """
    if h0.dim != 2:
        raise DimensionError(f"wind transform needs dim 2, got {h0.dim}")
    _, traceless = split_trace(h0)
    _, a = pauli_decompose(traceless)
    eps = 2.0 * float(np.dot(a, a))
    if eps >= 1.0:
        raise WindTooStrongError(
            f"background trace norm {eps:.6g} reaches the unit control budget"
        )
    if eps == 0.0:
        return WindSpec(epsilon=0.0, axis=None)
    axis_lab = a / np.linalg.norm(a)
    return WindSpec(epsilon=eps, axis=frame.to_canonical(axis_lab))


def wind_operator(wind):
    """Rebuild the traceless 2x2 background sqrt(eps/2) * axis . sigma."""
    if wind.is_zero:
        return HermitianOperator(np.zeros((2, 2), dtype=complex))
    s = np.sqrt(wind.epsilon / 2.0)
    x, y, z = wind.axis
    return HermitianOperator(s * (x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z))

"""Complex linear algebra on small dense matrices.

Pauli composition and decomposition, Hermitian and unitary checks,
matrix exponentials of Hermitian generators and logarithms of unitaries,
Hilbert-Schmidt trace products. Everything here targets dims up to ~8,
so eigendecomposition is used throughout instead of Pade-style schemes.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, NotHermitianError, NotUnitaryError

HERMITIAN_DRIFT_TOL = 1e-12
UNITARY_TOL = 1e-10
STATE_NORM_TOL = 1e-12

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
for _m in (SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.setflags(write=False)
del _m

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "HermitianOperator",
    "StateVector",
    "pauli_compose",
    "pauli_decompose",
    "hs_trace_product",
    "expm_unitary",
    "expm_qubit_closed_form",
    "logm_unitary",
    "unitary_eigenphases",
    "require_unitary",
    "split_trace",
    "spectral_span",
    "state_fidelity",
]


def _as_square_complex(m, what="matrix"):
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {a.shape}")
    if a.shape[0] < 2:
        raise DimensionError(f"{what} must have dim >= 2, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} contains non-finite entries")
    return a


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense Hermitian matrix, stored in exactly Hermitian form.

    Construction averages the input with its adjoint and rejects inputs
    whose anti-Hermitian drift exceeds HERMITIAN_DRIFT_TOL, so roundoff
    from upstream arithmetic is absorbed but genuine errors are not.
    """

    matrix: np.ndarray

    def __post_init__(self):
        a = _as_square_complex(self.matrix, "Hermitian operator")
        drift = np.max(np.abs(a - a.conj().T))
        if drift > HERMITIAN_DRIFT_TOL:
            raise NotHermitianError(
                f"anti-Hermitian drift {drift:.3e} exceeds {HERMITIAN_DRIFT_TOL:.0e}"
            )
        sym = 0.5 * (a + a.conj().T)
        sym.setflags(write=False)
        object.__setattr__(self, "matrix", sym)

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state; renormalized exactly at construction."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).ravel()
        if a.size < 2:
            raise DimensionError(f"state must have dim >= 2, got {a.size}")
        if not np.all(np.isfinite(a)):
            raise ValueError("state contains non-finite amplitudes")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {STATE_NORM_TOL:.0e}")
        a = a / norm
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self):
        return self.amplitudes.size


def pauli_compose(a0, a):
    """Return a0*I + a[0]*sigma_x + a[1]*sigma_y + a[2]*sigma_z as a HermitianOperator."""
    a = np.asarray(a, dtype=float)
    if a.shape != (3,):
        raise DimensionError(f"coefficient vector must have shape (3,), got {a.shape}")
    m = float(a0) * np.eye(2, dtype=complex)
    m += a[0] * SIGMA_X + a[1] * SIGMA_Y + a[2] * SIGMA_Z
    return HermitianOperator(m)


def pauli_decompose(h):
    """Inverse of pauli_compose for 2x2 Hermitian operators.

    Args:
        h: HermitianOperator of dim 2.

    Returns:
        Tuple (a0, a) with a0 the identity coefficient and a the real
        3-vector of Pauli coefficients.
    """
    if h.dim != 2:
        raise DimensionError(f"Pauli decomposition needs dim 2, got {h.dim}")
    m = h.matrix
    a0 = 0.5 * np.real(m[0, 0] + m[1, 1])
    ax = 0.5 * np.real(m[0, 1] + m[1, 0])
    ay = 0.5 * np.imag(m[1, 0] - m[0, 1])
    az = 0.5 * np.real(m[0, 0] - m[1, 1])
    return float(a0), np.array([ax, ay, az])


def hs_trace_product(a, b):
    """Hilbert-Schmidt product Re tr(a b) of two Hermitian operators."""
    if a.dim != b.dim:
        raise DimensionError(f"dim mismatch {a.dim} vs {b.dim}")
    t = complex(np.trace(a.matrix @ b.matrix))
    # tr(AB) is real for Hermitian A, B; a sizeable imaginary part means a bug upstream
    if abs(t.imag) > 1e-12:
        raise ArithmeticError(f"trace product has imaginary part {t.imag:.3e}")
    return t.real


def expm_unitary(h, t):
    """Unitary e^{-i h t} via eigendecomposition of the Hermitian generator."""
    if not np.isfinite(t):
        raise ValueError("time must be finite")
    w, v = np.linalg.eigh(h.matrix)
    return (v * np.exp(-1j * w * float(t))) @ v.conj().T


def expm_qubit_closed_form(h, t):
    """Closed-form e^{-i h t} for dim 2: phase times cos/sin of the Pauli part."""
    a0, a = pauli_decompose(h)
    t = float(t)
    r = float(np.linalg.norm(a))
    if r == 0.0:
        core = np.eye(2, dtype=complex)
    else:
        n = a / r
        ns = n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z
        core = np.cos(r * t) * np.eye(2, dtype=complex) - 1j * np.sin(r * t) * ns
    return np.exp(-1j * a0 * t) * core


def require_unitary(u, what="matrix"):
    """Validate unitarity within UNITARY_TOL and return the array."""
    a = _as_square_complex(u, what)
    dev = np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0])))
    if dev > UNITARY_TOL:
        raise NotUnitaryError(f"{what} deviates from unitary by {dev:.3e}")
    return a


def unitary_eigenphases(u):
    """Eigenphases and eigenvectors of a unitary u = e^{-i X}.

    Returns (lam, q) with lam the real eigenphases of X in (-pi, pi]
    sorted ascending and q the matching orthonormal eigenvector columns,
    so that u = q diag(e^{-i lam}) q^dagger.
    """
    a = require_unitary(u)
    # complex Schur of a normal matrix is a diagonalization with orthonormal columns
    t, q = scipy.linalg.schur(a, output="complex")
    lam = -np.angle(np.diagonal(t))
    lam = np.where(lam <= -np.pi, lam + 2.0 * np.pi, lam)
    order = np.argsort(lam, kind="stable")
    return lam[order], np.ascontiguousarray(q[:, order])


def logm_unitary(u, branch_offsets=None):
    """Hermitian X with u = e^{-i X}, on an explicitly chosen branch.

    Eigenphases are taken in the principal window (-pi, pi], sorted
    ascending, then shifted by 2*pi*branch_offsets[k] per eigenvalue.
    Offsets default to all zeros. The result re-exponentiates to u
    within UNITARY_TOL; a larger residual raises NotUnitaryError.
    """
    lam, q = unitary_eigenphases(u)
    n = lam.size
    if branch_offsets is None:
        offsets = np.zeros(n, dtype=int)
    else:
        offsets = np.asarray(branch_offsets, dtype=int)
        if offsets.shape != (n,):
            raise DimensionError(
                f"branch offsets must have length {n}, got shape {offsets.shape}"
            )
    lam = lam + 2.0 * np.pi * offsets
    x = (q * lam) @ q.conj().T
    op = HermitianOperator(x)
    back = expm_unitary(op, 1.0)
    resid = float(np.max(np.abs(back - np.asarray(u, dtype=complex))))
    if resid > UNITARY_TOL:
        raise NotUnitaryError(f"log re-exponentiation residual {resid:.3e}")
    return op


def split_trace(h):
    """Split h into (trace/dim, traceless HermitianOperator)."""
    a0 = float(np.real(np.trace(h.matrix))) / h.dim
    rest = h.matrix - a0 * np.eye(h.dim)
    return a0, HermitianOperator(rest)


def spectral_span(h):
    """Spread max - min of the eigenvalues of a Hermitian operator."""
    w = np.linalg.eigvalsh(h.matrix)
    return float(w[-1] - w[0])


def state_fidelity(psi, phi):
    """Overlap probability |<psi|phi>|^2 of two pure states."""
    if psi.dim != phi.dim:
        raise DimensionError(f"dim mismatch {psi.dim} vs {phi.dim}")
    return float(np.abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2)

"""Pure states and density matrices in the excited-first product basis.

Single-qubit basis order is (|1>, |0>) with |1> the excited state. The
two-qubit product basis is ordered |11>, |10>, |01>, |00> (first qubit
slowest), i.e. joint index 0 is the doubly excited state. All element
formulas elsewhere in the package assume exactly this ordering.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ValidationError

BASIS_LABELS = ("11", "10", "01", "00")

TRACE_TOL = 1e-12
HERM_TOL = 1e-12
PSD_TOL = 1e-10
NORM_TOL = 1e-9


def joint_index(bit_a, bit_b):
    """Joint basis index for qubit bits (1 = excited, 0 = ground)."""
    if bit_a not in (0, 1) or bit_b not in (0, 1):
        raise ValidationError(f"qubit bits must be 0 or 1, got ({bit_a}, {bit_b})")
    return (1 - bit_a) * 2 + (1 - bit_b)


def joint_bits(index):
    """Inverse of joint_index: (bit_a, bit_b) for a joint basis index."""
    if index not in (0, 1, 2, 3):
        raise ValidationError(f"joint index must be in 0..3, got {index}")
    return 1 - index // 2, 1 - index % 2


def _frozen(arr):
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PureState:
    """Normalized state vector. ``amplitudes[k]`` follows the basis order above."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0:
            raise DimensionError("amplitudes must be a non-empty vector")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValidationError(f"state not normalized: sum |a|^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self):
        return self.amplitudes.size


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace Hermitian positive-semidefinite matrix.

    Construction validates trace (1e-12), hermiticity (1e-12) and
    positivity (eigenvalues >= -1e-10); use :func:`validate_density` to
    inspect deviations of a raw matrix without raising.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {m.shape}")
        report = validate_density(m)
        if report.trace_deviation > TRACE_TOL:
            raise ValidationError(f"trace deviates from 1 by {report.trace_deviation:.3e}")
        if report.hermiticity_deviation > HERM_TOL:
            raise ValidationError(f"not Hermitian, deviation {report.hermiticity_deviation:.3e}")
        if report.min_eigenvalue < -PSD_TOL:
            raise ValidationError(f"not positive semidefinite, min eigenvalue {report.min_eigenvalue:.3e}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True)
class ValidationReport:
    """Deviations of a matrix from the density-matrix invariants."""

    trace_deviation: float
    hermiticity_deviation: float
    min_eigenvalue: float

    def ok(self, tol):
        return (self.trace_deviation <= tol
                and self.hermiticity_deviation <= tol
                and self.min_eigenvalue >= -tol)


def validate_density(rho, tol=1e-12):
    """Report (trace deviation, hermiticity deviation, min eigenvalue).

    Accepts a raw matrix or a DensityMatrix; never mutates, never raises on
    bad physics. ``tol`` is the threshold used by :meth:`ValidationReport.ok`.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)
    trace_dev = abs(np.trace(m) - 1.0)
    herm_dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    herm_part = 0.5 * (m + m.conj().T)
    min_eig = float(np.min(np.linalg.eigvalsh(herm_part)))
    return ValidationReport(float(trace_dev), herm_dev, min_eig)


def pure_to_density(state):
    """Rank-1 projector |s><s| of a normalized pure state."""
    amps = state.amplitudes
    return DensityMatrix(np.outer(amps, amps.conj()))


def _check_alpha(alpha):
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [0, 1], got {alpha}")


def make_phi(alpha, delta):
    """One-excitation entangled state alpha|01> + beta|10>, |beta| = sqrt(1-alpha^2).

    alpha is real in [0, 1]; delta is the phase of beta.
    """
    _check_alpha(alpha)
    beta = np.sqrt(1.0 - alpha * alpha) * np.exp(1j * delta)
    return PureState(np.array([0.0, beta, alpha, 0.0], dtype=np.complex128))


def make_psi(alpha, delta):
    """Two-excitation entangled state alpha|00> + beta|11>, |beta| = sqrt(1-alpha^2)."""
    _check_alpha(alpha)
    beta = np.sqrt(1.0 - alpha * alpha) * np.exp(1j * delta)
    return PureState(np.array([beta, 0.0, 0.0, alpha], dtype=np.complex128))


def make_werner(fidelity):
    """Werner mixture f |B><B| + (1-f)/4 I with B = (|01> + |10>)/sqrt(2)."""
    if not 0.0 <= fidelity <= 1.0:
        raise ValidationError(f"fidelity must lie in [0, 1], got {fidelity}")
    bell = np.zeros((4, 4), dtype=np.complex128)
    bell[1, 1] = bell[2, 2] = bell[1, 2] = bell[2, 1] = 0.5
    return DensityMatrix(fidelity * bell + (1.0 - fidelity) / 4.0 * np.eye(4))

"""Closed-form evolution of all two-qubit density-matrix elements when both
qubits see identical independent amplitude damping with survival probability p.

With basis index 0 = |11>, 1 = |10>, 2 = |01>, 3 = |00>:

    r00' = r00 p^2                       r01' = r01 p^(3/2)
    r11' = r11 p + r00 p (1-p)           r02' = r02 p^(3/2)
    r22' = r22 p + r00 p (1-p)           r03' = r03 p
    r33' = 1 - (r00' + r11' + r22')      r12' = r12 p
    r13' = sqrt(p) (r13 + r02 (1-p))     r23' = sqrt(p) (r23 + r01 (1-p))

and the lower triangle by hermiticity. This is the same channel as the
tensor-product route in :mod:`esdlab.channels`; :func:`crosscheck` measures
their agreement and is the library's central self-test. The anti-diagonal
("X") sparsity pattern is preserved exactly, which :class:`XState` encodes
structurally.
"""

from dataclasses import dataclass

import numpy as np

from .channels import apply_map, product_extend
from .damping import damping_channel
from .errors import ValidationError
from .states import DensityMatrix

_P_CLAMP = 1e-9


def _check_p(p):
    p = float(p)
    if p < 0.0:
        if p < -_P_CLAMP:
            raise ValidationError(f"survival probability {p} outside [0, 1]")
        return 0.0
    if p > 1.0:
        if p > 1.0 + _P_CLAMP:
            raise ValidationError(f"survival probability {p} outside [0, 1]")
        return 1.0
    return p


def evolve_elements(rho, p_values):
    """Vectorized element evolution of a raw 4x4 matrix.

    Returns an array of shape (len(p_values), 4, 4); the trace of every
    output is exactly 1 by construction of the last diagonal element.
    """
    r = np.asarray(rho, dtype=np.complex128)
    p = np.asarray(p_values, dtype=np.float64).reshape(-1)
    sp = np.sqrt(p)
    out = np.zeros((p.size, 4, 4), dtype=np.complex128)
    feed = r[0, 0] * p * (1.0 - p)
    out[:, 0, 0] = r[0, 0] * p * p
    out[:, 1, 1] = r[1, 1] * p + feed
    out[:, 2, 2] = r[2, 2] * p + feed
    out[:, 3, 3] = 1.0 - (out[:, 0, 0] + out[:, 1, 1] + out[:, 2, 2])
    out[:, 0, 1] = r[0, 1] * p * sp
    out[:, 0, 2] = r[0, 2] * p * sp
    out[:, 0, 3] = r[0, 3] * p
    out[:, 1, 2] = r[1, 2] * p
    out[:, 1, 3] = sp * (r[1, 3] + r[0, 2] * (1.0 - p))
    out[:, 2, 3] = sp * (r[2, 3] + r[0, 1] * (1.0 - p))
    iu = np.triu_indices(4, 1)
    out[:, iu[1], iu[0]] = out[:, iu[0], iu[1]].conj()
    return out


def evolve_closed_form(rho0: DensityMatrix, p) -> DensityMatrix:
    """Evolve a two-qubit state by the closed-form element map."""
    if rho0.dim != 4:
        raise ValidationError(f"closed-form evolution needs a two-qubit state, got dim {rho0.dim}")
    p = _check_p(p)
    return DensityMatrix(evolve_elements(rho0.matrix, [p])[0])


@dataclass(frozen=True)
class XState:
    """Two-qubit state whose only nonzero elements are the diagonal and the
    anti-diagonal pair (rho14, rho23); the zero pattern is structural, not a
    tolerance statement. Indices follow the 0-based basis order (rho14 couples
    |11> with |00>, rho23 couples |10> with |01>)."""

    diag: np.ndarray
    rho14: complex
    rho23: complex

    def __post_init__(self):
        d = np.array(self.diag, dtype=np.float64)
        if d.shape != (4,):
            raise ValidationError(f"diag must hold 4 populations, got shape {d.shape}")
        d.flags.writeable = False
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "rho14", complex(self.rho14))
        object.__setattr__(self, "rho23", complex(self.rho23))
        self.embed()  # raises if the state is not a valid density matrix

    def embed(self) -> DensityMatrix:
        m = np.zeros((4, 4), dtype=np.complex128)
        m[0, 0], m[1, 1], m[2, 2], m[3, 3] = self.diag
        m[0, 3] = self.rho14
        m[3, 0] = np.conj(self.rho14)
        m[1, 2] = self.rho23
        m[2, 1] = np.conj(self.rho23)
        return DensityMatrix(m)


def x_state_from_density(rho: DensityMatrix, tol=0.0) -> XState:
    """Classify a density matrix as an X state; off-pattern elements must not
    exceed tol (default: exactly zero)."""
    m = rho.matrix
    mask = np.zeros((4, 4), dtype=bool)
    mask[np.arange(4), np.arange(4)] = True
    mask[0, 3] = mask[3, 0] = mask[1, 2] = mask[2, 1] = True
    worst = float(np.max(np.abs(m[~mask]))) if (~mask).any() else 0.0
    if worst > tol:
        raise ValidationError(f"matrix is not an X state, off-pattern element {worst:.3e}")
    return XState(diag=m.diagonal().real.copy(), rho14=m[0, 3], rho23=m[1, 2])


def evolve_x_state(x0: XState, p) -> XState:
    """Evolve an X state; identical to the full element map restricted to the
    X pattern, which the evolution preserves exactly."""
    p = _check_p(p)
    sp = np.sqrt(p)
    d = x0.diag
    feed = d[0] * p * (1.0 - p)
    new_diag = np.empty(4, dtype=np.float64)
    new_diag[0] = d[0] * p * p
    new_diag[1] = d[1] * p + feed
    new_diag[2] = d[2] * p + feed
    new_diag[3] = 1.0 - (new_diag[0] + new_diag[1] + new_diag[2])
    return XState(diag=new_diag, rho14=x0.rho14 * p, rho23=x0.rho23 * p)


def crosscheck(rho0: DensityMatrix, p) -> float:
    """Max elementwise deviation between the closed-form element map and the
    tensor-product route built from single-qubit Kraus channels."""
    p = _check_p(p)
    closed = evolve_closed_form(rho0, p)
    single = damping_channel(p).map
    joint = product_extend([single, single])
    tensored = apply_map(joint, rho0)
    return float(np.max(np.abs(closed.matrix - tensored.matrix)))

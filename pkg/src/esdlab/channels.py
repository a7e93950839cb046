"""Single-subsystem dynamical maps and their product extension.

A dynamical map is stored as the 4-index tensor T[i, i', l, l'] acting on
density-matrix elements: rho_out[i, i'] = sum_{l, l'} T[i, i', l, l'] *
rho_in[l, l']. Independent subsystems compose by elementwise tensor product
of their maps, with composite indices ordered leftmost-factor-slowest
(matching the basis convention in :mod:`esdlab.states`).
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionError, ValidationError
from .states import DensityMatrix

TP_TOL = 1e-10
HP_TOL = 1e-12
CHOI_TOL = 1e-10


def _frozen(arr):
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators {K_a} of a trace-preserving channel: sum K^dag K = I."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(np.array(op, dtype=np.complex128) for op in self.operators)
        if not ops:
            raise ValidationError("need at least one Kraus operator")
        d = ops[0].shape[0]
        for op in ops:
            if op.ndim != 2 or op.shape != (d, d):
                raise DimensionError(f"Kraus operators must share a square shape, got {op.shape}")
        total = sum(op.conj().T @ op for op in ops)
        dev = float(np.max(np.abs(total - np.eye(d))))
        if dev > TP_TOL:
            raise ValidationError(f"Kraus completeness sum deviates from identity by {dev:.3e}")
        object.__setattr__(self, "operators", tuple(_frozen(op) for op in ops))

    @property
    def dim(self):
        return self.operators[0].shape[0]


@dataclass(frozen=True)
class DynamicalMap:
    """4-index tensor of a completely positive trace-preserving map."""

    tensor: np.ndarray

    def __post_init__(self):
        t = np.array(self.tensor, dtype=np.complex128)
        if t.ndim != 4 or len(set(t.shape)) != 1:
            raise DimensionError(f"map tensor must have shape (d, d, d, d), got {t.shape}")
        d = t.shape[0]
        # trace preservation: sum_i T[i, i, l, l'] = delta_{l l'}
        tp = np.einsum("iilm->lm", t)
        tp_dev = float(np.max(np.abs(tp - np.eye(d))))
        if tp_dev > TP_TOL:
            raise ValidationError(f"map is not trace preserving, deviation {tp_dev:.3e}")
        # hermiticity preservation: T[i', i, l', l] = conj(T[i, i', l, l'])
        hp_dev = float(np.max(np.abs(t - t.conj().transpose(1, 0, 3, 2))))
        if hp_dev > HP_TOL:
            raise ValidationError(f"map is not hermiticity preserving, deviation {hp_dev:.3e}")
        min_eig = float(np.min(np.linalg.eigvalsh(_choi(t))))
        if min_eig < -CHOI_TOL:
            raise ValidationError(f"map is not completely positive, Choi eigenvalue {min_eig:.3e}")
        object.__setattr__(self, "tensor", _frozen(t))

    @property
    def dim(self):
        return self.tensor.shape[0]


def _choi(tensor):
    d = tensor.shape[0]
    return tensor.transpose(0, 2, 1, 3).reshape(d * d, d * d)


def choi_matrix(dmap):
    """Choi rearrangement C[(i,l), (i',l')] = T[i, i', l, l'] (Hermitian for
    hermiticity-preserving maps; PSD iff the map is completely positive)."""
    return _choi(dmap.tensor)


def choi_min_eigenvalue(dmap):
    """Smallest Choi eigenvalue; >= -1e-10 for every map this module builds."""
    return float(np.min(np.linalg.eigvalsh(choi_matrix(dmap))))


def from_kraus(kraus):
    """Dynamical-map tensor of a Kraus set: T[i,i',l,l'] = sum_a K_a[i,l] conj(K_a[i',l'])."""
    ops = np.stack(kraus.operators)
    tensor = np.einsum("ail,akm->iklm", ops, ops.conj())
    return DynamicalMap(tensor)


def apply_map(dmap, rho):
    """Apply a dynamical map to a density matrix."""
    if dmap.dim != rho.dim:
        raise DimensionError(f"map dimension {dmap.dim} does not match state dimension {rho.dim}")
    out = np.einsum("ijlm,lm->ij", dmap.tensor, rho.matrix)
    return DensityMatrix(out)


def product_extend(maps):
    """Joint map of independent subsystems.

    The joint tensor is the elementwise product of the factors with composite
    indices ordered leftmost-factor-slowest; works for any number of factors
    and heterogeneous dimensions.
    """
    maps = list(maps)
    if not maps:
        raise ValidationError("product_extend needs at least one factor map")
    if len(maps) == 1:
        return maps[0]

    def pair(a, b):
        da = a.shape[0]
        db = b.shape[0]
        d = da * db
        joint = np.einsum("aceg,bdfh->abcdefgh", a, b)
        return joint.reshape(d, d, d, d)

    tensor = reduce(pair, (m.tensor for m in maps))
    return DynamicalMap(tensor)

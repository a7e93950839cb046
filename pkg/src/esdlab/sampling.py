"""Seeded random states, channels and unitaries for validation sweeps."""

import numpy as np

from .pair_dynamics import XState
from .states import DensityMatrix


def random_density_matrix(rng, dim=4) -> DensityMatrix:
    """Full-rank random density matrix G G^dag / tr(G G^dag), G Ginibre."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure_state_vector(rng, dim=4):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_x_state(rng, margin=0.95, floor=0.02) -> XState:
    """Random X state with the anti-diagonal bounded away from the positivity
    edge (|rho14| <= margin*sqrt(r11 r44), same for rho23) and a floored
    diagonal. The margin keeps the smallest zeta eigenvalue well above
    roundoff, where concurrence is numerically well conditioned; the states
    still cover the full X family interior."""
    diag = rng.random(4) + floor
    diag /= diag.sum()
    r14 = margin * rng.random() * np.sqrt(diag[0] * diag[3]) * np.exp(2j * np.pi * rng.random())
    r23 = margin * rng.random() * np.sqrt(diag[1] * diag[2]) * np.exp(2j * np.pi * rng.random())
    return XState(diag=diag, rho14=r14, rho23=r23)


def random_unitary(rng, dim=2):
    """Haar-ish random unitary from the QR decomposition of a Ginibre matrix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_product_density(rng) -> DensityMatrix:
    """Tensor product of two independent random single-qubit states."""
    a = random_density_matrix(rng, 2)
    b = random_density_matrix(rng, 2)
    return DensityMatrix(np.kron(a.matrix, b.matrix))

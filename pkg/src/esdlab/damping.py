"""Single-qubit amplitude-damping channel at a fixed survival probability.

In the excited-first basis the channel maps rho11 -> rho11*p,
rho10 -> rho10*sqrt(p), rho00 -> rho00 + rho11*(1-p); its Kraus pair is
K0 = diag(sqrt(p), 1) and K1 = sqrt(1-p) |0><1|.
"""

from dataclasses import dataclass

import numpy as np

from .channels import DynamicalMap, KrausSet, from_kraus
from .errors import ValidationError
from .memory import MemoryFunction, ReservoirSpec

CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class DampingSnapshot:
    """Amplitude-damping channel at one instant: probability, Kraus pair, map."""

    p: float
    kraus: KrausSet
    map: DynamicalMap


def damping_channel(p):
    """Build the amplitude-damping channel for survival probability p.

    Values within 1e-9 below 0 or above 1 (numerical dust from the Volterra
    solvers) are clamped; anything further out raises.
    """
    p = float(p)
    if p < 0.0:
        if p < -CLAMP_TOL:
            raise ValidationError(f"survival probability {p} below clamp window")
        p = 0.0
    elif p > 1.0:
        if p > 1.0 + CLAMP_TOL:
            raise ValidationError(f"survival probability {p} above clamp window")
        p = 1.0
    sqrt_p = np.sqrt(p)
    k0 = np.array([[sqrt_p, 0.0], [0.0, 1.0]], dtype=np.complex128)
    k1 = np.array([[0.0, 0.0], [np.sqrt(1.0 - p), 0.0]], dtype=np.complex128)
    kraus = KrausSet((k0, k1))
    return DampingSnapshot(p=p, kraus=kraus, map=from_kraus(kraus))


def channel_at_time(spec: ReservoirSpec, t, method="closed_form", h=1e-3):
    """Damping channel of a reservoir at dimensionless time gamma0*t.

    For the Volterra methods the memory equation is solved up to t with
    step h; the closed-form and Markov methods evaluate directly.
    """
    if t < 0:
        raise ValidationError(f"time must be non-negative, got {t}")
    if method.startswith("volterra"):
        mem = MemoryFunction(spec, method, t_max=max(t, h), h=h)
    else:
        mem = MemoryFunction(spec, method)
    return damping_channel(float(mem(t)))

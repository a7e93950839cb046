"""Self-contained numerics: dense complex eigensolver, fixed-step RK4, and
product integration for convolution Volterra equations.

Everything here is a pure function of its inputs and uses fixed step sizes,
so repeated runs are bit-for-bit reproducible.
"""

from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import DimensionError

MAX_EIGEN_DIM = 16


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues of a dense complex matrix, unsorted.

    ``converged`` is False when the QR iteration hit ``max_iter``; the
    values then hold the best available estimates.
    """
    values: np.ndarray
    converged: bool
    iterations: int


def eigenvalues(matrix, tol=1e-12, max_iter=None):
    """All complex eigenvalues of a small dense matrix (dimension <= 16).

    Hessenberg reduction followed by shifted QR iteration; suitable for
    non-Hermitian input. Values are returned unsorted; callers order them.

    Parameters
    ----------
    matrix : (n, n) array_like, complex
    tol : float
        Relative deflation tolerance (> 0).
    max_iter : int, optional
        Total QR sweep budget; defaults to 40*n.
    """
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"eigenvalues needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > MAX_EIGEN_DIM:
        raise DimensionError(f"eigensolver is limited to dimension {MAX_EIGEN_DIM}, got {n}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if n == 0:
        return EigenResult(np.zeros(0, dtype=np.complex128), True, 0)
    if max_iter is None:
        max_iter = 40 * n
    values, converged, iters = _accel.eigvals_qr(np.ascontiguousarray(a), tol, max_iter)
    return EigenResult(values, bool(converged), int(iters))


def ode_rk4(deriv, y0, t0, t1, h):
    """Integrate y' = deriv(t, y) with the classical fixed-step RK4 scheme.

    The step must tile [t0, t1]; the trajectory includes both endpoints.
    Global error is O(h^4) for smooth right-hand sides.

    Returns (times, states) with shapes (n+1,) and (n+1, len(y0)).
    """
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    if t1 <= t0:
        raise ValueError(f"need t1 > t0, got [{t0}, {t1}]")
    span = t1 - t0
    n = max(1, int(round(span / h)))
    if abs(n * h - span) > 1e-9 * span:
        raise ValueError(f"step {h} does not tile the interval [{t0}, {t1}]")
    hh = span / n
    y = np.array(y0, dtype=np.float64)
    if y.ndim != 1:
        raise ValueError("y0 must be a 1-D real vector")
    times = t0 + hh * np.arange(n + 1)
    times[-1] = t1
    states = np.empty((n + 1, y.size), dtype=np.float64)
    states[0] = y
    for i in range(n):
        t = times[i]
        k1 = np.asarray(deriv(t, y))
        k2 = np.asarray(deriv(t + 0.5 * hh, y + 0.5 * hh * k1))
        k3 = np.asarray(deriv(t + 0.5 * hh, y + 0.5 * hh * k2))
        k4 = np.asarray(deriv(t + hh, y + hh * k3))
        y = y + (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise ValueError(f"non-finite state while stepping from t={t}")
        states[i + 1] = y
    return times, states


def volterra_product_integration(kernel, g0, t_max, h):
    """Solve G'(t) = -int_0^t kernel(t - s) G(s) ds, G(0) = g0, on [0, t_max].

    Trapezoidal product integration on a uniform grid (second order in h).
    ``kernel`` is evaluated once per grid offset tau = k*h and must be finite
    there. History is kept for the whole grid: O(n) memory, O(n^2) time.

    Returns (times, values) with values complex of length n+1.
    """
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    n = max(1, int(round(t_max / h)))
    if abs(n * h - t_max) > 1e-9 * t_max:
        raise ValueError(f"step {h} does not tile [0, {t_max}]")
    hh = t_max / n
    times = hh * np.arange(n + 1)
    times[-1] = t_max
    fgrid = np.empty(n + 1, dtype=np.complex128)
    for k in range(n + 1):
        val = complex(kernel(times[k]))
        if not (np.isfinite(val.real) and np.isfinite(val.imag)):
            raise ValueError(f"kernel returned a non-finite value at tau={times[k]}")
        fgrid[k] = val
    values = _accel.volterra_trap(fgrid, complex(g0), hh)
    return times, values


def matrices_close(a, b, tol):
    """Elementwise |a - b| <= tol with an explicit absolute tolerance.

    The one sanctioned way to compare matrices here; never use exact
    float equality.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(np.max(np.abs(a - b)) <= tol) if a.size else True

"""Hot numeric kernels with optional numba JIT.

The two inner loops that dominate runtime live here: the O(n^2) trapezoidal
product-integration sweep for convolution Volterra equations, and the complex
Hessenberg + shifted-QR eigenvalue iteration used once per density matrix in
concurrence sweeps.

Set ``ESDLAB_NUMBA=0`` in the environment to force the pure-NumPy fallback
(the backend is fixed at import time). ``benchmarks/bench_kernels.py``
compares both paths; they agree to ~1e-15 but may differ at the last ulp
because the fallback uses BLAS dot products.
"""

import os

import numpy as np

_flag = os.environ.get("ESDLAB_NUMBA", "1").strip().lower()
_use_numba = _flag not in ("0", "false", "no", "off")

if _use_numba:
    try:
        from numba import njit
    except ImportError:
        _use_numba = False

NUMBA_ENABLED = _use_numba


def backend_name():
    """Name of the active kernel backend, "numba" or "numpy"."""
    return "numba" if NUMBA_ENABLED else "numpy"


def volterra_trap_py(fgrid, g0, h):
    """Pure-NumPy trapezoidal product integration of
    G'(t) = -int_0^t f(t-s) G(s) ds on the uniform grid fgrid[k] = f(k*h).

    The trapezoid rule is applied both to the memory integral and to the
    outer time step; the implicit G_{k+1} term is linear and solved in
    closed form, which keeps the scheme second order.
    """
    n = fgrid.shape[0] - 1
    g = np.empty(n + 1, dtype=np.complex128)
    g[0] = g0
    integral = 0.0 + 0.0j
    f0 = fgrid[0]
    denom = 1.0 + h * h * f0 / 4.0
    for k in range(n):
        if k >= 1:
            hist = np.dot(fgrid[k:0:-1], g[1:k + 1])
        else:
            hist = 0.0 + 0.0j
        gnew = (g[k] - 0.5 * h * integral
                - 0.5 * h * h * (0.5 * fgrid[k + 1] * g[0] + hist)) / denom
        g[k + 1] = gnew
        integral = h * (0.5 * fgrid[k + 1] * g[0] + hist + 0.5 * f0 * gnew)
    return g


def _volterra_trap_loop(fgrid, g0, h):
    # Same scheme as volterra_trap_py with the history dot product written
    # as an explicit loop so numba compiles the whole sweep.
    n = fgrid.shape[0] - 1
    g = np.empty(n + 1, dtype=np.complex128)
    g[0] = g0
    integral = 0.0 + 0.0j
    f0 = fgrid[0]
    denom = 1.0 + h * h * f0 / 4.0
    for k in range(n):
        hist = 0.0 + 0.0j
        for j in range(1, k + 1):
            hist += fgrid[k + 1 - j] * g[j]
        gnew = (g[k] - 0.5 * h * integral
                - 0.5 * h * h * (0.5 * fgrid[k + 1] * g[0] + hist)) / denom
        g[k + 1] = gnew
        integral = h * (0.5 * fgrid[k + 1] * g[0] + hist + 0.5 * f0 * gnew)
    return g


def eigvals_qr_py(a, tol, max_iter):
    """All eigenvalues of a small dense complex matrix.

    Householder reduction to upper Hessenberg form followed by explicit
    single-shift QR iteration with Wilkinson shifts and deflation. Written
    with scalar loops only so the identical body runs under numba.

    Returns (values, converged, iterations); on non-convergence the current
    diagonal of the unfinished block is reported as the best estimate.
    """
    n = a.shape[0]
    h = a.copy()
    anorm = 0.0
    for i in range(n):
        for j in range(n):
            anorm += abs(h[i, j]) ** 2
    anorm = np.sqrt(anorm)

    # Householder similarity transforms -> upper Hessenberg.
    v = np.zeros(n, dtype=np.complex128)
    for k in range(n - 2):
        xnorm2 = 0.0
        for i in range(k + 1, n):
            xnorm2 += abs(h[i, k]) ** 2
        xnorm = np.sqrt(xnorm2)
        if xnorm == 0.0:
            continue
        x0 = h[k + 1, k]
        if abs(x0) == 0.0:
            alpha = -xnorm + 0.0j
        else:
            alpha = -(x0 / abs(x0)) * xnorm
        for i in range(n):
            v[i] = 0.0 + 0.0j
        for i in range(k + 1, n):
            v[i] = h[i, k]
        v[k + 1] -= alpha
        vnorm2 = 0.0
        for i in range(k + 1, n):
            vnorm2 += abs(v[i]) ** 2
        if vnorm2 == 0.0:
            continue
        tau = 2.0 / vnorm2
        for j in range(n):
            s = 0.0 + 0.0j
            for i in range(k + 1, n):
                s += v[i].conjugate() * h[i, j]
            s *= tau
            for i in range(k + 1, n):
                h[i, j] -= v[i] * s
        for i in range(n):
            s = 0.0 + 0.0j
            for j in range(k + 1, n):
                s += h[i, j] * v[j]
            s *= tau
            for j in range(k + 1, n):
                h[i, j] -= s * v[j].conjugate()

    # Shifted QR with deflation from the bottom-right corner.
    evals = np.zeros(n, dtype=np.complex128)
    cs = np.zeros(n, dtype=np.float64)
    sn = np.zeros(n, dtype=np.complex128)
    hi = n - 1
    iters = 0
    stall = 0
    converged = True
    while hi >= 0:
        if hi == 0:
            evals[0] = h[0, 0]
            hi = -1
            break
        lo = hi
        while lo > 0:
            thresh = tol * (abs(h[lo - 1, lo - 1]) + abs(h[lo, lo]))
            if thresh == 0.0:
                thresh = tol * anorm
            if abs(h[lo, lo - 1]) <= thresh:
                h[lo, lo - 1] = 0.0 + 0.0j
                break
            lo -= 1
        if lo == hi:
            evals[hi] = h[hi, hi]
            hi -= 1
            stall = 0
            continue
        a11 = h[hi - 1, hi - 1]
        a12 = h[hi - 1, hi]
        a21 = h[hi, hi - 1]
        a22 = h[hi, hi]
        tr = a11 + a22
        disc = np.sqrt(tr * tr - 4.0 * (a11 * a22 - a12 * a21))
        lam1 = 0.5 * (tr + disc)
        lam2 = 0.5 * (tr - disc)
        if lo == hi - 1:
            evals[hi - 1] = lam1
            evals[hi] = lam2
            hi -= 2
            stall = 0
            continue
        if iters >= max_iter:
            converged = False
            for i in range(hi + 1):
                evals[i] = h[i, i]
            break
        # Wilkinson shift: trailing-2x2 eigenvalue closest to the corner,
        # with a deterministic exceptional shift every 8 stalled sweeps.
        if abs(lam1 - a22) <= abs(lam2 - a22):
            mu = lam1
        else:
            mu = lam2
        if stall > 0 and stall % 8 == 0:
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        for i in range(lo, hi + 1):
            h[i, i] -= mu
        for k in range(lo, hi):
            f = h[k, k]
            gg = h[k + 1, k]
            r = np.sqrt(abs(f) ** 2 + abs(gg) ** 2)
            if r == 0.0:
                c = 1.0
                s = 0.0 + 0.0j
            elif abs(f) == 0.0:
                c = 0.0
                s = gg.conjugate() / r
            else:
                c = abs(f) / r
                s = (f / abs(f)) * gg.conjugate() / r
            cs[k] = c
            sn[k] = s
            for j in range(k, hi + 1):
                t1 = h[k, j]
                t2 = h[k + 1, j]
                h[k, j] = c * t1 + s * t2
                h[k + 1, j] = -s.conjugate() * t1 + c * t2
        for k in range(lo, hi):
            c = cs[k]
            s = sn[k]
            imax = min(k + 2, hi)
            for i in range(lo, imax + 1):
                t1 = h[i, k]
                t2 = h[i, k + 1]
                h[i, k] = c * t1 + s.conjugate() * t2
                h[i, k + 1] = -s * t1 + c * t2
        for i in range(lo, hi + 1):
            h[i, i] += mu
        iters += 1
        stall += 1
    return evals, converged, iters


if NUMBA_ENABLED:
    volterra_trap = njit(cache=True)(_volterra_trap_loop)
    eigvals_qr = njit(cache=True)(eigvals_qr_py)
else:
    volterra_trap = volterra_trap_py
    eigvals_qr = eigvals_qr_py

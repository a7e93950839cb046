"""Wootters concurrence and detection of dark (zero-concurrence) periods.

The generic route forms zeta = rho (sy x sy) rho* (sy x sy), takes its
eigenvalues lambda_i (real and non-negative up to roundoff), and returns
max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)} with the roots in
decreasing order. Closed-form routes for X states and for the two
one-parameter entangled families provide independent cross-checks.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ValidationError
from .numerics import eigenvalues
from .pair_dynamics import XState
from .states import DensityMatrix

# sigma_y tensor sigma_y in the excited-first basis: anti-diagonal (-1, 1, 1, -1).
_SY = np.array([[0.0, 1.0j], [-1.0j, 0.0]])
SPIN_FLIP = np.kron(_SY, _SY).real.copy()
SPIN_FLIP.flags.writeable = False

IMAG_TOL = 1e-10
NEG_TOL = 1e-10
# Mathematically-zero eigenvalues of zeta come back as O(1e-16) noise which
# sqrt would amplify to ~1e-8; snap them to zero. The smallest genuinely
# nonzero eigenvalues handled anywhere in the package are > 1e-6.
ZERO_SNAP = 1e-12

DEAD_TOL = 1e-9


def _clean_spectrum(values):
    if float(np.max(np.abs(values.imag))) > IMAG_TOL:
        raise ValidationError("zeta spectrum has a non-negligible imaginary part; "
                              "input is not a valid density matrix")
    re = values.real.copy()
    if float(np.min(re)) < -NEG_TOL:
        raise ValidationError(f"zeta spectrum has eigenvalue {float(np.min(re)):.3e} < -{NEG_TOL}")
    re[np.abs(re) < ZERO_SNAP] = 0.0
    return re


def concurrence(rho: DensityMatrix, tol=1e-12, max_iter=None) -> float:
    """Concurrence of a two-qubit density matrix via the zeta eigensolve."""
    if rho.dim != 4:
        raise DimensionError(f"concurrence needs a two-qubit state, got dim {rho.dim}")
    m = rho.matrix
    zeta = m @ SPIN_FLIP @ m.conj() @ SPIN_FLIP
    result = eigenvalues(zeta, tol=tol, max_iter=max_iter)
    if not result.converged:
        raise ValidationError(f"eigensolver did not converge after {result.iterations} sweeps")
    roots = np.sqrt(np.sort(_clean_spectrum(result.values))[::-1])
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def concurrence_x(x: XState) -> float:
    """Concurrence of an X state: 2 max{0, |rho23| - sqrt(r11 r44),
    |rho14| - sqrt(r22 r33)}. Equals the eigensolve route on the embedded
    matrix."""
    d = np.maximum(x.diag, 0.0)
    inner = abs(x.rho23) - np.sqrt(d[0] * d[3])
    outer = abs(x.rho14) - np.sqrt(d[1] * d[2])
    return float(2.0 * max(0.0, inner, outer))


def concurrence_phi_signed(alpha, p):
    """Pre-clamp value behind :func:`concurrence_phi`:
    2 sqrt(1-alpha^2) p alpha, never negative for this family."""
    alpha = np.asarray(alpha, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    value = 2.0 * np.sqrt(1.0 - alpha * alpha) * p * alpha
    return float(value) if value.ndim == 0 else value


def concurrence_phi(alpha, p):
    """Closed-form concurrence of the evolved alpha|01> + beta|10> family:
    max{0, 2 sqrt(1-alpha^2) p alpha}. Independent of the phase of beta."""
    value = np.maximum(0.0, concurrence_phi_signed(alpha, p))
    return float(value) if np.ndim(value) == 0 else value


def concurrence_psi_signed(alpha, p):
    """Pre-clamp value behind :func:`concurrence_psi`:
    2 sqrt(1-alpha^2) p [alpha - sqrt(1-alpha^2)(1-p)], strictly negative
    inside genuine dark periods."""
    alpha = np.asarray(alpha, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    beta = np.sqrt(1.0 - alpha * alpha)
    value = 2.0 * beta * p * (alpha - beta * (1.0 - p))
    return float(value) if value.ndim == 0 else value


def concurrence_psi(alpha, p):
    """Closed-form concurrence of the evolved alpha|00> + beta|11> family:
    max{0, 2 sqrt(1-alpha^2) p [alpha - sqrt(1-alpha^2)(1-p)]}.

    The bracket changes sign at p = 1 - alpha/sqrt(1-alpha^2); for
    alpha^2 < 1/2 this produces finite dark periods (sudden death)."""
    value = np.maximum(0.0, concurrence_psi_signed(alpha, p))
    return float(value) if np.ndim(value) == 0 else value


def concurrence_x_signed(x: XState) -> float:
    """Pre-clamp value behind :func:`concurrence_x`:
    2 max{|rho23| - sqrt(r11 r44), |rho14| - sqrt(r22 r33)}."""
    d = np.maximum(x.diag, 0.0)
    inner = abs(x.rho23) - np.sqrt(d[0] * d[3])
    outer = abs(x.rho14) - np.sqrt(d[1] * d[2])
    return float(2.0 * max(inner, outer))


@dataclass(frozen=True)
class Event:
    """A detected interval: kind is "death" (concurrence below the dead
    tolerance) or "revival" (concurrence back above it after a death)."""

    kind: str
    t_start: float
    t_end: float

    @property
    def length(self):
        return self.t_end - self.t_start


def _bisect_crossing(func, level, t_lo, t_hi, iters=80):
    # func(t_lo) and func(t_hi) straddle `level`; return the crossing time.
    f_lo = func(t_lo) - level
    for _ in range(iters):
        mid = 0.5 * (t_lo + t_hi)
        if func(mid) - level > 0.0:
            if f_lo > 0.0:
                t_lo = mid
            else:
                t_hi = mid
        else:
            if f_lo > 0.0:
                t_hi = mid
            else:
                t_lo = mid
        if t_hi - t_lo <= 1e-13 * max(1.0, abs(t_hi)):
            break
    return 0.5 * (t_lo + t_hi)


def detect_events(times, values, dead_tol=DEAD_TOL, refine=None, min_length=0.1):
    """Find dark periods and revivals in a sampled concurrence trace.

    A candidate death interval is a maximal run of at least two consecutive
    samples below ``dead_tol``. Candidates must be told apart from curves
    that merely touch zero at isolated points and dip below any finite
    tolerance in a window that shrinks with it (the one-excitation family
    does this at every survival-probability zero, quartically so at
    alpha^2 = 1/2):

    * With ``refine`` given -- a callable t -> signed concurrence, i.e. the
      closed-form expression *before* its zero clamp (see
      ``concurrence_psi_signed`` and friends) -- a candidate is a death
      interval iff the signed value is below ``-dead_tol`` at the interior
      minimum; genuine dark periods are exactly where that expression is
      negative. Both endpoints are then sharpened by bisection between the
      bracketing samples.
    * Grid-only traces fall back to requiring length >= ``min_length``
      (dark periods carry finite, tolerance-independent width; touching
      windows at the default tolerance are narrower than the default floor
      for all but marginal parameters).

    Each death interval that ends before the trace does opens a revival
    event lasting until the next death interval or the end of the trace.
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if times.ndim != 1 or times.size < 2 or times.shape != values.shape:
        raise ValidationError("need matching 1-D times/values with at least 2 samples")
    if np.any(np.diff(times) <= 0):
        raise ValidationError("times must be strictly increasing")
    if dead_tol <= 0:
        raise ValidationError(f"dead_tol must be positive, got {dead_tol}")

    dead = values < dead_tol
    events = []
    deaths = []
    i = 0
    n = times.size
    while i < n:
        if not dead[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and dead[j + 1]:
            j += 1
        if j > i:  # at least two samples -> positive length at grid resolution
            t_start = times[i]
            t_end = times[j]
            if refine is not None:
                k_min = i + int(np.argmin(values[i:j + 1]))
                genuine = refine(times[k_min]) < -dead_tol
                if genuine:
                    if i > 0:
                        t_start = _bisect_crossing(refine, dead_tol, times[i - 1], times[i])
                    if j + 1 < n:
                        t_end = _bisect_crossing(refine, dead_tol, times[j], times[j + 1])
            else:
                genuine = t_end - t_start >= min_length
            if genuine:
                deaths.append(Event("death", float(t_start), float(t_end)))
        i = j + 1
    for idx, death in enumerate(deaths):
        events.append(death)
        if death.t_end < times[-1] - 1e-15:
            next_start = deaths[idx + 1].t_start if idx + 1 < len(deaths) else float(times[-1])
            events.append(Event("revival", death.t_end, next_start))
    return events


@dataclass(frozen=True)
class ConcurrenceTrace:
    """Sampled concurrence with its detected death/revival intervals."""

    times: np.ndarray
    values: np.ndarray
    events: tuple

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if v.size and (v.min() < -1e-12 or v.max() > 1.0 + 1e-9):
            raise ValidationError(f"concurrence values outside [0, 1]: [{v.min()}, {v.max()}]")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "events", tuple(self.events))

    def death_intervals(self):
        return [e for e in self.events if e.kind == "death"]

    def revivals(self):
        return [e for e in self.events if e.kind == "revival"]


def build_trace(times, values, dead_tol=DEAD_TOL, refine=None, min_length=0.1) -> ConcurrenceTrace:
    """Bundle a sampled concurrence curve with its detected events."""
    events = detect_events(times, values, dead_tol=dead_tol, refine=refine,
                           min_length=min_length)
    return ConcurrenceTrace(np.asarray(times, dtype=np.float64),
                            np.asarray(values, dtype=np.float64),
                            tuple(events))

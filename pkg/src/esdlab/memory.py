"""Excited-state survival probability of a qubit damped by a lossy-cavity
reservoir with Lorentzian spectral density.

The reservoir is characterized by the qubit relaxation rate gamma0 and the
spectral width lam; its memory kernel is exponential, f(tau) =
(gamma0*lam/2) exp(-lam*tau). All public times are dimensionless gamma0*t
(set gamma0=1 and pass lam as the ratio lam/gamma0).

The survival probability p(t) is available four ways: the closed form in
either coupling regime, two independent numerical solutions of the memory
equation (an exact ODE reduction and direct product-integration quadrature),
and the flat-spectrum Markovian reference exp(-gamma0*t). The numerical
routes solve the amplitude equation g' = -int f(t-s) g(s) ds with g(0)=1 and
report p = |g|^2, which is what the closed form is the square of.
"""

from dataclasses import dataclass

import numpy as np

from .errors import RegimeError, ValidationError
from .numerics import ode_rk4, volterra_product_integration

CRITICAL_TOL = 1e-12

METHODS = ("closed_form", "volterra_ode", "volterra_quadrature", "markov_limit")


@dataclass(frozen=True)
class ReservoirSpec:
    """Lorentzian reservoir parameters.

    gamma0 sets the relaxation time tau_r ~ 1/gamma0, lam the reservoir
    correlation time tau_b ~ 1/lam. Coupling is strong (oscillatory decay
    with discrete zeros) for gamma0 > lam/2 and weak (monotone decay)
    for gamma0 < lam/2.
    """

    gamma0: float
    lam: float

    def __post_init__(self):
        if not self.gamma0 > 0:
            raise ValidationError(f"gamma0 must be positive, got {self.gamma0}")
        if not self.lam > 0:
            raise ValidationError(f"lam must be positive, got {self.lam}")

    @property
    def tau_b(self):
        return 1.0 / self.lam

    @property
    def tau_r(self):
        return 1.0 / self.gamma0

    @property
    def regime(self):
        gap = self.gamma0 - 0.5 * self.lam
        if abs(gap) <= CRITICAL_TOL:
            return "critical"
        return "strong" if gap > 0 else "weak"

    @property
    def d(self):
        """Oscillation rate sqrt(2*gamma0*lam - lam^2) of the strong regime."""
        if self.regime != "strong":
            raise RegimeError(f"d is defined in the strong regime only (regime is {self.regime})")
        return float(np.sqrt(2.0 * self.gamma0 * self.lam - self.lam * self.lam))

    @property
    def d_weak(self):
        """Relaxation-rate split sqrt(lam^2 - 2*gamma0*lam) of the weak regime."""
        if self.regime != "weak":
            raise RegimeError(f"d_weak is defined in the weak regime only (regime is {self.regime})")
        return float(np.sqrt(self.lam * self.lam - 2.0 * self.gamma0 * self.lam))


def correlation_kernel(spec):
    """Reservoir correlation function f(tau) = (gamma0*lam/2) exp(-lam*tau).

    This is the frequency integral of the Lorentzian spectral density
    J(w) = gamma0*lam^2 / (2*pi*((w0-w)^2 + lam^2)) weighted by
    exp(i*(w0-w)*tau); the Lorentzian makes it a pure exponential with
    decay rate lam and weight f(0) = gamma0*lam/2.
    """
    amp = 0.5 * spec.gamma0 * spec.lam
    lam = spec.lam

    def kernel(tau):
        return amp * np.exp(-lam * np.asarray(tau))

    return kernel


def _amplitude_strong(spec, t):
    d = spec.d
    t = np.asarray(t, dtype=np.float64)
    return np.exp(-0.5 * spec.lam * t) * (np.cos(0.5 * d * t)
                                          + (spec.lam / d) * np.sin(0.5 * d * t))


def p_closed_strong(spec, t):
    """Closed-form survival probability in the strong regime,
    exp(-lam*t) * [cos(d*t/2) + (lam/d) sin(d*t/2)]^2."""
    if spec.regime != "strong":
        raise RegimeError(f"strong-regime closed form called in {spec.regime} regime")
    amp = _amplitude_strong(spec, t)
    return amp * amp


def p_closed_weak(spec, t):
    """Closed-form survival probability in the weak regime: the strong form
    with hyperbolic functions, exp(-lam*t) * [cosh(D*t/2) + (lam/D) sinh(D*t/2)]^2
    where D = sqrt(lam^2 - 2*gamma0*lam). Strictly positive and decreasing.

    Evaluated as a sum of two decaying exponentials (both exponents are
    non-positive since D < lam), which stays finite where the cosh/sinh
    product would overflow."""
    if spec.regime != "weak":
        raise RegimeError(f"weak-regime closed form called in {spec.regime} regime")
    dw = spec.d_weak
    t = np.asarray(t, dtype=np.float64)
    ratio = spec.lam / dw
    slow = np.exp(0.5 * (dw - spec.lam) * t)
    fast = np.exp(-0.5 * (dw + spec.lam) * t)
    amp = fast + 0.5 * (1.0 + ratio) * (slow - fast)
    return amp * amp


def p_closed(spec, t):
    """Regime-dispatching closed form; the critical point gamma0 = lam/2 uses
    the removable-singularity limit exp(-lam*t) * (1 + lam*t/2)^2."""
    regime = spec.regime
    if regime == "strong":
        return p_closed_strong(spec, t)
    if regime == "weak":
        return p_closed_weak(spec, t)
    t = np.asarray(t, dtype=np.float64)
    amp = np.exp(-0.5 * spec.lam * t) * (1.0 + 0.5 * spec.lam * t)
    return amp * amp


def p_markov(spec, t):
    """Flat-spectrum Markovian reference exp(-gamma0*t)."""
    return np.exp(-spec.gamma0 * np.asarray(t, dtype=np.float64))


def p_volterra(spec, t_max, h, variant="ode_reduction"):
    """Survival probability from the memory equation, solved numerically.

    variant="ode_reduction" exploits the exponential kernel exactly: with
    z(t) = int_0^t exp(-lam*(t-s)) g(s) ds the memory equation closes into
    g' = -(gamma0*lam/2) z, z' = g - lam*z, integrated by fixed-step RK4.
    variant="quadrature" solves the integro-differential equation directly by
    trapezoidal product integration (second order in h).

    Returns (times, p_values) sampled on the solver grid.
    """
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    if variant == "ode_reduction":
        rate = 0.5 * spec.gamma0 * spec.lam
        lam = spec.lam

        def deriv(_t, y):
            return np.array([-rate * y[1], y[0] - lam * y[1]])

        times, states = ode_rk4(deriv, np.array([1.0, 0.0]), 0.0, t_max, h)
        g = states[:, 0]
        return times, g * g
    if variant == "quadrature":
        times, g = volterra_product_integration(correlation_kernel(spec), 1.0, t_max, h)
        return times, np.abs(g) ** 2
    raise ValueError(f"unknown variant {variant!r}; use 'ode_reduction' or 'quadrature'")


def p_zeros(spec, n_max):
    """The first n_max zeros t_n = 2*(n*pi - arctan(d/lam))/d of the
    strong-regime survival probability, n = 1..n_max (strictly increasing)."""
    if spec.regime != "strong":
        raise RegimeError(f"survival probability has no zeros in the {spec.regime} regime")
    if n_max < 1:
        raise ValidationError(f"n_max must be >= 1, got {n_max}")
    d = spec.d
    n = np.arange(1, n_max + 1, dtype=np.float64)
    return 2.0 * (n * np.pi - np.arctan(d / spec.lam)) / d


@dataclass(frozen=True)
class MemoryFunction:
    """Survival-probability evaluator for a fixed reservoir and method.

    Closed-form and Markov methods evaluate pointwise. The Volterra methods
    solve once on a uniform grid up to ``t_max`` (required) with step ``h``
    and interpolate linearly in between; queries at grid multiples are exact.
    """

    spec: ReservoirSpec
    method: str = "closed_form"
    t_max: float | None = None
    h: float = 1e-3

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.method.startswith("volterra"):
            if self.t_max is None or self.t_max <= 0:
                raise ValidationError("volterra methods need a positive t_max")
            variant = "ode_reduction" if self.method == "volterra_ode" else "quadrature"
            times, values = p_volterra(self.spec, self.t_max, self.h, variant)
            object.__setattr__(self, "_grid", (times, values))

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        if self.method == "closed_form":
            return p_closed(self.spec, t)
        if self.method == "markov_limit":
            return p_markov(self.spec, t)
        times, values = self._grid
        return np.interp(t, times, values)

    def zeros(self, n_max):
        return p_zeros(self.spec, n_max)

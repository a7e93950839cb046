import numpy as np
import pytest

from esdlab.channels import apply_map
from esdlab.damping import channel_at_time, damping_channel
from esdlab.errors import ValidationError
from esdlab.memory import ReservoirSpec, p_closed_strong, p_zeros
from esdlab.sampling import random_density_matrix
from esdlab.states import DensityMatrix

STRONG = ReservoirSpec(1.0, 0.1)


def test_identity_at_full_survival():
    snap = damping_channel(1.0)
    eye = np.eye(2, dtype=complex)
    assert np.abs(snap.kraus.operators[0] - eye).max() < 1e-15
    assert np.abs(snap.kraus.operators[1]).max() < 1e-15


def test_complete_emission_at_zero_survival():
    excited = DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
    out = apply_map(damping_channel(0.0).map, excited).matrix
    assert abs(out[1, 1] - 1.0) < 1e-15


def test_quarter_survival_frozen_values():
    # rho11 = rho10 = 0.5 at p = 0.25: populations scale by p, coherences by
    # sqrt(p) = 0.5, ground gains 0.5 * 0.75.
    rho = DensityMatrix(np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex))
    out = apply_map(damping_channel(0.25).map, rho).matrix
    assert abs(out[0, 0] - 0.125) < 1e-15
    assert abs(out[0, 1] - 0.25) < 1e-15
    assert abs(out[1, 1] - 0.875) < 1e-15


def test_kraus_and_map_agree_on_dense_grid(rng):
    for p in np.linspace(0.0, 1.0, 41):
        snap = damping_channel(p)
        rho = random_density_matrix(rng, 2)
        direct = sum(k @ rho.matrix @ k.conj().T for k in snap.kraus.operators)
        via_map = apply_map(snap.map, rho).matrix
        assert np.abs(direct - via_map).max() < 1e-13


def test_coherence_contraction_is_exactly_sqrt_p():
    plus = DensityMatrix(0.5 * np.ones((2, 2), dtype=complex))
    for p in (0.1, 0.36, 0.81):
        out = apply_map(damping_channel(p).map, plus).matrix
        assert abs(abs(out[0, 1]) - 0.5 * np.sqrt(p)) < 1e-15


def test_excited_population_linear_in_input(rng):
    p = 0.37
    dmap = damping_channel(p).map
    for r11 in (0.0, 0.25, 0.6, 1.0):
        rho = DensityMatrix(np.diag([r11, 1.0 - r11]).astype(complex))
        out = apply_map(dmap, rho).matrix
        assert abs(out[0, 0] - p * r11) < 1e-15


def test_clamp_window():
    assert damping_channel(-1e-10).p == 0.0
    assert damping_channel(1.0 + 1e-10).p == 1.0
    with pytest.raises(ValidationError):
        damping_channel(-1e-6)
    with pytest.raises(ValidationError):
        damping_channel(1.001)


def test_channel_at_time_endpoints():
    snap = channel_at_time(STRONG, 0.0)
    assert snap.p == 1.0
    t1 = p_zeros(STRONG, 1)[0]
    assert channel_at_time(STRONG, t1).p < 1e-20
    with pytest.raises(ValidationError):
        channel_at_time(STRONG, -1.0)


def test_channel_at_time_strong_value():
    snap = channel_at_time(STRONG, 1.0)
    assert abs(snap.p - p_closed_strong(STRONG, 1.0)) < 1e-15
    assert abs(snap.p - 0.9524) < 1e-4


def test_channel_at_time_volterra_method():
    snap = channel_at_time(STRONG, 2.0, method="volterra_ode")
    assert abs(snap.p - p_closed_strong(STRONG, 2.0)) < 1e-8
    snap = channel_at_time(STRONG, 2.0, method="volterra_quadrature")
    assert abs(snap.p - p_closed_strong(STRONG, 2.0)) < 1e-6

import numpy as np
import pytest

from esdlab.channels import apply_map, product_extend
from esdlab.damping import damping_channel
from esdlab.errors import ValidationError
from esdlab.pair_dynamics import (XState, crosscheck, evolve_closed_form,
                                  evolve_elements, evolve_x_state,
                                  x_state_from_density)
from esdlab.sampling import random_density_matrix, random_x_state
from esdlab.states import (DensityMatrix, make_phi, make_psi, make_werner,
                           pure_to_density)

SWAP = np.array([0, 2, 1, 3])  # exchanges the two qubits in the joint basis


def test_survival_one_is_identity(rng):
    rho = random_density_matrix(rng)
    out = evolve_closed_form(rho, 1.0)
    assert np.abs(out.matrix - rho.matrix).max() < 1e-15


def test_survival_zero_sends_everything_to_ground(rng):
    rho = random_density_matrix(rng)
    out = evolve_closed_form(rho, 0.0).matrix
    expect = np.zeros((4, 4))
    expect[3, 3] = 1.0
    assert np.abs(out - expect).max() < 1e-15


def test_frozen_psi_third_at_half_survival():
    # alpha^2 = 1/3, delta = 0, p = 0.5: populations (1/6, 1/6, 1/6, 1/2)
    # and corner coherence sqrt(2)/3 * 0.5.
    rho0 = pure_to_density(make_psi(np.sqrt(1.0 / 3.0), 0.0))
    out = evolve_closed_form(rho0, 0.5).matrix
    assert abs(out[0, 0] - 1.0 / 6.0) < 1e-15
    assert abs(out[1, 1] - 1.0 / 6.0) < 1e-15
    assert abs(out[2, 2] - 1.0 / 6.0) < 1e-15
    assert abs(out[3, 3] - 0.5) < 1e-15
    assert abs(out[0, 3] - np.sqrt(2.0) / 3.0 * 0.5) < 1e-15


def test_trace_is_exactly_one(rng):
    # left-to-right population sum, the association the trace-completion
    # construction pins down
    for _ in range(50):
        rho = random_density_matrix(rng)
        p = float(rng.random())
        out = evolve_closed_form(rho, p)
        assert sum(out.matrix.diagonal()) == 1.0 + 0.0j


def test_positivity_over_grid(rng):
    for _ in range(20):
        rho = random_density_matrix(rng)
        for p in np.linspace(0.0, 1.0, 11):
            out = evolve_closed_form(rho, p)
            assert float(np.linalg.eigvalsh(out.matrix).min()) > -1e-10


def test_qubit_swap_commutes_with_evolution(rng):
    for _ in range(20):
        rho = random_density_matrix(rng)
        p = float(rng.random())
        swapped = DensityMatrix(rho.matrix[np.ix_(SWAP, SWAP)])
        a = evolve_closed_form(swapped, p).matrix
        b = evolve_closed_form(rho, p).matrix[np.ix_(SWAP, SWAP)]
        assert np.abs(a - b).max() < 1e-15


def test_x_pattern_is_preserved_exactly(rng):
    mask = np.ones((4, 4), dtype=bool)
    mask[np.arange(4), np.arange(4)] = False
    for corner in ((0, 3), (3, 0), (1, 2), (2, 1)):
        mask[corner] = False
    for _ in range(20):
        x = random_x_state(rng)
        out = evolve_closed_form(x.embed(), float(rng.random())).matrix
        assert np.all(out[mask] == 0.0)


def test_x_fast_path_matches_full_map(rng):
    for _ in range(50):
        x = random_x_state(rng)
        p = float(rng.random())
        fast = evolve_x_state(x, p).embed().matrix
        full = evolve_closed_form(x.embed(), p).matrix
        assert np.abs(fast - full).max() < 1e-15


def test_x_state_examples():
    bell_phi = x_state_from_density(make_werner(1.0))
    out = evolve_x_state(bell_phi, 0.5)
    assert np.abs(out.diag - np.array([0.0, 0.25, 0.25, 0.5])).max() < 1e-15
    assert abs(out.rho23 - 0.25) < 1e-15

    werner = x_state_from_density(make_werner(1.0))
    assert np.abs(evolve_x_state(werner, 1.0).embed().matrix - werner.embed().matrix).max() < 1e-15

    bell_psi = x_state_from_density(pure_to_density(make_psi(np.sqrt(0.5), 0.0)))
    for p in (0.2, 0.7):
        assert abs(evolve_x_state(bell_psi, p).rho14 - 0.5 * p) < 1e-15


def test_x_state_classification():
    with pytest.raises(ValidationError):
        x_state_from_density(pure_to_density(make_phi(np.sqrt(0.5), 0.0)).__class__(
            np.full((4, 4), 0.25, dtype=complex)))
    x = x_state_from_density(make_werner(0.4))
    assert isinstance(x, XState)
    with pytest.raises(ValidationError):
        XState(diag=np.array([0.5, 0.5, 0.25, -0.25]), rho14=0.0, rho23=0.0)
    with pytest.raises(ValidationError):
        XState(diag=np.array([0.25, 0.25, 0.25, 0.25]), rho14=0.5, rho23=0.0)


def test_crosscheck_small_sweep(rng):
    worst = 0.0
    for _ in range(100):
        rho = random_density_matrix(rng)
        for p in (0.0, 0.3, 0.7, 1.0):
            worst = max(worst, crosscheck(rho, p))
    assert worst < 1e-12


def test_crosscheck_identity_is_roundoff_only(rng):
    rho = random_density_matrix(rng)
    assert crosscheck(rho, 1.0) < 1e-15


def test_both_routes_keep_x_inputs_x(rng):
    mask = np.ones((4, 4), dtype=bool)
    mask[np.arange(4), np.arange(4)] = False
    for corner in ((0, 3), (3, 0), (1, 2), (2, 1)):
        mask[corner] = False
    x = random_x_state(rng)
    p = 0.42
    closed = evolve_closed_form(x.embed(), p).matrix
    single = damping_channel(p).map
    tensored = apply_map(product_extend([single, single]), x.embed()).matrix
    assert np.abs(closed[mask]).max() < 1e-15
    assert np.abs(tensored[mask]).max() < 1e-15


def test_wrong_basis_ordering_fails_loudly(rng):
    # Negative control: evolving in a ground-state-first ordering (index
    # reversal) must disagree with the tensor route by a large margin for a
    # state with excited population.
    reverse = np.array([3, 2, 1, 0])
    rho = pure_to_density(make_psi(np.sqrt(1.0 / 3.0), 0.0))
    p = 0.5
    wrong = evolve_elements(rho.matrix[np.ix_(reverse, reverse)], [p])[0]
    wrong = wrong[np.ix_(reverse, reverse)]
    single = damping_channel(p).map
    correct = apply_map(product_extend([single, single]), rho).matrix
    assert np.abs(wrong - correct).max() > 0.1


def test_survival_probability_validation(rng):
    rho = random_density_matrix(rng)
    with pytest.raises(ValidationError):
        evolve_closed_form(rho, 1.2)
    with pytest.raises(ValidationError):
        evolve_closed_form(rho, -0.5)
    assert evolve_closed_form(rho, -1e-10).matrix[3, 3] == 1.0


def test_evolve_elements_batch_matches_scalar(rng):
    rho = random_density_matrix(rng)
    ps = rng.random(7)
    batch = evolve_elements(rho.matrix, ps)
    for k, p in enumerate(ps):
        single = evolve_closed_form(rho, float(p)).matrix
        assert np.abs(batch[k] - single).max() < 1e-15

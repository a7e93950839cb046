import numpy as np
import pytest

from esdlab.channels import (DynamicalMap, KrausSet, apply_map, choi_matrix,
                             choi_min_eigenvalue, from_kraus, product_extend)
from esdlab.concurrence import concurrence
from esdlab.damping import damping_channel
from esdlab.errors import DimensionError, ValidationError
from esdlab.sampling import random_density_matrix
from esdlab.states import DensityMatrix, make_werner


def identity_map(dim=2):
    return from_kraus(KrausSet((np.eye(dim, dtype=complex),)))


def test_identity_kraus_gives_identity_tensor():
    t = identity_map().tensor
    d = np.eye(2)
    expect = np.einsum("il,km->iklm", d, d)
    assert np.abs(t - expect).max() < 1e-15


def test_full_survival_is_identity_channel():
    t = damping_channel(1.0).map.tensor
    assert np.abs(t - identity_map().tensor).max() < 1e-15


def test_quarter_survival_matches_element_map(rng):
    # p = 0.25 scales the excited population by 0.25, coherences by 0.5,
    # and feeds 0.75 of the excited population into the ground state.
    dmap = damping_channel(0.25).map
    rho = random_density_matrix(rng, 2)
    out = apply_map(dmap, rho).matrix
    r = rho.matrix
    assert abs(out[0, 0] - r[0, 0] * 0.25) < 1e-15
    assert abs(out[0, 1] - r[0, 1] * 0.5) < 1e-15
    assert abs(out[1, 0] - r[1, 0] * 0.5) < 1e-15
    assert abs(out[1, 1] - (r[1, 1] + 0.75 * r[0, 0])) < 1e-15


def test_apply_identity_leaves_state(rng):
    rho = random_density_matrix(rng, 2)
    assert np.abs(apply_map(identity_map(), rho).matrix - rho.matrix).max() < 1e-15


def test_zero_survival_decays_to_ground():
    excited = DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
    out = apply_map(damping_channel(0.0).map, excited).matrix
    assert np.abs(out - np.diag([0.0, 1.0])).max() < 1e-15


def test_half_survival_scales_coherence_by_sqrt_half():
    plus = DensityMatrix(0.5 * np.ones((2, 2), dtype=complex))
    out = apply_map(damping_channel(0.5).map, plus).matrix
    assert abs(abs(out[0, 1]) - 0.5 * np.sqrt(0.5)) < 1e-15


def test_from_kraus_equals_direct_sum(rng):
    for p in (0.0, 0.3, 0.9):
        snap = damping_channel(p)
        rho = random_density_matrix(rng, 2)
        direct = sum(k @ rho.matrix @ k.conj().T for k in snap.kraus.operators)
        assert np.abs(apply_map(snap.map, rho).matrix - direct).max() < 1e-13


def test_product_of_identities_is_joint_identity():
    joint = product_extend([identity_map(), identity_map()])
    assert joint.dim == 4
    d = np.eye(4)
    expect = np.einsum("il,km->iklm", d, d)
    assert np.abs(joint.tensor - expect).max() < 1e-15


def test_product_map_factorizes_on_product_states(rng):
    for _ in range(20):
        pa, pb = rng.random(2)
        ma = damping_channel(pa).map
        mb = damping_channel(pb).map
        rho_a = random_density_matrix(rng, 2)
        rho_b = random_density_matrix(rng, 2)
        joint_in = DensityMatrix(np.kron(rho_a.matrix, rho_b.matrix))
        joint_out = apply_map(product_extend([ma, mb]), joint_in).matrix
        factored = np.kron(apply_map(ma, rho_a).matrix, apply_map(mb, rho_b).matrix)
        assert np.abs(joint_out - factored).max() < 1e-12


def test_identity_times_decayed_kills_bell_entanglement():
    joint = product_extend([identity_map(), damping_channel(0.0).map])
    out = apply_map(joint, make_werner(1.0))
    assert concurrence(out) < 1e-12


def test_product_extend_three_qubits_is_valid():
    maps = [damping_channel(p).map for p in (0.2, 0.5, 0.8)]
    joint = product_extend(maps)  # constructor re-checks TP/hermiticity/CP
    assert joint.dim == 8
    assert choi_min_eigenvalue(joint) > -1e-10


def test_choi_positivity_on_damping_grid():
    for p in np.linspace(0.0, 1.0, 21):
        joint = product_extend([damping_channel(p).map] * 2)
        choi = choi_matrix(joint)
        assert np.abs(choi - choi.conj().T).max() < 1e-12
        assert float(np.linalg.eigvalsh(choi).min()) > -1e-10


def test_kraus_completeness_enforced():
    with pytest.raises(ValidationError):
        KrausSet((0.5 * np.eye(2, dtype=complex),))
    with pytest.raises(ValidationError):
        KrausSet(())


def test_map_invariants_enforced():
    bad = np.zeros((2, 2, 2, 2), dtype=complex)  # wildly non-TP
    with pytest.raises(ValidationError):
        DynamicalMap(bad)
    with pytest.raises(DimensionError):
        DynamicalMap(np.zeros((2, 2, 2), dtype=complex))


def test_apply_dimension_mismatch(rng):
    with pytest.raises(DimensionError):
        apply_map(identity_map(2), random_density_matrix(rng, 4))


def test_product_extend_empty_errors():
    with pytest.raises(ValidationError):
        product_extend([])

import json

import numpy as np
import pytest
from scipy.stats import unitary_group

from nonrevival.resource import (
    Budget,
    FreeUnitarySpec,
    ResourcefulStateError,
    is_free_unitary,
    make_free_density_matrix,
    make_free_observable,
    make_free_state,
    make_free_unitary,
    monotone_D,
    monotone_G,
    monotone_R,
    random_free_unitary_spec,
    revival_correlator,
    revival_fidelity,
    revival_fidelity_mixed,
)

from .conftest import random_hermitian_unit, random_unit, synthetic
from .oracles import grid_monotone_G_d4, grid_monotone_R_d4


def random_free_state(spec, c, rng):
    if rng.random() < 0.5:
        return make_free_state(spec, c, random_unit(rng, c.n_rational))
    return make_free_state(spec, c, irrational_index=int(rng.choice(c.irrational_indices)))


def random_free_rho(spec, c, rng):
    G = rng.normal(size=(c.n_rational, c.n_rational)) + 1j * rng.normal(size=(c.n_rational, c.n_rational))
    block = G @ G.conj().T
    w = rng.random(c.n_irrational)
    total = np.trace(block).real + w.sum()
    return make_free_density_matrix(spec, c, block / total, w / total)


def resourceful_state(spec, c, rng):
    """Random superposition with weight on at least one irrational eigenstate and one other."""
    coeff = random_unit(rng, spec.dim)
    return spec.eigenvectors @ coeff


def test_free_states_revive(d8, rng):
    _, spec, c, _ = d8
    for _ in range(50):
        assert revival_fidelity(spec, c, random_free_state(spec, c, rng)) >= 1 - 1e-9


def test_resourceful_states_do_not_revive(d8, rng):
    _, spec, c, _ = d8
    for _ in range(50):
        assert revival_fidelity(spec, c, resourceful_state(spec, c, rng)) <= 1 - 1e-6


def test_two_irrational_superposition_is_resourceful(d8):
    _, spec, c, _ = d8
    B = c.irrational_indices
    psi = (spec.eigenvectors[:, B[0]] + spec.eigenvectors[:, B[1]]) / np.sqrt(2)
    assert revival_fidelity(spec, c, psi) < 1 - 1e-6


def test_make_free_state_rejects_mixing(d4):
    _, spec, c, _ = d4
    with pytest.raises(ResourcefulStateError):
        make_free_state(spec, c, [1, 0], irrational_index=c.irrational_indices[0])
    with pytest.raises(ValueError):
        make_free_state(spec, c, irrational_index=c.rational_indices[0])
    with pytest.raises(ValueError):
        make_free_state(spec, c, [1, 1])


def test_free_unitaries_are_free_and_close_under_algebra(d8, rng):
    _, spec, c, _ = d8
    Us = [make_free_unitary(spec, c, random_free_unitary_spec(c, rng)) for _ in range(5)]
    for U in Us:
        assert np.max(np.abs(U.conj().T @ U - np.eye(8))) < 1e-9
        assert is_free_unitary(spec, c, U)[0]
        assert is_free_unitary(spec, c, U.conj().T)[0]
        for _ in range(5):
            assert revival_fidelity(spec, c, U @ random_free_state(spec, c, rng)) >= 1 - 1e-8
    for U, W in zip(Us, Us[1:]):
        assert is_free_unitary(spec, c, U @ W)[0]


def test_haar_unitary_is_not_free(d8):
    _, spec, c, _ = d8
    U = unitary_group.rvs(8, random_state=5)
    ok, resid = is_free_unitary(spec, c, U)
    assert not ok and resid > 0.1
    with pytest.raises(ValueError, match="not unitary"):
        is_free_unitary(spec, c, 2 * np.eye(8))


def test_evolution_is_free(d8):
    _, spec, c, _ = d8
    U = (spec.eigenvectors * np.exp(-0.37j * spec.eigenvalues)) @ spec.eigenvectors.conj().T
    assert is_free_unitary(spec, c, U)[0]


def test_free_unitary_spec_validation():
    with pytest.raises(ValueError):
        FreeUnitarySpec(np.ones((2, 2)), (0, 1), np.zeros(2))
    with pytest.raises(ValueError):
        FreeUnitarySpec(np.eye(2), (0, 0), np.zeros(2))
    with pytest.raises(ValueError):
        FreeUnitarySpec(np.eye(2), (1, 0), np.zeros(3))


def test_mixed_free_states_revive(d8, rng):
    _, spec, c, _ = d8
    for _ in range(20):
        assert revival_fidelity_mixed(spec, c, random_free_rho(spec, c, rng)) >= 1 - 1e-8


def test_mixed_pure_state_agrees_with_pure_fidelity(d8, rng):
    _, spec, c, _ = d8
    psi = resourceful_state(spec, c, rng)
    rho = np.outer(psi, psi.conj())
    assert revival_fidelity_mixed(spec, c, rho) == pytest.approx(revival_fidelity(spec, c, psi), abs=1e-7)


def _inject(spec, rho, i, j, eps):
    R = spec.to_eigenbasis(rho)
    R[i, j] += eps
    R[j, i] += np.conj(eps)
    return spec.from_eigenbasis(R)


@pytest.mark.parametrize("which", ["AB", "BB"])
def test_forbidden_coherence_breaks_mixed_revival(d8, which):
    _, spec, c, _ = d8
    A, B = c.rational_indices, c.irrational_indices
    rho = make_free_density_matrix(spec, c, np.eye(4) / 8, np.full(4, 1 / 8))
    i, j = (A[0], B[1]) if which == "AB" else (B[0], B[2])
    assert revival_fidelity_mixed(spec, c, _inject(spec, rho, i, j, 0.05)) < 1 - 1e-6


def test_free_observables_have_unit_correlator(d8, rng):
    _, spec, c, _ = d8
    for _ in range(10):
        G = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        O = make_free_observable(spec, c, G + G.conj().T, rng.normal(size=4))
        assert revival_correlator(spec, c, O) >= 1 - 1e-8


@pytest.mark.parametrize("which", ["AB", "BB"])
def test_forbidden_coherence_breaks_correlator(d8, which):
    _, spec, c, _ = d8
    A, B = c.rational_indices, c.irrational_indices
    O = make_free_observable(spec, c, np.eye(4), np.ones(4))
    i, j = (A[0], B[0]) if which == "AB" else (B[1], B[3])
    O = _inject(spec, O, i, j, 0.5)
    O /= np.sqrt(np.vdot(O, O).real / 8)
    assert revival_correlator(spec, c, O) < 1 - 1e-6


def test_correlator_requires_normalization(d4):
    _, spec, c, _ = d4
    with pytest.raises(ValueError, match="normalized"):
        revival_correlator(spec, c, 2 * np.eye(4))


def test_monotone_R_zero_on_free_states(d8, rng):
    _, spec, c, _ = d8
    for _ in range(10):
        assert monotone_R(spec, c, random_free_state(spec, c, rng)).value == pytest.approx(0, abs=1e-8)


def test_monotone_R_bounds_own_nonrevival(d8, rng):
    _, spec, c, _ = d8
    for _ in range(10):
        psi = resourceful_state(spec, c, rng)
        est = monotone_R(spec, c, psi)
        assert est.exhaustive
        assert est.value >= 1 - revival_fidelity(spec, c, psi) - 1e-12


@pytest.mark.parametrize("seed", [0, 1])
def test_monotone_R_invariant_under_free_unitaries(seed, rng):
    _, spec, c, _ = synthetic(5, 3, seed=seed)
    psi = resourceful_state(spec, c, rng)
    base = monotone_R(spec, c, psi, seed=seed).value
    for _ in range(5):
        U = make_free_unitary(spec, c, random_free_unitary_spec(c, rng))
        assert monotone_R(spec, c, U @ psi, seed=seed).value == pytest.approx(base, abs=1e-6)


def test_monotone_budget_is_monotone_in_restarts(rng):
    _, spec, c, _ = synthetic(4, 12, seed=2)
    psi = resourceful_state(spec, c, rng)
    O = random_hermitian_unit(rng, 16)
    for fn, x in ((monotone_R, psi), (monotone_G, O)):
        vals = [fn(spec, c, x, Budget(r, 20), seed=7).value for r in (1, 2, 4, 8)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        est = fn(spec, c, x, Budget(4, 20), seed=7)
        assert not est.exhaustive and len(est.restart_values) == 4
        assert est.restart_values[:2] == fn(spec, c, x, Budget(2, 20), seed=7).restart_values


def test_monotone_search_parallel_matches_serial(rng):
    _, spec, c, _ = synthetic(4, 12, seed=2)
    psi = resourceful_state(spec, c, rng)
    a = monotone_R(spec, c, psi, Budget(4, 10), seed=3, n_jobs=1)
    b = monotone_R(spec, c, psi, Budget(4, 10), seed=3, n_jobs=3)
    assert a.to_dict() == b.to_dict()


def test_monotone_G_zero_on_free_observable(d8, rng):
    _, spec, c, _ = d8
    O = make_free_observable(spec, c, np.eye(4), rng.normal(size=4))
    assert monotone_G(spec, c, O).value == pytest.approx(0, abs=1e-8)


def test_monotone_D_vanishes_on_free_unitaries(d8, rng):
    _, spec, c, _ = d8
    U = make_free_unitary(spec, c, random_free_unitary_spec(c, rng))
    assert monotone_D(spec, c, U, Budget(2, 10)).value == pytest.approx(0, abs=1e-8)


def test_monotone_D_dominates_eigenstate_witness(d8):
    _, spec, c, _ = d8
    U = unitary_group.rvs(8, random_state=9)
    est = monotone_D(spec, c, U, Budget(2, 10), seed=1)
    for j in c.irrational_indices:
        assert est.value >= monotone_R(spec, c, U @ spec.eigenvectors[:, j]).value - 1e-12
    assert est.value > 0.05
    back = json.loads(json.dumps(est.to_dict()))
    assert back["kind"] == "D" and back["budget"] == {"restarts": 2, "iterations": 10}


def test_monotone_budget_validation(d4):
    _, spec, c, _ = d4
    with pytest.raises(ValueError):
        monotone_R(spec, c, spec.eigenvectors[:, 0], Budget(0, 1))


def test_monotones_match_coarse_grid_oracle(d4, rng):
    H, spec, c, _ = d4
    E, V = spec.eigenvalues, spec.eigenvectors
    A, B = c.rational_indices, c.irrational_indices
    psi = random_unit(rng, 4)
    grid = grid_monotone_R_d4(E, V, A, B, c.T, psi, step=0.05)
    est = monotone_R(spec, c, psi).value
    assert est >= grid - 1e-12
    assert est - grid < 5e-3
    O = random_hermitian_unit(rng, 4)
    grid = grid_monotone_G_d4(E, V, A, B, c.T, O, step=0.05)
    est = monotone_G(spec, c, O).value
    assert est >= grid - 1e-12
    assert est - grid < 5e-3


def test_classification_size_mismatch(d4, d8):
    _, spec4, _, _ = d4
    _, _, c8, _ = d8
    with pytest.raises(ValueError, match="classification"):
        revival_fidelity(spec4, c8, spec4.eigenvectors[:, 0])


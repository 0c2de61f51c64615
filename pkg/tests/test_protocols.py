import numpy as np
import pytest
from scipy.linalg import expm

from nonrevival import PauliString
from nonrevival.protocols import (
    NotFreeError,
    estimate_expectation,
    exact_expectation,
    haar_twirl_reference,
    run_recovery,
    weak_measure,
)
from nonrevival.resource import make_free_state

from .conftest import random_hermitian_unit, random_unit, synthetic
from .oracles import weak_measure_circuit


def random_rho(rng, d):
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


@pytest.mark.parametrize("d", [4, 8])
@pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
def test_weak_measure_matches_circuit(rng, d, p):
    rho = random_rho(rng, d)
    got = weak_measure(rho, p).joint_state
    assert np.max(np.abs(got - weak_measure_circuit(rho, p))) < 1e-10


def test_weak_measure_is_a_channel(rng):
    for _ in range(50):
        d = int(rng.choice([2, 3, 4, 8]))
        p = float(rng.uniform(0.01, 0.99))
        rho = random_rho(rng, d)
        out = weak_measure(rho, p)
        J = out.joint_state
        assert abs(np.trace(J) - 1) < 1e-12
        assert np.allclose(J, J.conj().T)
        assert np.linalg.eigvalsh(J).min() > -1e-12
        assert out.dim == d


def test_weak_measure_marginals(rng):
    rho = random_rho(rng, 4)
    out = weak_measure(rho, 0.3)
    sys = out.system_state()
    assert np.allclose(sys, 0.7 * rho + 0.3 * np.diag(np.diag(rho)))
    anc = out.ancilla_state()
    assert anc[0, 0] == pytest.approx(0.7)
    assert np.allclose(np.diag(anc)[1:], 0.3 * np.diag(rho).real)


@pytest.mark.parametrize("p", [0.0, 1.0, 1.5])
def test_weak_measure_strength_range(p):
    with pytest.raises(ValueError):
        weak_measure(np.eye(2) / 2, p)


def _simulate(H, phi, t1, t2, p):
    """Independent end-to-end simulation with matrix exponentials and the circuit channel."""
    U1, U2 = expm(-1j * H * t1), expm(-1j * H * t2)
    phi1 = U1 @ phi
    J = weak_measure_circuit(np.outer(phi1, phi1.conj()), p)
    d = H.shape[0]
    big = np.kron(U2, np.eye(d + 1))
    J = big @ J @ big.conj().T
    return J.reshape(d, d + 1, d, d + 1).trace(axis1=1, axis2=3)


@pytest.mark.parametrize("t1,m,p", [(0.4, 1, 0.1), (2.0, 2, 0.5), (5.5, 1, 0.9)])
def test_recovery_closed_form_matches_simulation(d8, rng, t1, m, p):
    H, spec, c, _ = d8
    phi = make_free_state(spec, c, random_unit(rng, c.n_rational))
    O = PauliString("XZI")
    run = run_recovery(spec, c, phi, t1, m, p, O)
    assert run.closed_form_residual < 1e-9
    want = _simulate(H, phi, t1, run.t2, p)
    assert np.max(np.abs(run.rho_f - want)) < 1e-9
    assert run.exact_reconstruction == pytest.approx(run.direct_expectation, abs=1e-9)
    assert exact_expectation(spec, run, O) == pytest.approx(np.vdot(phi, O.to_matrix() @ phi).real, abs=1e-9)


def test_recovery_on_irrational_eigenstate(d8):
    _, spec, c, _ = d8
    phi = make_free_state(spec, c, irrational_index=c.irrational_indices[1])
    run = run_recovery(spec, c, phi, 1.0, 1, 0.2, PauliString("ZZZ"))
    # only the twirl estimate carries model error
    assert run.exact_reconstruction == pytest.approx(run.direct_expectation, abs=1e-9)


def test_recovery_rejects_resourceful_and_bad_times(d8, rng):
    _, spec, c, _ = d8
    with pytest.raises(NotFreeError):
        run_recovery(spec, c, spec.eigenvectors @ random_unit(rng, 8), 1.0, 1, 0.1, PauliString("XII"))
    phi = make_free_state(spec, c, random_unit(rng, c.n_rational))
    with pytest.raises(ValueError, match="t2"):
        run_recovery(spec, c, phi, 100.0, 1, 0.1, PauliString("XII"))
    with pytest.raises(ValueError):
        run_recovery(spec, c, phi, 1.0, 1, 1.0, PauliString("XII"))


def test_recovery_size_guard():
    from types import SimpleNamespace

    with pytest.raises(MemoryError, match="allow_large"):
        run_recovery(SimpleNamespace(dim=2**7, n_qubits=7), None, None, 1.0, 1, 0.1, None)


def test_estimate_near_truth_for_chaotic_spectrum(rng):
    _, spec, c, _ = synthetic(2, 14, seed=5)
    phi = make_free_state(spec, c, random_unit(rng, 2))
    O = PauliString("ZIII")
    run = run_recovery(spec, c, phi, 1.3, 20, 0.1, O)
    assert run.scar_overlap_diag < 0.5
    assert run.haar_gap < 0.05
    assert estimate_expectation(run, O) == run.estimate
    rec = run.to_record(seed=5)
    assert rec["n"] == 4 and rec["haar_gap"] == run.haar_gap
    assert 0 < rec["overlap_phi_rhof"] <= 1


def test_haar_twirl_reference(rng):
    O = random_hermitian_unit(rng, 4)
    mean, err = haar_twirl_reference(O, 2, 4000, rng)
    assert abs(mean - np.trace(O).real / 4) < 5 * err + 1e-3
    with pytest.raises(ValueError):
        haar_twirl_reference(O, 4, 10)
    with pytest.raises(ValueError):
        haar_twirl_reference(O, 0, 1)

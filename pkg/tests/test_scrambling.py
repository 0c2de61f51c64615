import itertools
from types import SimpleNamespace

import numpy as np
import pytest

from nonrevival import PauliString, build_pxp, build_toy_model, diagonalize
from nonrevival.resource import make_free_observable
from nonrevival.scrambling import (
    MAX_PAULI_TERMS,
    OtocBoundViolation,
    ScramblingSweep,
    SubsystemPair,
    avg_otoc,
    check_otoc_bound,
    decoding_fidelity,
    otoc,
    pauli_weight_overlap,
    pauli_weight_series,
    write_series_csv,
)
from nonrevival.spectral import classify, revival_period

from .conftest import random_hermitian_unit, synthetic
from .oracles import Z, avg_otoc_loops, grid_monotone_G_d4, heisenberg, otoc_expm, pxp_kron, site_op

# Pauli-averaged OTOCs of the periodic PXP chain, computed term by term with
# matrix exponentials and frozen.
FROZEN_AVG = [
    (6, (1,), (6,), 1.5, 0.5720491664021826),
    (6, (1,), (1,), 1.5, 0.348937146671386),
    (5, (1, 2), (4,), 2.0, 0.4911841375349361),
]
FROZEN_Z1_PXP6_T3 = 0.6277259180160697


@pytest.fixture(scope="module")
def pxp6():
    return diagonalize(build_pxp(6))


def test_otoc_matches_expm(rng):
    H = random_hermitian_unit(rng, 8)
    spec = diagonalize(H)
    O1, O2 = PauliString("XZI"), PauliString("IIY")
    got = otoc(spec, O1, O2, 0.9)
    want = otoc_expm(H, O1.to_matrix(), O2.to_matrix(), 0.9)
    assert got == pytest.approx(want, abs=1e-12)


def test_otoc_phase_covariance(rng):
    spec = diagonalize(random_hermitian_unit(rng, 4))
    P, Q = PauliString("XY").to_matrix(), PauliString("ZI").to_matrix()
    base = otoc(spec, P, Q, 1.3)
    for a, b in itertools.product([1, -1, 1j, -1j], repeat=2):
        assert otoc(spec, a * P, b * Q, 1.3) == pytest.approx((a * b) ** 2 * base, abs=1e-12)
    assert otoc(spec, -P, -Q, 1.3) == pytest.approx(base, abs=1e-13)
    assert otoc(spec, 1j * P, -1j * Q, 1.3) == pytest.approx(base, abs=1e-13)


@pytest.mark.parametrize("n,A,D,t,value", FROZEN_AVG)
def test_avg_otoc_frozen(n, A, D, t, value):
    spec = diagonalize(build_pxp(n))
    pair = SubsystemPair(n, A, D)
    assert avg_otoc(spec, pair, t) == pytest.approx(value, abs=1e-10)
    assert avg_otoc(spec, pair, t, method="direct") == pytest.approx(value, abs=1e-10)


def test_avg_otoc_against_loops_pxp8():
    spec = diagonalize(build_pxp(8))
    pair = SubsystemPair(8, (1,), (8,))
    want = avg_otoc_loops(pxp_kron(8), 8, [1], [8], 0.7)
    assert avg_otoc(spec, pair, 0.7) == pytest.approx(want, abs=1e-10)


def test_avg_otoc_at_zero(rng):
    for _ in range(10):
        n = int(rng.integers(2, 7))
        A = tuple(sorted(rng.choice(np.arange(1, n + 1), size=int(rng.integers(1, 3)), replace=False)))
        D = tuple(sorted(rng.choice(np.arange(1, n + 1), size=int(rng.integers(1, 3)), replace=False)))
        spec = diagonalize(random_hermitian_unit(rng, 2**n))
        pair = SubsystemPair(n, A, D)
        assert avg_otoc(spec, pair, 0.0) == pytest.approx(pair.initial_avg_otoc(), abs=1e-9)


def test_decoding_fidelity_at_zero(pxp6):
    assert decoding_fidelity(pxp6, SubsystemPair(6, (1,), (6,)), 0.0) == pytest.approx(0.25, abs=1e-12)
    assert decoding_fidelity(pxp6, SubsystemPair(6, (1,), (1,)), 0.0) == pytest.approx(1.0, abs=1e-12)


def test_sweep_series_is_ordered_and_thread_independent(pxp6):
    sweep = ScramblingSweep(pxp6, SubsystemPair(6, (1,), (6,)))
    times = np.linspace(0, 5, 17)
    serial = sweep.avg_series(times, n_jobs=1)
    threaded = sweep.avg_series(times, n_jobs=4)
    assert np.array_equal(serial, threaded)
    assert serial[0] == pytest.approx(1.0)
    assert np.allclose(sweep.run(times), 1 / (4 * serial))
    assert sweep.run(times)[0] == pytest.approx(0.25)


def test_sweep_guards(pxp6):
    with pytest.raises(ValueError):
        ScramblingSweep(pxp6, SubsystemPair(6, (1,), (2,)), method="fast")
    with pytest.raises(ValueError):
        SubsystemPair(6, (), (1,))
    with pytest.raises(ValueError):
        SubsystemPair(6, (7,), (1,))
    big = SubsystemPair(12, tuple(range(1, 6)), tuple(range(6, 12)))
    assert big.n_terms > MAX_PAULI_TERMS
    with pytest.raises(MemoryError):
        ScramblingSweep(SimpleNamespace(dim=2**12), big)


def test_pauli_weight_series_frozen(pxp6):
    Z1 = PauliString.from_sites(6, {1: "Z"})
    assert pauli_weight_overlap(pxp6, Z1, 3.0) == pytest.approx(FROZEN_Z1_PXP6_T3, abs=1e-10)
    H = pxp_kron(6)
    M = site_op(6, 1, Z)
    series = pauli_weight_series(pxp6, Z1, [0.0, 1.0, 2.5])
    want = [np.trace(heisenberg(H, M, t) @ M).real / 64 for t in (0.0, 1.0, 2.5)]
    assert np.allclose(series, want, atol=1e-11)


def test_free_observable_otoc_revives(d8, rng):
    _, spec, c, _ = d8
    G = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    O1 = make_free_observable(spec, c, G + G.conj().T, rng.normal(size=4))
    tR = revival_period(c)
    for _ in range(5):
        O2 = random_hermitian_unit(rng, 8)
        assert otoc(spec, O1, O2, tR) == pytest.approx(otoc(spec, O1, O2, 0.0), abs=1e-8)


def test_otoc_bound_on_toy_model():
    spec = diagonalize(build_toy_model())
    with pytest.warns(UserWarning):
        c = classify(spec)
    for letters in itertools.product("IXYZ", repeat=2):
        rep = check_otoc_bound(spec, c, PauliString("".join(letters)))
        assert rep.holds
        assert rep.intermediate_bound - 1e-9 <= rep.otoc <= 1 + 1e-9
        assert rep.g_bound <= rep.intermediate_bound + 1e-9


@pytest.mark.parametrize("seed", [0, 1])
def test_otoc_bound_against_grid_oracle(seed):
    _, spec, c, _ = synthetic(2, 2, seed=seed)
    tR = revival_period(c)
    for letters in ("XI", "ZZ", "YX", "IZ"):
        P = PauliString(letters).to_matrix()
        g = grid_monotone_G_d4(spec.eigenvalues, spec.eigenvectors, c.rational_indices,
                               c.irrational_indices, c.T, P, step=0.1)
        val = otoc(spec, P, P, tR).real
        assert 1 - 2 * g - 1e-6 <= val <= 1 + 1e-9


def test_bound_violation_is_raised(d4, monkeypatch):
    _, spec, c, _ = d4
    import nonrevival.scrambling as scr

    monkeypatch.setattr(scr, "otoc", lambda *a: complex(-2.0))
    with pytest.raises(OtocBoundViolation):
        check_otoc_bound(spec, c, PauliString("XI"))
    assert not check_otoc_bound(spec, c, PauliString("XI"), strict=False).holds
    with pytest.raises(TypeError):
        check_otoc_bound(spec, c, np.eye(4))


def test_write_series_csv(tmp_path):
    p = tmp_path / "s.csv"
    write_series_csv(p, [0.0, 0.1], {"f": [1.0, 1 / 3]})
    raw = p.read_bytes()
    assert raw == b"t,f\n0,1\n0.10000000000000001,0.33333333333333331\n"
    with pytest.raises(ValueError):
        write_series_csv(p, [0.0], {"f": [1.0, 2.0]})

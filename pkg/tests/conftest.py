import warnings

import numpy as np
import pytest

from nonrevival import SyntheticSpectrum, build_synthetic, diagonalize
from nonrevival.spectral import classify

RATIONALS = ["0", "1", "1/2", "3/2", "2", "-1", "5/2", "1/3"]
SQUAREFREE = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26]


def synthetic(n_rational: int, n_irrational: int, seed: int, *, shift: int = 0):
    """Generic fixture: rational entries from a fixed list, irrational ones ``c sqrt(m)``.

    Returns ``(H, spec, classification, truth)``.
    """
    rng = np.random.default_rng(seed)
    rats = RATIONALS[:n_rational]
    ms = SQUAREFREE[shift:shift + n_irrational]
    coeffs = rng.choice([-2, -1, 1, 2], size=n_irrational)
    irr = [f"{c}*sqrt({m})" for c, m in zip(coeffs, ms)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        H, truth = build_synthetic(SyntheticSpectrum(rats, irr, seed=seed))
        spec = diagonalize(H)
        c = classify(spec)
    return H, spec, c, truth


def random_unit(rng, n: int) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_hermitian_unit(rng, d: int) -> np.ndarray:
    """Hermitian with unit normalized 2-norm."""
    M = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    M = M + M.conj().T
    return M / np.sqrt(np.vdot(M, M).real / d)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def d4():
    return synthetic(2, 2, seed=11)


@pytest.fixture(scope="session")
def d8():
    return synthetic(4, 4, seed=3)

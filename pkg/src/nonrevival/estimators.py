"""scikit-learn style wrappers around the functional core.

``fit`` takes a Hamiltonian matrix; the learned spectrum and eigenvalue split
are stored in trailing-underscore attributes. Rows of ``X`` are state vectors
(or times, for :class:`DecodingFidelityCurve`).
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import DimensionError, check_hermitian, check_state
from .operators import diagonalize
from .resource import Budget, monotone_R, revival_fidelity
from .scrambling import ScramblingSweep, SubsystemPair
from .spectral import DEFAULT_MAX_DENOMINATOR, DEFAULT_TOLERANCE, check_irrational_spacing, classify

__all__ = ["RevivalAnalyzer", "NonRevivalMonotone", "DecodingFidelityCurve"]


def _check_states(X, dim: int) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != dim:
        raise DimensionError(f"expected states of shape (n_samples, {dim}), got {X.shape}")
    return np.array([check_state(x, dim) for x in X])


class _SpectralFit(BaseEstimator):
    def _fit_spectrum(self, H):
        H = check_hermitian(H)
        self.spectrum_ = diagonalize(H)
        self.classification_ = classify(self.spectrum_, self.tolerance, self.max_denominator)
        self.spacing_violations_ = check_irrational_spacing(self.classification_, self.spectrum_)
        self.n_features_in_ = H.shape[0]
        return self


class RevivalAnalyzer(TransformerMixin, _SpectralFit):
    """Revival fidelity at ``2 pi T`` and the free/resourceful verdict for pure states.

    >>> import numpy as np
    >>> from nonrevival.estimators import RevivalAnalyzer
    >>> est = RevivalAnalyzer().fit(np.diag([0.0, 1.0, 2**0.5, 3**0.5]))
    >>> est.predict(np.eye(4)).tolist()
    [True, True, True, True]
    """

    def __init__(self, tolerance: float = DEFAULT_TOLERANCE, max_denominator: int = DEFAULT_MAX_DENOMINATOR,
                 free_tol: float = 1e-8):
        self.tolerance = tolerance
        self.max_denominator = max_denominator
        self.free_tol = free_tol

    def fit(self, H, y=None):
        return self._fit_spectrum(H)

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "classification_")
        X = _check_states(X, self.n_features_in_)
        f = [revival_fidelity(self.spectrum_, self.classification_, x) for x in X]
        return np.array(f)[:, None]

    def predict(self, X) -> np.ndarray:
        """True where the state revives perfectly."""
        return self.transform(X)[:, 0] >= 1 - self.free_tol


class NonRevivalMonotone(TransformerMixin, _SpectralFit):
    """Certified lower bounds on the non-revival monotone of each input state."""

    def __init__(self, tolerance: float = DEFAULT_TOLERANCE, max_denominator: int = DEFAULT_MAX_DENOMINATOR,
                 restarts: int = 8, iterations: int = 50, seed: int = 0, n_jobs: int = 1):
        self.tolerance = tolerance
        self.max_denominator = max_denominator
        self.restarts = restarts
        self.iterations = iterations
        self.seed = seed
        self.n_jobs = n_jobs

    def fit(self, H, y=None):
        return self._fit_spectrum(H)

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "classification_")
        X = _check_states(X, self.n_features_in_)
        budget = Budget(self.restarts, self.iterations)
        vals = [monotone_R(self.spectrum_, self.classification_, x, budget, seed=self.seed,
                           n_jobs=self.n_jobs).value for x in X]
        return np.array(vals)[:, None]


class DecodingFidelityCurve(TransformerMixin, BaseEstimator):
    """Decoding fidelity for input sites ``A`` and output sites ``D`` at the times in ``X``."""

    def __init__(self, A=(1,), D=(1,), n_jobs: int = 1):
        self.A = A
        self.D = D
        self.n_jobs = n_jobs

    def fit(self, H, y=None):
        H = check_hermitian(H)
        self.spectrum_ = diagonalize(H)
        self.pair_ = SubsystemPair(self.spectrum_.n_qubits, tuple(self.A), tuple(self.D))
        self._sweep = ScramblingSweep(self.spectrum_, self.pair_)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "pair_")
        times = np.asarray(X, dtype=float).reshape(-1)
        return self._sweep.run(times, self.n_jobs)[:, None]

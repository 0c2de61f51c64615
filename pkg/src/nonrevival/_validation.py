"""Input validation helpers, in the spirit of ``sklearn.utils.validation``.

scikit-learn's own ``check_array`` rejects complex input, so the quantum
objects used here get their own small set of checkers.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


class DimensionError(ValueError):
    """Raised when operand dimensions disagree or are not powers of two."""


def n_qubits_for(dim: int) -> int:
    """Return ``n`` with ``dim == 2**n`` or raise."""
    if dim < 1 or dim & (dim - 1):
        raise DimensionError(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def check_square(matrix, *, name: str = "operator", power_of_two: bool = True) -> np.ndarray:
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {a.shape}")
    if power_of_two:
        n_qubits_for(a.shape[0])
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def check_hermitian(matrix, *, tol: float = 1e-12, name: str = "Hamiltonian") -> np.ndarray:
    a = check_square(matrix, name=name)
    resid = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if resid > tol:
        raise ValueError(f"{name} is not Hermitian (max residual {resid:.3e} > {tol:.1e})")
    return a


def check_state(psi, dim: int | None = None, *, normalize: bool = False) -> np.ndarray:
    """Validate a state vector; optionally rescale it to unit norm."""
    v = np.asarray(psi, dtype=complex)
    if v.ndim != 1:
        raise DimensionError(f"state must be one-dimensional, got shape {v.shape}")
    n_qubits_for(v.shape[0])
    if dim is not None and v.shape[0] != dim:
        raise DimensionError(f"state has length {v.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(v)):
        raise ValueError("state contains non-finite amplitudes")
    norm = np.linalg.norm(v)
    if normalize:
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return v / norm
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"state is not normalized (norm {norm:.12f})")
    return v


def check_density_matrix(rho, dim: int | None = None, *, power_of_two: bool = True) -> np.ndarray:
    """Hermitian, unit trace and PSD, each within 1e-10."""
    a = check_square(rho, name="density matrix", power_of_two=power_of_two).astype(complex)
    if dim is not None and a.shape[0] != dim:
        raise DimensionError(f"density matrix has dimension {a.shape[0]}, expected {dim}")
    if np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL:
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(a).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix has trace {tr}")
    lo = np.linalg.eigvalsh(a).min()
    if lo < -PSD_TOL:
        raise ValueError(f"density matrix is not positive semidefinite (min eigenvalue {lo:.3e})")
    return a


def check_sites(sites: Iterable[int], n_qubits: int, *, name: str = "sites") -> tuple[int, ...]:
    """Sites are 1-based, as in ``{1..n}``. Returns them sorted and deduplicated."""
    out = sorted(set(int(s) for s in sites))
    bad = [s for s in out if not 1 <= s <= n_qubits]
    if bad:
        raise ValueError(f"{name} {bad} outside 1..{n_qubits}")
    return tuple(out)


def check_time(t) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    return t

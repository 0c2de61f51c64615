"""Weak-measurement channel and recovery of damaged information through revivals."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from ._validation import DimensionError, check_density_matrix, check_square, check_state
from .operators import PauliString, SpectralDecomposition, propagator
from .resource import revival_fidelity
from .spectral import EigenClassification, revival_period

__all__ = [
    "MAX_RECOVERY_QUBITS",
    "NotFreeError",
    "WeakMeasurementOutcome",
    "RecoveryRun",
    "weak_measure",
    "run_recovery",
    "estimate_expectation",
    "exact_expectation",
    "haar_twirl_reference",
]

MAX_RECOVERY_QUBITS = 6
FREE_TOL = 1e-8
CLOSED_FORM_TOL = 1e-9


class NotFreeError(ValueError):
    """The initial state does not revive perfectly."""


def _check_strength(p: float) -> float:
    p = float(p)
    if not 0 < p < 1:
        raise ValueError(f"measurement strength must lie in (0, 1), got {p}")
    return p


@dataclass(frozen=True, eq=False)
class WeakMeasurementOutcome:
    """Joint state on system (x) ancilla; ancilla level ``j + 1`` records outcome ``j``."""

    joint_state: np.ndarray
    strength: float

    @property
    def dim(self) -> int:
        """System dimension ``d``, recovered from ``d (d + 1)``."""
        return (math.isqrt(4 * self.joint_state.shape[0] + 1) - 1) // 2

    def as_tensor(self) -> np.ndarray:
        """Indices ``(system, ancilla, system', ancilla')``."""
        d = self.dim
        return self.joint_state.reshape(d, d + 1, d, d + 1)

    def system_state(self) -> np.ndarray:
        return np.einsum("iaja->ij", self.as_tensor())

    def ancilla_state(self) -> np.ndarray:
        return np.einsum("iaib->ab", self.as_tensor())


def weak_measure(rho, p: float) -> WeakMeasurementOutcome:
    """``(1-p) rho (x) |0><0| + p sum_j rho_jj |j><j| (x) |j+1><j+1|``."""
    p = _check_strength(p)
    rho = check_density_matrix(rho, power_of_two=False)
    d = rho.shape[0]
    J = np.zeros((d, d + 1, d, d + 1), dtype=complex)
    J[:, 0, :, 0] = (1 - p) * rho
    j = np.arange(d)
    J[j, j + 1, j, j + 1] = p * np.diag(rho)
    return WeakMeasurementOutcome(J.reshape(d * (d + 1), d * (d + 1)), p)


@dataclass(eq=False)
class RecoveryRun:
    """One pass of prepare, evolve, weakly measure, evolve to a revival, read out."""

    phi: np.ndarray
    t1: float
    t2: float
    m: int
    p: float
    t_R: float
    rho_f: np.ndarray
    closed_form_residual: float
    estimate: float
    direct_expectation: float
    exact_reconstruction: float
    scar_overlap_diag: float

    @property
    def overlap_phi_rhof(self) -> float:
        return float(np.vdot(self.phi, self.rho_f @ self.phi).real)

    @property
    def haar_gap(self) -> float:
        return abs(self.estimate - self.direct_expectation)

    def to_record(self, *, seed: int | None = None) -> dict:
        return {
            "n": int(round(math.log2(self.phi.shape[0]))),
            "seed": seed,
            "t1": self.t1,
            "t2": self.t2,
            "m": self.m,
            "p": self.p,
            "overlap_phi_rhof": self.overlap_phi_rhof,
            "estimate": self.estimate,
            "direct_expectation": self.direct_expectation,
            "haar_gap": self.haar_gap,
            "scar_overlap_diag": self.scar_overlap_diag,
        }


def _observable(O, d: int) -> np.ndarray:
    O = O.to_matrix() if isinstance(O, PauliString) else check_square(O)
    if O.shape[0] != d:
        raise DimensionError(f"observable dimension {O.shape[0]} != {d}")
    return O


def _expect(O: np.ndarray, rho: np.ndarray) -> float:
    return float(np.sum(O * rho.T).real)


def run_recovery(spec: SpectralDecomposition, classification: EigenClassification, phi, t1: float,
                 m: int, p: float, O, *, t_R: float | None = None, allow_large: bool = False) -> RecoveryRun:
    """Simulate the full circuit on system plus ancilla and read ``<phi|O|phi>`` back.

    ``t_R`` defaults to ``2 pi T``; the second evolution runs for
    ``t2 = m t_R - t1``. The reduced final state is checked against its closed
    form ``(1-p) phi phi^dagger + p sum_i |<i|U(t1) phi>|^2 U(t2)|i><i|U(t2)^dagger``.
    """
    d = spec.dim
    if spec.n_qubits > MAX_RECOVERY_QUBITS and not allow_large:
        raise MemoryError(
            f"recovery simulation at n={spec.n_qubits} needs a {d * (d + 1)}-dimensional joint state; "
            f"limit is n={MAX_RECOVERY_QUBITS} unless allow_large=True"
        )
    p = _check_strength(p)
    phi = check_state(phi, d)
    O = _observable(O, d)
    if revival_fidelity(spec, classification, phi) < 1 - FREE_TOL:
        raise NotFreeError("initial state is not free")
    t_R = revival_period(classification) if t_R is None else float(t_R)
    U_R = propagator(spec, t_R)
    if abs(np.vdot(phi, U_R @ phi)) < 1 - FREE_TOL:
        raise NotFreeError(f"state does not return at t_R={t_R}")
    t1 = float(t1)
    m = int(m)
    t2 = m * t_R - t1
    if t2 <= 0:
        raise ValueError(f"t2 = m t_R - t1 = {t2} must be positive")

    U1 = propagator(spec, t1)
    U2 = propagator(spec, t2)
    phi1 = U1 @ phi
    J = weak_measure(np.outer(phi1, phi1.conj()), p).as_tensor()
    # (U2 (x) 1) J (U2 (x) 1)^dagger, then trace out the ancilla
    J = np.einsum("ij,jakb,lk->ialb", U2, J, U2.conj(), optimize=True)
    rho_f = np.einsum("iaja->ij", J)

    w = np.abs(phi1) ** 2
    closed = (1 - p) * np.outer(phi, phi.conj()) + p * (U2 * w) @ U2.conj().T
    resid = float(np.max(np.abs(rho_f - closed)))
    if resid > CLOSED_FORM_TOL:
        raise FloatingPointError(f"final state deviates from its closed form by {resid:.3e}")

    scar = float(np.max(np.sum(np.abs(spec.eigenvectors[:, list(classification.rational_indices)]) ** 2, axis=1)))
    run = RecoveryRun(phi, t1, t2, m, p, t_R, rho_f, resid, 0.0,
                      float(np.vdot(phi, O @ phi).real), 0.0, scar)
    run.estimate = estimate_expectation(run, O)
    run.exact_reconstruction = exact_expectation(spec, run, O)
    return run


def estimate_expectation(run: RecoveryRun, O) -> float:
    """``(tr(O rho_f) - p tr(O) / d) / (1 - p)``, exact when ``U(t2)`` acts like a Haar twirl."""
    O = _observable(O, run.rho_f.shape[0])
    d = O.shape[0]
    return (_expect(O, run.rho_f) - run.p * float(np.trace(O).real) / d) / (1 - run.p)


def exact_expectation(spec: SpectralDecomposition, run: RecoveryRun, O) -> float:
    """Model-free inversion of the final state using the known propagators."""
    O = _observable(O, spec.dim)
    U1 = propagator(spec, run.t1)
    U2 = propagator(spec, run.t2)
    w = np.abs(U1 @ run.phi) ** 2
    diag = np.einsum("ji,jk,ki->i", U2.conj(), O, U2).real
    return (_expect(O, run.rho_f) - run.p * float(np.dot(diag, w))) / (1 - run.p)


def haar_twirl_reference(O, i: int, samples: int, rng=None) -> tuple[float, float]:
    """Monte Carlo mean and standard error of ``<i|U^dagger O U|i>`` over Haar ``U``."""
    if samples < 2:
        raise ValueError("need at least two samples")
    O = check_square(O, power_of_two=False)
    d = O.shape[0]
    if not 0 <= i < d:
        raise ValueError(f"basis index {i} outside 0..{d - 1}")
    rng = np.random.default_rng(rng)
    Us = unitary_group.rvs(d, size=samples, random_state=rng) if d > 1 else np.ones((samples, 1, 1))
    v = Us[:, :, i]
    vals = np.einsum("sj,jk,sk->s", v.conj(), O, v).real
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))

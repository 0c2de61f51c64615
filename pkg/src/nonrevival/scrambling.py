"""Out-of-time-ordered correlators, decoding fidelity and the OTOC revival bound."""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._validation import DimensionError, check_sites, check_square, check_time
from .operators import PauliString, SpectralDecomposition, evolve_operator, partial_trace, pauli_enumerate
from .resource import Budget, monotone_G
from .spectral import EigenClassification, revival_period

__all__ = [
    "MAX_PAULI_TERMS",
    "SubsystemPair",
    "OtocBoundReport",
    "OtocBoundViolation",
    "otoc",
    "avg_otoc",
    "decoding_fidelity",
    "pauli_weight_overlap",
    "pauli_weight_series",
    "ScramblingSweep",
    "check_otoc_bound",
    "write_series_csv",
]

MAX_PAULI_TERMS = 10**6
DIVERGENCE_FLOOR = 1e-12


class OtocBoundViolation(AssertionError):
    """The OTOC left the interval ``[2<O(2 pi T), O>^2 - 1, 1]`` beyond roundoff."""


@dataclass(frozen=True)
class SubsystemPair:
    """Input subsystem ``A`` and output subsystem ``D`` of a scrambling channel, as 1-based sites."""

    n_qubits: int
    A: tuple[int, ...]
    D: tuple[int, ...]

    def __post_init__(self):
        A = check_sites(self.A, self.n_qubits, name="A")
        D = check_sites(self.D, self.n_qubits, name="D")
        if not A or not D:
            raise ValueError("A and D must both be non-empty")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "D", D)

    @property
    def d_A(self) -> int:
        return 2 ** len(self.A)

    @property
    def d_D(self) -> int:
        return 2 ** len(self.D)

    @property
    def d_A_minus_D(self) -> int:
        return 2 ** len(set(self.A) - set(self.D))

    @property
    def n_terms(self) -> int:
        return 4 ** len(self.A) * 4 ** len(self.D)

    def initial_avg_otoc(self) -> float:
        """Exact Pauli-averaged OTOC at ``t = 0``."""
        return self.d_A_minus_D**2 / self.d_A**2


def _as_matrix(op, dim: int) -> np.ndarray:
    if isinstance(op, PauliString):
        if 2**op.n_qubits != dim:
            raise DimensionError(f"{op} acts on {op.n_qubits} qubits, expected dimension {dim}")
        return op.to_matrix()
    op = check_square(op)
    if op.shape[0] != dim:
        raise DimensionError(f"operator dimension {op.shape[0]} != {dim}")
    return op


def otoc(spec: SpectralDecomposition, O1, O2, t: float) -> complex:
    """``<O1(t) O2 O1(t) O2>`` with the normalized trace."""
    A = _as_matrix(O1, spec.dim)
    B = _as_matrix(O2, spec.dim)
    X = evolve_operator(spec, A, t) @ B
    return complex(np.sum(X * X.T) / spec.dim)


def _pair_sum(W: np.ndarray, pair: SubsystemPair) -> float:
    """``sum_{P_D} tr(W P_D W P_D) / d`` summed over all Paulis on ``D``.

    Uses ``sum_P P W P = d_D (tr_D W) (x) 1_D``, so the sum costs one partial
    trace instead of ``4**|D|`` products.
    """
    d = W.shape[0]
    rest = [s for s in range(1, pair.n_qubits + 1) if s not in pair.D]
    R = partial_trace(W, rest)
    return pair.d_D * float(np.sum(R * R.T).real) / d


class ScramblingSweep:
    """Pauli-averaged OTOC over ``A x D`` at many times.

    The eigenbasis images of the ``A`` Paulis are cached, so each time point
    costs two dense products per non-identity ``A`` Pauli.
    """

    def __init__(self, spec: SpectralDecomposition, pair: SubsystemPair, *, method: str = "twirl"):
        if 2**pair.n_qubits != spec.dim:
            raise DimensionError(f"pair is on {pair.n_qubits} qubits, spectrum has dimension {spec.dim}")
        if pair.n_terms > MAX_PAULI_TERMS:
            raise MemoryError(f"{pair.n_terms} Pauli pairs exceed the {MAX_PAULI_TERMS} term limit")
        if method not in ("twirl", "direct"):
            raise ValueError("method must be 'twirl' or 'direct'")
        self.spec = spec
        self.pair = pair
        self.method = method
        paulis = list(pauli_enumerate(pair.n_qubits, pair.A))
        # identity first; its evolution is trivial
        self._rotated = [spec.to_eigenbasis(P.to_matrix()) for P in paulis[1:]]
        self._d_paulis = list(pauli_enumerate(pair.n_qubits, pair.D)) if method == "direct" else []

    def _term(self, W: np.ndarray) -> float:
        if self.method == "twirl":
            return _pair_sum(W, self.pair)
        d = W.shape[0]
        return math.fsum(float(np.sum(X * X.T).real) / d for X in (P.right_multiply(W) for P in self._d_paulis))

    def avg_otoc(self, t: float) -> float:
        t = check_time(t)
        V = self.spec.eigenvectors
        ph = np.exp(1j * self.spec.eigenvalues * t)
        n_d = 4 ** len(self.pair.D)
        # the identity A Pauli contributes exactly one per D Pauli
        terms = [float(n_d)]
        for M in self._rotated:
            W = (V * ph) @ M @ (V * ph).conj().T
            terms.append(self._term(W))
        return math.fsum(terms) / (len(terms) * n_d)

    def fidelity_from_avg(self, avg: float) -> float:
        if avg <= DIVERGENCE_FLOOR:
            return math.inf
        return 1.0 / (self.pair.d_A**2 * avg)

    def decoding_fidelity(self, t: float) -> float:
        return self.fidelity_from_avg(self.avg_otoc(t))

    def avg_series(self, times: Sequence[float], n_jobs: int = 1) -> np.ndarray:
        """Average OTOC at each time, in input order."""
        times = [check_time(t) for t in times]
        if n_jobs <= 1:
            return np.array([self.avg_otoc(t) for t in times])
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            return np.array(list(pool.map(self.avg_otoc, times)))

    def run(self, times: Sequence[float], n_jobs: int = 1) -> np.ndarray:
        """Decoding fidelity at each time, in input order."""
        return np.array([self.fidelity_from_avg(a) for a in self.avg_series(times, n_jobs)])


def avg_otoc(spec: SpectralDecomposition, pair: SubsystemPair, t: float, *, method: str = "twirl") -> float:
    """Mean of ``otoc(P_A, P_D; t)`` over all Paulis on ``A`` and on ``D``."""
    return ScramblingSweep(spec, pair, method=method).avg_otoc(t)


def decoding_fidelity(spec: SpectralDecomposition, pair: SubsystemPair, t: float) -> float:
    """``1 / (d_A^2 avg_otoc)``; ``inf`` when the average OTOC vanishes."""
    return ScramblingSweep(spec, pair).decoding_fidelity(t)


def pauli_weight_series(spec: SpectralDecomposition, P, times: Iterable[float]) -> np.ndarray:
    """``Re <P(t), P>`` on a time grid, from the eigenbasis moduli of ``P``."""
    M = np.abs(spec.to_eigenbasis(_as_matrix(P, spec.dim))) ** 2
    out = []
    for t in times:
        q = spec.phases(check_time(t))
        out.append((q @ M @ q.conj()).real / spec.dim)
    return np.array(out)


def pauli_weight_overlap(spec: SpectralDecomposition, P, t: float) -> float:
    """``<P(t), P>``, real for Hermitian ``P``."""
    return float(pauli_weight_series(spec, P, [t])[0])


@dataclass
class OtocBoundReport:
    otoc: float
    otoc_imag: float
    correlator: float
    intermediate_bound: float
    g_estimate: float
    g_bound: float
    slack: float
    holds: bool

    def to_dict(self) -> dict:
        return asdict(self)


def check_otoc_bound(spec: SpectralDecomposition, classification: EigenClassification, O1: PauliString,
                     *, budget=Budget(), seed: int = 0, strict: bool = True) -> OtocBoundReport:
    """Evaluate ``otoc(O1, O1; 2 pi T)`` against its lower bounds.

    ``intermediate_bound`` is ``2 <O1(2 pi T), O1>^2 - 1``, which holds exactly
    for Pauli strings. ``g_bound`` is ``1 - 2 G`` with ``G`` replaced by its
    certified lower estimate, so it is reported but not asserted.
    """
    if not isinstance(O1, PauliString):
        raise TypeError("O1 must be a PauliString")
    tR = revival_period(classification)
    P = _as_matrix(O1, spec.dim)
    val = otoc(spec, P, P, tR)
    c = pauli_weight_overlap(spec, P, tR)
    inter = 2 * c * c - 1
    g = monotone_G(spec, classification, P, budget, seed=seed).value
    holds = inter - 1e-9 <= val.real <= 1 + 1e-9
    report = OtocBoundReport(val.real, val.imag, c, inter, g, 1 - 2 * g, val.real - inter, holds)
    if strict and not holds:
        raise OtocBoundViolation(f"otoc {val.real:.12g} outside [{inter:.12g}, 1]")
    return report


def write_series_csv(path, times: Sequence[float], columns: dict[str, Sequence[float]]) -> None:
    """Write ``t,<name>...`` rows with 17 significant digits and LF line endings."""
    names = list(columns)
    cols = [np.asarray(columns[k], dtype=float) for k in names]
    for k, c in zip(names, cols):
        if c.shape != (len(times),):
            raise ValueError(f"column {k!r} has {c.shape[0]} values for {len(times)} times")
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", *names])
        for i, t in enumerate(times):
            w.writerow([f"{float(t):.17g}", *(f"{c[i]:.17g}" for c in cols)])

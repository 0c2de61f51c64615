"""Rational/irrational eigenvalue classification and the common revival period."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

__all__ = [
    "EigenClassification",
    "NoRationalEigenvaluesError",
    "BoundaryDegeneracyError",
    "best_rational",
    "classify",
    "check_irrational_spacing",
    "revival_period",
    "classification_report",
    "DEFAULT_TOLERANCE",
    "DEFAULT_MAX_DENOMINATOR",
]

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_DENOMINATOR = 1000
DEFAULT_DEGENERACY_TOL = 1e-8


class NoRationalEigenvaluesError(ValueError):
    """No eigenvalue is rational at the requested resolution, so T is undefined."""


class BoundaryDegeneracyError(ValueError):
    """A rational and an irrational eigenvalue coincide, making the eigenbasis split ill-defined."""


@dataclass(frozen=True)
class EigenClassification:
    """Split of eigen-indices into rational (``A``) and irrational (``B``) sets.

    Indices refer to the ascending eigenvalue order of the decomposition that
    was classified. ``T`` is the least common denominator of the rational
    eigenvalues, or None if there are none.
    """

    rational_indices: tuple[int, ...]
    irrational_indices: tuple[int, ...]
    T: int | None
    rational_values: dict[int, Fraction] = field(default_factory=dict)
    tolerance: float = DEFAULT_TOLERANCE
    max_denominator: int = DEFAULT_MAX_DENOMINATOR

    @property
    def dim(self) -> int:
        return len(self.rational_indices) + len(self.irrational_indices)

    @property
    def n_rational(self) -> int:
        return len(self.rational_indices)

    @property
    def n_irrational(self) -> int:
        return len(self.irrational_indices)

    def rational_mask(self) -> np.ndarray:
        mask = np.zeros(self.dim, dtype=bool)
        mask[list(self.rational_indices)] = True
        return mask

    def same_split(self, other: "EigenClassification") -> bool:
        return (
            self.rational_indices == other.rational_indices
            and self.irrational_indices == other.irrational_indices
            and self.T == other.T
            and self.rational_values == other.rational_values
        )


def best_rational(x: float, max_denominator: int) -> Fraction:
    """Closest fraction to ``x`` with denominator at most ``max_denominator``.

    ``Fraction.limit_denominator`` walks the continued-fraction convergents of
    ``x`` (plus the last semiconvergent), so this is O(log max_denominator).
    """
    return Fraction(float(x)).limit_denominator(max_denominator)


def _eigenvalues(spec) -> np.ndarray:
    vals = getattr(spec, "eigenvalues", spec)
    return np.asarray(vals, dtype=float)


def classify(spec, tolerance: float = DEFAULT_TOLERANCE,
             max_denominator: int = DEFAULT_MAX_DENOMINATOR, *,
             require_rational: bool = True,
             degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> EigenClassification:
    """Classify eigenvalues as rational when a bounded-denominator fraction lies within ``tolerance``.

    ``spec`` is a :class:`~nonrevival.operators.SpectralDecomposition` or a
    plain sequence of eigenvalues.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    E = _eigenvalues(spec)
    rational: dict[int, Fraction] = {}
    for i, e in enumerate(E):
        f = best_rational(e, max_denominator)
        if abs(e - float(f)) <= tolerance:
            rational[i] = f
    irrational = tuple(i for i in range(len(E)) if i not in rational)
    if not rational and require_rational:
        raise NoRationalEigenvaluesError(
            f"no eigenvalue within {tolerance:g} of a fraction with denominator <= {max_denominator}"
        )
    if rational and irrational:
        ra = E[list(rational)]
        ir = E[list(irrational)]
        gap = np.min(np.abs(ra[:, None] - ir[None, :]))
        if gap <= degeneracy_tol:
            raise BoundaryDegeneracyError(
                f"rational and irrational eigenvalues within {gap:.3e} of each other"
            )
    if len(rational) == 1:
        warnings.warn("only one rational eigenvalue; the resource theory assumes at least two",
                      stacklevel=2)
    T = reduce(math.lcm, (f.denominator for f in rational.values()), 1) if rational else None
    return EigenClassification(
        rational_indices=tuple(sorted(rational)),
        irrational_indices=irrational,
        T=T,
        rational_values=rational,
        tolerance=float(tolerance),
        max_denominator=int(max_denominator),
    )


def check_irrational_spacing(classification: EigenClassification, spec,
                             tolerance: float | None = None,
                             max_denominator: int | None = None) -> list[tuple[int, int]]:
    """Pairs ``i < j`` in ``B`` whose gap ``E_i - E_j`` looks rational at this resolution.

    An empty list means the irrational-spacing assumption holds as far as
    ``(tolerance, max_denominator)`` can tell.
    """
    tol = classification.tolerance if tolerance is None else tolerance
    qmax = classification.max_denominator if max_denominator is None else max_denominator
    E = _eigenvalues(spec)
    B = classification.irrational_indices
    bad = []
    for a in range(len(B)):
        for b in range(a + 1, len(B)):
            gap = E[B[a]] - E[B[b]]
            if abs(gap - float(best_rational(gap, qmax))) <= tol:
                bad.append((B[a], B[b]))
    return bad


def revival_period(classification: EigenClassification) -> float:
    """Universal revival time ``2 pi T`` of the rational span."""
    if classification.T is None:
        raise NoRationalEigenvaluesError("T is undefined without rational eigenvalues")
    return 2 * math.pi * classification.T


def classification_report(classification: EigenClassification,
                          violations: list[tuple[int, int]] | None = None,
                          eigenvalues=None) -> dict:
    """JSON-ready summary of a classification."""
    out = {
        "tolerance": classification.tolerance,
        "max_denominator": classification.max_denominator,
        "T": classification.T,
        "rational": [
            {"index": i, "num": f.numerator, "den": f.denominator}
            for i, f in sorted(classification.rational_values.items())
        ],
        "irrational": list(classification.irrational_indices),
        "spacing_violations": [list(p) for p in (violations or [])],
    }
    if eigenvalues is not None:
        out["eigenvalues"] = [float(e) for e in _eigenvalues(eigenvalues)]
    return out

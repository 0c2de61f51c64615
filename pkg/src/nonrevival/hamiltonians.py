"""Hamiltonian constructors: PXP chain, two-qubit toy model, synthetic spectra."""
from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import unitary_group

from ._validation import check_hermitian, n_qubits_for
from .operators import PauliString
from .spectral import EigenClassification

__all__ = [
    "Surd",
    "SyntheticSpectrum",
    "HamiltonianSpec",
    "SpacingAssumptionError",
    "build_pxp",
    "build_toy_model",
    "build_synthetic",
    "build_hamiltonian",
    "rescale_qmbs",
    "load_explicit_matrix",
    "save_explicit_matrix",
    "TOY_MODEL_EIGENVALUES",
    "TOY_MODEL_LISTED_EIGENVALUES",
    "parse_surd",
]

PXP_MIN_QUBITS = 3
PXP_MAX_QUBITS = 14


class SpacingAssumptionError(ValueError):
    """Two irrational eigenvalues differ by a rational number."""


def _squarefree_split(m: int) -> tuple[int, int]:
    """Return ``(k, r)`` with ``m == k*k*r`` and ``r`` squarefree."""
    if m <= 0:
        raise ValueError(f"radicand must be positive, got {m}")
    k, r, p = 1, 1, 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        k *= p ** (e // 2)
        r *= p ** (e % 2)
        p += 1
    return k, r * m


@dataclass(frozen=True)
class Surd:
    """Exact number ``rational + sum_m coeff_m * sqrt(m)`` with squarefree ``m > 1``.

    Square roots of distinct squarefree integers are linearly independent over
    the rationals, so ``is_rational`` is decided exactly.
    """

    rational: Fraction = Fraction(0)
    radicals: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        terms: dict[int, Fraction] = {}
        rational = Fraction(self.rational)
        for m, c in self.radicals:
            k, r = _squarefree_split(int(m))
            c = Fraction(c) * k
            if r == 1:
                rational += c
            else:
                terms[r] = terms.get(r, Fraction(0)) + c
        object.__setattr__(self, "rational", rational)
        object.__setattr__(
            self, "radicals", tuple(sorted((m, c) for m, c in terms.items() if c != 0))
        )

    @classmethod
    def sqrt(cls, m: int, coeff=1) -> "Surd":
        return cls(Fraction(0), ((m, Fraction(coeff)),))

    @classmethod
    def coerce(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        if isinstance(x, str):
            return parse_surd(x)
        return cls(Fraction(x))

    @property
    def is_rational(self) -> bool:
        return not self.radicals

    def __add__(self, other):
        o = Surd.coerce(other)
        return Surd(self.rational + o.rational, self.radicals + o.radicals)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.rational, tuple((m, -c) for m, c in self.radicals))

    def __sub__(self, other):
        return self + (-Surd.coerce(other))

    def __rsub__(self, other):
        return Surd.coerce(other) - self

    def __mul__(self, other):
        o = Surd.coerce(other)
        mine = [(1, self.rational)] + list(self.radicals)
        theirs = [(1, o.rational)] + list(o.radicals)
        return Surd(Fraction(0), tuple((a * b, x * y) for a, x in mine for b, y in theirs))

    __rmul__ = __mul__

    def __float__(self) -> float:
        # math.fsum keeps cancellations such as (1+sqrt2)-sqrt2 accurate
        return math.fsum([float(self.rational)] + [float(c) * math.sqrt(m) for m, c in self.radicals])

    def __str__(self) -> str:
        parts = [] if self.rational == 0 and self.radicals else [str(self.rational)]
        for m, c in self.radicals:
            parts.append(f"{c}*sqrt({m})" if c != 1 else f"sqrt({m})")
        return "+".join(parts).replace("+-", "-")


_TERM = re.compile(r"^(?:(\d+(?:\.\d+)?(?:/\d+)?)\s*\*?\s*)?(?:sqrt\(\s*(\d+)\s*\))?$")


def parse_surd(text: str) -> Surd:
    """Parse strings such as ``"-1+sqrt(2)-sqrt(10)"`` or ``"3/2*sqrt(5)"``."""
    s = text.replace(" ", "").replace("\u221a", "sqrt")
    s = re.sub(r"sqrt(\d+)", r"sqrt(\1)", s)
    terms = re.findall(r"([+-]?)([^+-]+)", s)
    if not terms or "".join(a + b for a, b in terms) != s:
        raise ValueError(f"cannot parse {text!r}")
    total = Surd()
    for sign, body in terms:
        m = _TERM.match(body)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"cannot parse term {body!r} in {text!r}")
        coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        if sign == "-":
            coeff = -coeff
        total = total + (Surd.sqrt(int(m.group(2)), coeff) if m.group(2) else Surd(coeff))
    return total


def build_pxp(n: int) -> np.ndarray:
    """Periodic PXP chain ``sum_i P0_{i-1} X_i P0_{i+1}`` on the full ``2**n`` space.

    Real symmetric; entry ``[s', s]`` is 1 when ``s'`` is ``s`` with bit ``i``
    flipped and both neighbours of ``i`` are 0 in ``s``.
    """
    if not PXP_MIN_QUBITS <= n <= PXP_MAX_QUBITS:
        raise ValueError(f"PXP chain needs {PXP_MIN_QUBITS} <= n <= {PXP_MAX_QUBITS}, got {n}")
    d = 2**n
    s = np.arange(d)
    H = np.zeros((d, d))
    for i in range(n):
        left = (s >> (n - 1 - (i - 1) % n)) & 1
        right = (s >> (n - 1 - (i + 1) % n)) & 1
        ok = s[(left == 0) & (right == 0)]
        H[ok ^ (1 << (n - 1 - i)), ok] = 1.0
    return H


def build_toy_model() -> np.ndarray:
    """Two-qubit ``sqrt2 (XX + ZZ) + YY + sum_{P != P'} P (x) P'``."""
    H = math.sqrt(2) * (PauliString("XX").to_matrix() + PauliString("ZZ").to_matrix())
    H = H + PauliString("YY").to_matrix()
    for a in "XYZ":
        for b in "XYZ":
            if a != b:
                H = H + PauliString(a + b).to_matrix()
    return H


# The commonly quoted eigenvalue list for the toy model. It sums to sqrt(2)
# although the Hamiltonian is traceless; TOY_MODEL_EIGENVALUES is the exact set.
TOY_MODEL_LISTED_EIGENVALUES = (
    Surd(Fraction(3)),
    parse_surd("-1-sqrt(2)"),
    parse_surd("-1+sqrt(2)-sqrt(10)"),
    parse_surd("-1+sqrt(2)+sqrt(10)"),
)

TOY_MODEL_EIGENVALUES = (
    Surd(Fraction(3)),
    parse_surd("-1-2*sqrt(2)"),
    parse_surd("-1+sqrt(2)-sqrt(10)"),
    parse_surd("-1+sqrt(2)+sqrt(10)"),
)


@dataclass
class SyntheticSpectrum:
    """Diagonal spectrum with exactly known rational and irrational parts.

    ``basis`` is the unitary whose columns become the eigenvectors; when it is
    None a Haar-random one is drawn from ``seed``.
    """

    rational_entries: Sequence = ()
    irrational_entries: Sequence = ()
    basis: np.ndarray | None = None
    seed: int | None = None

    def __post_init__(self):
        self.rational_entries = tuple(Fraction(x) for x in self.rational_entries)
        self.irrational_entries = tuple(Surd.coerce(x) for x in self.irrational_entries)

    @property
    def dim(self) -> int:
        return len(self.rational_entries) + len(self.irrational_entries)

    def validate(self) -> None:
        n_qubits_for(self.dim)
        for x in self.irrational_entries:
            if x.is_rational:
                raise ValueError(f"irrational entry {x} is rational")
        irr = self.irrational_entries
        for i in range(len(irr)):
            for j in range(i + 1, len(irr)):
                if (irr[i] - irr[j]).is_rational:
                    raise SpacingAssumptionError(
                        f"irrational entries {irr[i]} and {irr[j]} differ by a rational number"
                    )
        if len(self.rational_entries) < 2 or len(irr) < 2:
            warnings.warn("fewer than two rational or irrational eigenvalues", stacklevel=2)

    def values(self) -> list[tuple[float, bool, Fraction | Surd]]:
        """``(float value, is_rational, exact value)`` sorted ascending."""
        rows = [(float(x), True, x) for x in self.rational_entries]
        rows += [(float(x), False, x) for x in self.irrational_entries]
        return sorted(rows, key=lambda r: r[0])


def build_synthetic(spectrum: SyntheticSpectrum, *, tolerance: float = 1e-9,
                    max_denominator: int = 1000):
    """Realize ``V diag(values) V^dagger`` and its exact classification.

    Returns ``(H, truth)`` where ``truth`` is an :class:`EigenClassification`
    indexed like the ascending eigenvalues of ``H``.
    """
    spectrum.validate()
    rows = spectrum.values()
    d = len(rows)
    if spectrum.basis is not None:
        V = np.asarray(spectrum.basis, dtype=complex)
        if V.shape != (d, d) or np.max(np.abs(V.conj().T @ V - np.eye(d))) > 1e-10:
            raise ValueError("basis must be a d x d unitary")
    else:
        V = unitary_group.rvs(d, random_state=np.random.default_rng(spectrum.seed)) if d > 1 else np.eye(1)
    vals = np.array([r[0] for r in rows])
    H = (V * vals) @ V.conj().T
    H = (H + H.conj().T) / 2
    rational = {i: r[2] for i, r in enumerate(rows) if r[1]}
    T = reduce(math.lcm, (q.denominator for q in rational.values()), 1) if rational else None
    truth = EigenClassification(
        rational_indices=tuple(sorted(rational)),
        irrational_indices=tuple(i for i, r in enumerate(rows) if not r[1]),
        T=T,
        rational_values={i: Fraction(v) for i, v in rational.items()},
        tolerance=tolerance,
        max_denominator=max_denominator,
    )
    return H, truth


def rescale_qmbs(H, E0: float, E1: float) -> np.ndarray:
    """Affine map ``(H - E1) / E0`` taking a tower ``E0*m + E1`` to the integers ``m``."""
    if E0 == 0:
        raise ValueError("E0 must be nonzero")
    H = np.asarray(H)
    return (H - E1 * np.eye(H.shape[0])) / E0


def load_explicit_matrix(path, *, tol: float = 1e-12) -> np.ndarray:
    """Read the ``dim d`` / ``row col re im`` text format; unlisted entries are zero."""
    lines = [ln.split("#", 1)[0].strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError(f"{path}: empty matrix file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "dim":
        raise ValueError(f"{path}: expected header 'dim d', got {lines[0]!r}")
    d = int(head[1])
    n_qubits_for(d)
    H = np.zeros((d, d), dtype=complex)
    for k, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 4:
            raise ValueError(f"{path}:{k}: expected 'row col re im'")
        r, c = int(parts[0]), int(parts[1])
        if not (0 <= r < d and 0 <= c < d):
            raise ValueError(f"{path}:{k}: index ({r}, {c}) out of range")
        H[r, c] = float(parts[2]) + 1j * float(parts[3])
    return check_hermitian(H, tol=tol, name=f"matrix in {path}")


def save_explicit_matrix(path, H, *, skip_zeros: bool = True) -> None:
    H = np.asarray(H, dtype=complex)
    out = [f"dim {H.shape[0]}"]
    for (r, c), v in np.ndenumerate(H):
        if skip_zeros and v == 0:
            continue
        out.append(f"{r} {c} {v.real:.17g} {v.imag:.17g}")
    Path(path).write_text("\n".join(out) + "\n")


@dataclass
class HamiltonianSpec:
    """Declarative Hamiltonian description used by the experiment runner.

    ``kind`` is one of ``PXP``, ``ToyModel``, ``SyntheticDiagonal`` or
    ``ExplicitMatrix``. ``params`` holds kind-specific keys: ``rational`` and
    ``irrational`` entry lists plus ``basis`` (``random``/``identity``) for
    synthetic spectra, ``path`` for explicit matrices, and optional ``E0`` /
    ``E1`` for a QMBS rescaling.
    """

    kind: str
    n_qubits: int | None = None
    params: dict = field(default_factory=dict)

    KINDS = ("PXP", "ToyModel", "SyntheticDiagonal", "ExplicitMatrix")


def build_hamiltonian(spec: HamiltonianSpec, *, seed: int | None = None):
    """Return ``(H, truth)``; ``truth`` is only known for synthetic spectra."""
    truth = None
    p = spec.params
    if spec.kind == "PXP":
        H = build_pxp(int(spec.n_qubits))
    elif spec.kind == "ToyModel":
        H = build_toy_model()
    elif spec.kind == "SyntheticDiagonal":
        basis = p.get("basis", "random")
        d = len(p.get("rational", ())) + len(p.get("irrational", ()))
        spectrum = SyntheticSpectrum(
            p.get("rational", ()), p.get("irrational", ()),
            basis=np.eye(d) if basis == "identity" else None,
            seed=p.get("basis_seed", seed),
        )
        H, truth = build_synthetic(spectrum)
    elif spec.kind == "ExplicitMatrix":
        H = load_explicit_matrix(p["path"])
    else:
        raise ValueError(f"unknown Hamiltonian kind {spec.kind!r}; expected one of {HamiltonianSpec.KINDS}")
    if spec.n_qubits is not None and H.shape[0] != 2 ** int(spec.n_qubits):
        raise ValueError(f"{spec.kind} Hamiltonian has dimension {H.shape[0]}, expected 2**{spec.n_qubits}")
    if "E0" in p:
        H = rescale_qmbs(H, float(p["E0"]), float(p.get("E1", 0.0)))
        truth = None
    return H, truth

"""Dense operator algebra on n-qubit Hilbert spaces.

Site indices are 1-based. Site 1 is the leftmost tensor factor, i.e. the most
significant bit of a computational-basis index.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._validation import (
    DimensionError,
    check_hermitian,
    check_sites,
    check_square,
    check_time,
    n_qubits_for,
)

__all__ = [
    "SpectralDecomposition",
    "diagonalize",
    "hs_inner",
    "hs_norm",
    "evolve_state",
    "evolve_operator",
    "propagator",
    "partial_trace",
    "PauliString",
    "pauli_enumerate",
    "single_site_pauli",
]

_PHASE_FIX_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian operator."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def n_qubits(self) -> int:
        return n_qubits_for(self.dim)

    def to_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        """Matrix elements ``<psi_k| op |psi_l>``."""
        V = self.eigenvectors
        return V.conj().T @ op @ V

    def from_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        V = self.eigenvectors
        return V @ op @ V.conj().T

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def phases(self, t: float) -> np.ndarray:
        """``exp(-i E_k t)`` for every eigenvalue."""
        return np.exp(-1j * self.eigenvalues * t)


def diagonalize(H) -> SpectralDecomposition:
    """Diagonalize a Hermitian matrix with a reproducible eigenvector gauge.

    Each eigenvector is rotated so that its first component with modulus above
    1e-10 is real and positive. Real symmetric input keeps real eigenvectors,
    which halves the cost of every later basis change.
    """
    H = check_hermitian(H)
    if np.iscomplexobj(H) and not np.any(H.imag):
        H = H.real
    E, V = np.linalg.eigh(H)
    lead = np.argmax(np.abs(V) > _PHASE_FIX_TOL, axis=0)
    pivots = V[lead, np.arange(V.shape[1])]
    V = V * (np.abs(pivots) / pivots)
    return SpectralDecomposition(_frozen(E), _frozen(V))


def _check_pair(a, b):
    a = check_square(a)
    b = check_square(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def hs_inner(a, b) -> complex:
    """Normalized Hilbert-Schmidt inner product ``tr(a^dagger b) / d``."""
    a, b = _check_pair(a, b)
    return complex(np.vdot(a, b) / a.shape[0])


def hs_norm(a) -> float:
    """``sqrt(tr|a|^2 / d)``; equals 1 for every Pauli string."""
    a = check_square(a)
    return float(np.sqrt(np.vdot(a, a).real / a.shape[0]))


def propagator(spec: SpectralDecomposition, t: float) -> np.ndarray:
    """Dense ``exp(-iHt)``."""
    t = check_time(t)
    V = spec.eigenvectors
    return (V * spec.phases(t)) @ V.conj().T


def evolve_state(spec: SpectralDecomposition, psi, t: float) -> np.ndarray:
    """``exp(-iHt) psi`` via the cached eigenbasis."""
    t = check_time(t)
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (spec.dim,):
        raise DimensionError(f"state shape {psi.shape} does not match dimension {spec.dim}")
    V = spec.eigenvectors
    return V @ (spec.phases(t) * (V.conj().T @ psi))


def evolve_operator(spec: SpectralDecomposition, op, t: float) -> np.ndarray:
    """Heisenberg picture ``O(t) = exp(iHt) O exp(-iHt)``."""
    t = check_time(t)
    op = check_square(op)
    if op.shape[0] != spec.dim:
        raise DimensionError(f"operator dimension {op.shape[0]} != {spec.dim}")
    M = spec.to_eigenbasis(op)
    return spec.from_eigenbasis(heisenberg_phases(spec, t) * M)


def heisenberg_phases(spec: SpectralDecomposition, t: float) -> np.ndarray:
    """Elementwise factors ``exp(i (E_k - E_l) t)`` acting on eigenbasis matrix elements."""
    ph = np.exp(1j * spec.eigenvalues * t)
    return np.outer(ph, ph.conj())


def partial_trace(rho, keep: Iterable[int], dims: Sequence[int] | None = None) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep`` (1-based).

    ``dims`` gives the local dimensions; by default all subsystems are qubits.
    The kept subsystems appear in increasing order in the result.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {rho.shape}")
    if dims is None:
        dims = [2] * n_qubits_for(rho.shape[0])
    dims = [int(x) for x in dims]
    if int(np.prod(dims)) != rho.shape[0]:
        raise DimensionError(f"subsystem dims {dims} do not multiply to {rho.shape[0]}")
    m = len(dims)
    keep = check_sites(keep, m, name="keep")
    kept = [k - 1 for k in keep]
    t = rho.reshape(dims + dims)
    row = list(range(m))
    col = [i + m if i in kept else i for i in range(m)]
    out = [i for i in kept] + [i + m for i in kept]
    res = np.einsum(t, row + col, out)
    dk = int(np.prod([dims[i] for i in kept])) if kept else 1
    return res.reshape(dk, dk)


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis times ``i**phase``.

    ``letters[0]`` acts on site 1.
    """

    letters: str
    phase: int = 0

    def __post_init__(self):
        letters = self.letters.upper()
        if not letters or set(letters) - set("IXYZ"):
            raise ValueError(f"invalid Pauli letters {self.letters!r}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @classmethod
    def from_sites(cls, n_qubits: int, sites: dict[int, str], phase: int = 0) -> "PauliString":
        """Build e.g. ``Z`` on site 1 of a 4-qubit chain via ``from_sites(4, {1: "Z"})``."""
        check_sites(sites, n_qubits)
        letters = ["I"] * n_qubits
        for s, p in sites.items():
            letters[s - 1] = p
        return cls("".join(letters), phase)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i + 1 for i, p in enumerate(self.letters) if p != "I")

    @property
    def coefficient(self) -> complex:
        return 1j ** self.phase

    def action(self) -> tuple[np.ndarray, np.ndarray]:
        """Signed-permutation form: ``P|j> = phases[j] |perm[j]>``."""
        n = self.n_qubits
        idx = np.arange(2**n)
        flip = 0
        zy = 0
        n_y = 0
        for k, p in enumerate(self.letters):
            bit = 1 << (n - 1 - k)
            if p in "XY":
                flip |= bit
            if p in "YZ":
                zy |= bit
            n_y += p == "Y"
        parity = (np.bitwise_count(idx & zy) & 1).astype(np.int64)
        phases = (1j ** ((n_y + self.phase) % 4)) * (1 - 2 * parity) * np.ones(2**n)
        return idx ^ flip, phases.astype(complex)

    def to_matrix(self) -> np.ndarray:
        perm, phases = self.action()
        d = perm.shape[0]
        P = np.zeros((d, d), dtype=complex)
        P[perm, np.arange(d)] = phases
        return P

    def right_multiply(self, W: np.ndarray) -> np.ndarray:
        """``W @ P`` in O(d^2)."""
        perm, phases = self.action()
        return W[:, perm] * phases

    def left_multiply(self, W: np.ndarray) -> np.ndarray:
        """``P @ W`` in O(d^2)."""
        perm, phases = self.action()
        out = np.empty_like(W, dtype=complex)
        out[perm, :] = W * phases[:, None]
        return out

    def __str__(self) -> str:
        prefix = ["", "i", "-", "-i"][self.phase]
        return prefix + self.letters


def single_site_pauli(n_qubits: int, site: int, letter: str) -> PauliString:
    return PauliString.from_sites(n_qubits, {site: letter})


def pauli_enumerate(n_qubits: int, support: Iterable[int] = ()) -> Iterator[PauliString]:
    """All ``4**|support|`` Pauli strings acting trivially outside ``support``.

    Strings are yielded in lexicographic order over ``I < X < Y < Z``, so the
    identity always comes first.
    """
    sites = check_sites(support, n_qubits, name="support")
    for combo in itertools.product("IXYZ", repeat=len(sites)):
        yield PauliString.from_sites(n_qubits, dict(zip(sites, combo)))

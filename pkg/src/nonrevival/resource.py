"""Free objects, revival fidelities and monotone estimators for the non-revival resource.

Every quantity is evaluated at the universal revival time ``2 pi T`` fixed by a
:class:`~nonrevival.spectral.EigenClassification`.

A note on the monotone estimators. A free unitary is a unitary block on the
rational span plus a phased permutation ``sigma`` of the irrational
eigenstates. At ``t = 2 pi T`` every rational eigenphase equals one, so the
revival fidelity of ``U_F psi`` and the revival correlator of
``U_F^dagger O U_F`` only see moduli that the rational block and the phases
leave untouched. The maximization over ``U_F`` therefore reduces exactly to a
maximization over ``sigma``, which is enumerated when the irrational set is
small and searched otherwise. Every reported value is re-evaluated on an
explicit free unitary, so it is always a certified lower bound.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.stats import unitary_group

from ._validation import check_density_matrix, check_square, check_state
from .operators import SpectralDecomposition
from .spectral import EigenClassification, revival_period

__all__ = [
    "FIDELITY_TOL",
    "ResourcefulStateError",
    "FreeUnitarySpec",
    "Budget",
    "MonotoneEstimate",
    "revival_fidelity",
    "revival_fidelity_mixed",
    "revival_correlator",
    "make_free_state",
    "make_free_density_matrix",
    "make_free_observable",
    "random_free_unitary_spec",
    "make_free_unitary",
    "is_free_unitary",
    "monotone_R",
    "monotone_D",
    "monotone_G",
]

FIDELITY_TOL = 1e-10
EXHAUSTIVE_MAX_IRRATIONAL = 6


class ResourcefulStateError(ValueError):
    """Requested superposition mixes an irrational eigenstate with other eigenstates."""


def _revival_phases(spec: SpectralDecomposition, classification: EigenClassification) -> np.ndarray:
    return spec.phases(revival_period(classification))


def _clamp_unit(x: float, tol: float, what: str) -> float:
    if x > 1 + tol:
        raise FloatingPointError(f"{what} {x!r} exceeds 1 by more than {tol:g}")
    return min(max(x, 0.0), 1.0)


def _check_classification(spec: SpectralDecomposition, classification: EigenClassification):
    if classification.dim != spec.dim:
        raise ValueError(
            f"classification covers {classification.dim} eigenvalues but the spectrum has {spec.dim}"
        )


def revival_fidelity(spec: SpectralDecomposition, classification: EigenClassification, psi) -> float:
    """``|<psi| exp(-iH 2 pi T) |psi>|``."""
    _check_classification(spec, classification)
    psi = check_state(psi, spec.dim)
    c = spec.eigenvectors.conj().T @ psi
    f = abs(np.sum(np.abs(c) ** 2 * _revival_phases(spec, classification)))
    return _clamp_unit(float(f), 1e-12, "revival fidelity")


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    lam, W = np.linalg.eigh(rho)
    cut = rho.shape[0] * np.finfo(float).eps * max(lam.max(), 1.0)
    root = np.sqrt(np.where(lam > cut, lam, 0.0))
    return (W * root) @ W.conj().T


def revival_fidelity_mixed(spec: SpectralDecomposition, classification: EigenClassification, rho) -> float:
    """Uhlmann fidelity between ``rho`` and ``rho(2 pi T)``.

    Computed as the trace norm of ``sqrt(rho) sqrt(rho(2 pi T))`` in the
    eigenbasis, which avoids taking square roots of noise-level eigenvalues of
    a nearly rank-deficient product.
    """
    _check_classification(spec, classification)
    rho = check_density_matrix(rho, spec.dim)
    S = _psd_sqrt(spec.to_eigenbasis(rho))
    D = _revival_phases(spec, classification)
    f = np.linalg.svd((S * D) @ S, compute_uv=False).sum()
    return _clamp_unit(float(f), FIDELITY_TOL, "mixed revival fidelity")


def _normalized_operator(op, dim: int) -> np.ndarray:
    op = check_square(op)
    if op.shape[0] != dim:
        raise ValueError(f"operator dimension {op.shape[0]} != {dim}")
    norm = math.sqrt(np.vdot(op, op).real / dim)
    if abs(norm - 1) > 1e-9:
        raise ValueError(f"observable must have unit normalized 2-norm, got {norm:.12f}")
    return op


def _correlator_from_moduli(M: np.ndarray, q: np.ndarray) -> float:
    # <O(t), O> = (1/d) sum_kl |O_kl|^2 p_k conj(p_l), with p_k = exp(-i E_k t)
    return abs(q @ M @ q.conj() / M.shape[0]) ** 2


def revival_correlator(spec: SpectralDecomposition, classification: EigenClassification, O) -> float:
    """``G(O) = |<O(2 pi T), O>|^2`` for a normalized observable ``O``."""
    _check_classification(spec, classification)
    O = _normalized_operator(O, spec.dim)
    M = np.abs(spec.to_eigenbasis(O)) ** 2
    g = _correlator_from_moduli(M, _revival_phases(spec, classification))
    return _clamp_unit(float(g), FIDELITY_TOL, "revival correlator")


def make_free_state(spec: SpectralDecomposition, classification: EigenClassification,
                    rational_coefficients=None, irrational_index: int | None = None) -> np.ndarray:
    """A free pure state: either a vector in the rational span or one irrational eigenstate.

    ``rational_coefficients`` are amplitudes on the rational eigenstates (in
    the order of ``classification.rational_indices``); ``irrational_index`` is
    an eigen-index from the irrational set.
    """
    _check_classification(spec, classification)
    if rational_coefficients is not None and irrational_index is not None:
        raise ResourcefulStateError(
            "superposing an irrational eigenstate with rational ones gives a resourceful state"
        )
    V = spec.eigenvectors
    if irrational_index is not None:
        if irrational_index not in classification.irrational_indices:
            raise ValueError(f"eigen-index {irrational_index} is not irrational")
        return V[:, irrational_index].copy()
    if rational_coefficients is None:
        raise ValueError("give rational_coefficients or irrational_index")
    c = np.asarray(rational_coefficients, dtype=complex)
    if c.shape != (classification.n_rational,):
        raise ValueError(f"expected {classification.n_rational} rational coefficients, got {c.shape}")
    if abs(np.linalg.norm(c) - 1) > 1e-9:
        raise ValueError("rational coefficients must be normalized")
    return V[:, list(classification.rational_indices)] @ c


def make_free_density_matrix(spec: SpectralDecomposition, classification: EigenClassification,
                             rational_block, irrational_weights) -> np.ndarray:
    """``sum_{i,j in A} a_ij |psi_i><psi_j| + sum_{i in B} a_ii |psi_i><psi_i|``."""
    A = list(classification.rational_indices)
    B = list(classification.irrational_indices)
    R = np.zeros((spec.dim, spec.dim), dtype=complex)
    R[np.ix_(A, A)] = rational_block
    R[B, B] = irrational_weights
    return spec.from_eigenbasis(R)


def make_free_observable(spec: SpectralDecomposition, classification: EigenClassification,
                         rational_block, irrational_diagonal) -> np.ndarray:
    """Free observable of the same block form, rescaled to unit normalized 2-norm."""
    O = make_free_density_matrix(spec, classification, rational_block, irrational_diagonal)
    return O / math.sqrt(np.vdot(O, O).real / spec.dim)


@dataclass(frozen=True, eq=False)
class FreeUnitarySpec:
    """Block data of a free unitary.

    ``U'[A_i, A_j] = rational_block[i, j]`` and
    ``U'[B_k, B_perm[k]] = exp(i phases[k])`` in the eigenbasis, where ``A`` and
    ``B`` are the rational and irrational eigen-index lists.
    """

    rational_block: np.ndarray
    irrational_perm: tuple[int, ...]
    irrational_phases: np.ndarray

    def __post_init__(self):
        W = np.asarray(self.rational_block, dtype=complex)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise ValueError("rational block must be square")
        if W.size and np.max(np.abs(W.conj().T @ W - np.eye(W.shape[0]))) > 1e-10:
            raise ValueError("rational block is not unitary within 1e-10")
        perm = tuple(int(k) for k in self.irrational_perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{perm} is not a permutation of 0..{len(perm) - 1}")
        th = np.asarray(self.irrational_phases, dtype=float)
        if th.shape != (len(perm),) or not np.all(np.isfinite(th)):
            raise ValueError("need one finite phase per irrational eigenstate")
        object.__setattr__(self, "rational_block", W)
        object.__setattr__(self, "irrational_perm", perm)
        object.__setattr__(self, "irrational_phases", th)

    @classmethod
    def identity(cls, classification: EigenClassification) -> "FreeUnitarySpec":
        return cls(np.eye(classification.n_rational), tuple(range(classification.n_irrational)),
                   np.zeros(classification.n_irrational))


def random_free_unitary_spec(classification: EigenClassification, rng=None) -> FreeUnitarySpec:
    """Haar rational block, uniform permutation, uniform phases."""
    rng = np.random.default_rng(rng)
    nr, ni = classification.n_rational, classification.n_irrational
    W = unitary_group.rvs(nr, random_state=rng) if nr > 1 else np.exp(2j * np.pi * rng.random((1, 1)))
    return FreeUnitarySpec(W.reshape(nr, nr), tuple(rng.permutation(ni)), rng.uniform(0, 2 * np.pi, ni))


def _free_unitary_eigenbasis(classification: EigenClassification, u: FreeUnitarySpec) -> np.ndarray:
    A = list(classification.rational_indices)
    B = np.asarray(classification.irrational_indices, dtype=int)
    if u.rational_block.shape != (len(A), len(A)) or len(u.irrational_perm) != len(B):
        raise ValueError("FreeUnitarySpec does not match the classification sizes")
    U = np.zeros((classification.dim, classification.dim), dtype=complex)
    U[np.ix_(A, A)] = u.rational_block
    U[B, B[list(u.irrational_perm)]] = np.exp(1j * u.irrational_phases)
    return U


def make_free_unitary(spec: SpectralDecomposition, classification: EigenClassification,
                      u: FreeUnitarySpec) -> np.ndarray:
    """Dense free unitary in the computational basis."""
    _check_classification(spec, classification)
    return spec.from_eigenbasis(_free_unitary_eigenbasis(classification, u))


def is_free_unitary(spec: SpectralDecomposition, classification: EigenClassification, U,
                    tol: float = 1e-8) -> tuple[bool, float]:
    """Test the block structure of ``U`` in the eigenbasis.

    The residual is the larger of the rational/irrational cross-block
    Frobenius mass and the distance of the irrational block from the nearest
    phased permutation.
    """
    _check_classification(spec, classification)
    U = check_square(U)
    if U.shape[0] != spec.dim:
        raise ValueError(f"unitary dimension {U.shape[0]} != {spec.dim}")
    unit = np.max(np.abs(U.conj().T @ U - np.eye(spec.dim)))
    if unit > max(tol, 1e-9):
        raise ValueError(f"input is not unitary (residual {unit:.3e})")
    Up = spec.to_eigenbasis(U)
    A = list(classification.rational_indices)
    B = list(classification.irrational_indices)
    cross = max(np.linalg.norm(Up[np.ix_(A, B)]), np.linalg.norm(Up[np.ix_(B, A)])) if A and B else 0.0
    if B:
        M = Up[np.ix_(B, B)]
        cols = np.argmax(np.abs(M), axis=1)
        best = M[np.arange(len(B)), cols]
        P = np.zeros_like(M)
        P[np.arange(len(B)), cols] = best / np.abs(best)
        perm_resid = np.linalg.norm(M - P)
        if len(set(cols.tolist())) != len(B):
            perm_resid = max(perm_resid, 1.0)
    else:
        perm_resid = 0.0
    residual = float(max(cross, perm_resid))
    return residual <= tol, residual


class Budget(NamedTuple):
    """Search effort: independent restarts and improvement sweeps per restart."""

    restarts: int = 8
    iterations: int = 50


@dataclass
class MonotoneEstimate:
    """A certified lower bound on a monotone, with optimizer provenance."""

    value: float
    kind: str
    seed: int
    budget: Budget
    restart_values: list[float] = field(default_factory=list)
    exhaustive: bool = False
    evaluations: int = 0
    best_permutation: tuple[int, ...] = ()
    best_state: list | None = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["budget"] = {"restarts": self.budget.restarts, "iterations": self.budget.iterations}
        out["best_permutation"] = list(self.best_permutation)
        if self.best_state is not None:
            out["best_state"] = [[float(np.real(z)), float(np.imag(z))] for z in self.best_state]
        return out


def _check_budget(budget) -> Budget:
    b = Budget(*budget) if not isinstance(budget, Budget) else budget
    if b.restarts < 1 or b.iterations < 1:
        raise ValueError("budget restarts and iterations must be positive")
    return b


def _restart_rng(seed: int, k: int) -> np.random.Generator:
    # spawn_key pins each restart to its own stream, independent of the total count
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))


def _map(fn: Callable, items: Sequence, n_jobs: int):
    if n_jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, items))


class _PermutationSearch:
    """Maximize ``score(perm)`` over permutations of the irrational set.

    ``score_many`` evaluates a stack of permutations at once.
    """

    def __init__(self, n: int, score_many: Callable[[np.ndarray], np.ndarray]):
        self.n = n
        self.score_many = score_many

    def exhaustive(self) -> tuple[float, tuple[int, ...], int]:
        perms = np.array(list(itertools.permutations(range(self.n))), dtype=int).reshape(-1, self.n)
        vals = np.concatenate([self.score_many(perms[i:i + 4096]) for i in range(0, len(perms), 4096)])
        k = int(np.argmax(vals))
        return float(vals[k]), tuple(int(x) for x in perms[k]), len(perms)

    def climb(self, rng: np.random.Generator, iterations: int, start_identity: bool):
        perm = np.arange(self.n) if start_identity else rng.permutation(self.n)
        best = float(self.score_many(perm[None, :])[0])
        evals = 1
        stale = 0
        for _ in range(iterations):
            # one sweep proposes n random transpositions, scored together
            pairs = rng.integers(0, self.n, size=(self.n, 2))
            pairs = pairs[pairs[:, 0] != pairs[:, 1]]
            if len(pairs):
                perm, best, improved = self._best_swap(perm, best, pairs[:, 0], pairs[:, 1])
                evals += len(pairs)
            else:
                improved = False
            if improved:
                stale = 0
                continue
            if self.n <= 64:
                # full swap neighbourhood before declaring a local optimum
                ii, jj = np.triu_indices(self.n, 1)
                perm, best, improved = self._best_swap(perm, best, ii, jj)
                evals += len(ii)
                if not improved:
                    break
            else:
                stale += 1
                if stale >= 3:
                    break
        return best, tuple(int(x) for x in perm), evals

    def _best_swap(self, perm, best, ii, jj):
        cand = np.repeat(perm[None, :], len(ii), axis=0)
        rows = np.arange(len(ii))
        cand[rows, ii], cand[rows, jj] = perm[jj], perm[ii]
        vals = self.score_many(cand)
        k = int(np.argmax(vals))
        if vals[k] > best + 1e-15:
            return cand[k].copy(), float(vals[k]), True
        return perm, best, False

    def run(self, budget: Budget, seed: int, n_jobs: int = 1):
        """Return ``(best, perm, restart_values, exhaustive, evaluations)``."""
        if self.n <= EXHAUSTIVE_MAX_IRRATIONAL:
            best, perm, evals = self.exhaustive()
            return best, perm, [best], True, evals
        results = _map(
            lambda k: self.climb(_restart_rng(seed, k), budget.iterations, start_identity=(k == 0)),
            list(range(budget.restarts)), n_jobs,
        )
        vals = [r[0] for r in results]
        k = int(np.argmax(vals))
        return vals[k], results[k][1], vals, False, sum(r[2] for r in results)


def _pure_search(spec, classification, c: np.ndarray) -> _PermutationSearch:
    p = _revival_phases(spec, classification)
    A = list(classification.rational_indices)
    B = list(classification.irrational_indices)
    w = np.abs(c) ** 2
    s_rat = np.sum(w[A] * p[A])
    wB, pB = w[B], p[B]
    # U_F moves the weight of B[perm[k]] onto B[k]
    return _PermutationSearch(len(B), lambda perms: 1.0 - np.abs(s_rat + (wB[perms] * pB).sum(axis=1)))


def monotone_R(spec: SpectralDecomposition, classification: EigenClassification, psi,
               budget=Budget(), *, seed: int = 0, n_jobs: int = 1) -> MonotoneEstimate:
    """Lower bound on ``max_{U_F} 1 - F_R(U_F psi)``.

    Exact (up to rounding) when at most six eigenvalues are irrational.
    """
    _check_classification(spec, classification)
    budget = _check_budget(budget)
    psi = check_state(psi, spec.dim)
    c = spec.eigenvectors.conj().T @ psi
    _, perm, restart_vals, exhaustive, evals = _pure_search(spec, classification, c).run(budget, seed, n_jobs)
    witness = FreeUnitarySpec(np.eye(classification.n_rational), perm, np.zeros(classification.n_irrational))
    U = make_free_unitary(spec, classification, witness)
    value = 1.0 - revival_fidelity(spec, classification, U @ psi)
    return MonotoneEstimate(max(value, 0.0), "R", seed, budget, [float(v) for v in restart_vals],
                            exhaustive, evals, perm)


def _observable_search(spec, classification, O: np.ndarray) -> _PermutationSearch:
    p = _revival_phases(spec, classification)
    M = np.abs(spec.to_eigenbasis(O)) ** 2
    B = np.asarray(classification.irrational_indices, dtype=int)
    d = spec.dim

    def score(perms):
        # q[m] = p[tau(m)]: U_F maps |B[perm[k]]> to |B[k]>, so B[k] carries p[B[perm[k]]]
        q = np.repeat(p[None, :], len(perms), axis=0)
        q[:, B] = p[B[perms]]
        vals = np.sum((q @ M) * q.conj(), axis=1) / d
        return 1.0 - np.abs(vals) ** 2

    return _PermutationSearch(len(B), score)


def monotone_G(spec: SpectralDecomposition, classification: EigenClassification, O,
               budget=Budget(), *, seed: int = 0, n_jobs: int = 1) -> MonotoneEstimate:
    """Lower bound on ``max_{U_F} 1 - G(U_F^dagger O U_F)``."""
    _check_classification(spec, classification)
    budget = _check_budget(budget)
    O = _normalized_operator(O, spec.dim)
    _, perm, restart_vals, exhaustive, evals = _observable_search(spec, classification, O).run(
        budget, seed, n_jobs)
    witness = FreeUnitarySpec(np.eye(classification.n_rational), perm, np.zeros(classification.n_irrational))
    U = make_free_unitary(spec, classification, witness)
    value = 1.0 - revival_correlator(spec, classification, U.conj().T @ O @ U)
    return MonotoneEstimate(max(value, 0.0), "G", seed, budget, [float(v) for v in restart_vals],
                            exhaustive, evals, perm)


def _sphere_point(angles: np.ndarray, n: int) -> np.ndarray:
    """Unit vector in C^n from ``n-1`` polar angles in [0, pi/2] and ``n-1`` phases."""
    amp = np.ones(n)
    for k, a in enumerate(angles[: n - 1]):
        amp[k] *= math.cos(a)
        amp[k + 1:] *= math.sin(a)
    ph = np.concatenate([[0.0], angles[n - 1:]])
    return amp * np.exp(1j * ph)


_GOLDEN = (math.sqrt(5) - 1) / 2


def _golden_max(f: Callable[[float], float], lo: float, hi: float, iters: int = 40) -> tuple[float, float]:
    a, b = lo, hi
    x1, x2 = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _coordinate_ascent(f: Callable[[np.ndarray], float], x0: np.ndarray, bounds: np.ndarray,
                       steps: int, scan: int = 8, refine: int = 24) -> tuple[np.ndarray, float, int]:
    """Cyclic coordinate ascent with ``steps`` line searches.

    Each line search scans one coordinate coarsely, then refines the best
    bracket by golden section. Stops early after a full cycle without gain.
    """
    x = x0.copy()
    best = f(x)
    evals = 1
    since_gain = 0
    for step in range(steps):
        i = step % len(x)
        lo, hi = bounds[i]
        grid = np.linspace(lo, hi, scan)

        def along(v):
            y = x.copy()
            y[i] = v
            return f(y)

        vals = [along(v) for v in grid]
        j = int(np.argmax(vals))
        h = grid[1] - grid[0]
        v, fv = _golden_max(along, max(lo, grid[j] - h), min(hi, grid[j] + h), refine)
        evals += scan + refine + 2
        if fv < vals[j]:
            v, fv = grid[j], vals[j]
        if fv > best + 1e-12:
            x[i], best = v, fv
            since_gain = 0
        else:
            since_gain += 1
            if since_gain >= len(x):
                break
    return x, best, evals


def monotone_D(spec: SpectralDecomposition, classification: EigenClassification, U,
               budget=Budget(), *, seed: int = 0, n_jobs: int = 1) -> MonotoneEstimate:
    """Lower bound on ``max_{psi free} R(U psi)``.

    Free states are the irrational eigenstates (all tried) and unit vectors in
    the rational span, searched by coordinate ascent over hyperspherical
    angles with one seeded restart per budget restart and ``iterations`` line
    searches each. The inner ``R`` is exact for up to six irrational
    eigenvalues; beyond that it is a single swap climb from the identity.
    """
    _check_classification(spec, classification)
    budget = _check_budget(budget)
    U = check_square(U)
    V = spec.eigenvectors
    A = list(classification.rational_indices)
    nr = len(A)
    UV = V.conj().T @ U @ V  # U in the eigenbasis

    inner_budget = Budget(1, budget.iterations)

    def inner(c_eig: np.ndarray) -> tuple[float, tuple[int, ...]]:
        val, perm, *_ = _pure_search(spec, classification, c_eig).run(inner_budget, seed)
        return val, perm

    candidates: list[tuple[float, tuple[int, ...], np.ndarray]] = []
    evals = 0
    for j in classification.irrational_indices:
        c = UV[:, j]
        val, perm = inner(c)
        evals += 1
        e = np.zeros(spec.dim, dtype=complex)
        e[j] = 1
        candidates.append((val, perm, e))

    restart_vals = []
    if nr >= 1:
        n_par = 2 * (nr - 1)
        bounds = np.array([[0, math.pi / 2]] * (nr - 1) + [[0, 2 * math.pi]] * (nr - 1)).reshape(-1, 2)
        UA = UV[:, A]

        def objective(x):
            return inner(UA @ _sphere_point(x, nr))[0]

        def restart(k):
            rng = _restart_rng(seed, k)
            x0 = rng.uniform(bounds[:, 0], bounds[:, 1]) if n_par else np.zeros(0)
            if n_par:
                x, val, ev = _coordinate_ascent(objective, x0, bounds, budget.iterations)
            else:
                x, val, ev = x0, objective(x0), 1
            return val, x, ev

        for val, x, ev in _map(restart, list(range(budget.restarts)), n_jobs):
            restart_vals.append(float(val))
            evals += ev
            e = np.zeros(spec.dim, dtype=complex)
            e[A] = _sphere_point(x, nr)
            candidates.append((val, inner(UA @ _sphere_point(x, nr))[1], e))

    val, perm, c_free = max(candidates, key=lambda r: r[0])
    psi = V @ c_free
    witness = FreeUnitarySpec(np.eye(nr), perm, np.zeros(classification.n_irrational))
    Uf = make_free_unitary(spec, classification, witness)
    value = 1.0 - revival_fidelity(spec, classification, Uf @ (U @ psi))
    return MonotoneEstimate(max(value, 0.0), "D", seed, budget, restart_vals,
                            classification.n_irrational <= EXHAUSTIVE_MAX_IRRATIONAL, evals, perm,
                            best_state=list(c_free))

"""Command-line experiment runner.

Every subcommand reads an optional config file, writes its data files into
``--out`` and adds ``metadata.json`` with the config echo and wall time. Data
files depend only on the config and seed.
"""
from __future__ import annotations

import argparse
import json
import os
import platform
import sys
import time
from itertools import product
from pathlib import Path

import numpy as np
from scipy.stats import unitary_group

from . import __version__
from .config import EXPERIMENTS, MAX_DENSE_QUBITS, ConfigError, ExperimentConfig, load_config, parse_pauli
from .hamiltonians import (
    TOY_MODEL_EIGENVALUES,
    TOY_MODEL_LISTED_EIGENVALUES,
    build_hamiltonian,
)
from .operators import PauliString, diagonalize, propagator
from .protocols import MAX_RECOVERY_QUBITS, run_recovery
from .resource import (
    Budget,
    make_free_state,
    make_free_unitary,
    monotone_D,
    monotone_G,
    monotone_R,
    random_free_unitary_spec,
    revival_correlator,
    revival_fidelity,
)
from .scrambling import (
    ScramblingSweep,
    SubsystemPair,
    check_otoc_bound,
    otoc,
    pauli_weight_series,
    write_series_csv,
)
from .spectral import check_irrational_spacing, classification_report, classify, revival_period

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_SIZE = 0, 2, 3, 4


class SizeGuardError(MemoryError):
    """The requested system is too large for dense simulation."""


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


class Context:
    """Hamiltonian, spectrum and RNG shared by the experiment functions."""

    def __init__(self, cfg: ExperimentConfig, out: Path, threads: int):
        self.cfg = cfg
        self.out = out
        self.threads = threads
        self.rng = np.random.default_rng(cfg.seed)
        n = cfg.n_qubits
        if n > MAX_DENSE_QUBITS:
            raise SizeGuardError(f"n={n} exceeds the dense limit of {MAX_DENSE_QUBITS} qubits")
        try:
            self.H, self.truth = build_hamiltonian(cfg.hamiltonian, seed=cfg.seed)
        except (ValueError, KeyError, OSError) as exc:
            raise ConfigError(f"cannot build Hamiltonian: {exc}") from None
        self.spec = diagonalize(self.H)
        self.n = self.spec.n_qubits
        self._classification = None
        self.outputs: list[str] = []

    @property
    def classification(self):
        if self._classification is None:
            self._classification = classify(self.spec, self.cfg.tolerance, self.cfg.max_denominator)
        return self._classification

    @property
    def budget(self) -> Budget:
        return Budget(self.cfg.restarts, self.cfg.iterations)

    def path(self, name: str) -> Path:
        self.outputs.append(name)
        return self.out / name

    def pauli(self, text: str) -> PauliString:
        return parse_pauli(text, self.n)

    def state(self) -> np.ndarray:
        kind, _, arg = self.cfg.state.partition(":")
        c, d = self.classification, self.spec.dim
        if kind == "rational-random":
            a = self.rng.normal(size=c.n_rational) + 1j * self.rng.normal(size=c.n_rational)
            return make_free_state(self.spec, c, a / np.linalg.norm(a))
        if kind == "irrational":
            return make_free_state(self.spec, c, irrational_index=c.irrational_indices[int(arg or 0)])
        if kind == "resourceful-random":
            a = self.rng.normal(size=d) + 1j * self.rng.normal(size=d)
            return self.spec.eigenvectors @ (a / np.linalg.norm(a))
        if kind == "basis":
            psi = np.zeros(d, dtype=complex)
            psi[int(arg or 0)] = 1
            return psi
        if kind == "haar":
            return unitary_group.rvs(d, random_state=self.rng)[:, 0]
        raise ConfigError(f"unknown state {self.cfg.state!r}")

    def unitary(self) -> np.ndarray:
        kind, _, arg = self.cfg.unitary.partition(":")
        if kind == "haar":
            return unitary_group.rvs(self.spec.dim, random_state=self.rng)
        if kind == "free":
            u = random_free_unitary_spec(self.classification, self.rng)
            return make_free_unitary(self.spec, self.classification, u)
        if kind == "evolve":
            return propagator(self.spec, float(arg or 1.0))
        raise ConfigError(f"unknown unitary {self.cfg.unitary!r}")


def run_spectrum(ctx: Context) -> None:
    c = ctx.classification
    viol = check_irrational_spacing(c, ctx.spec)
    with ctx.path("spectrum.csv").open("w", newline="") as fh:
        fh.write("index,eigenvalue,is_rational,numerator,denominator\n")
        for i, e in enumerate(ctx.spec.eigenvalues):
            f = c.rational_values.get(i)
            num, den = (f.numerator, f.denominator) if f is not None else ("", "")
            fh.write(f"{i},{e:.17g},{int(f is not None)},{num},{den}\n")
    _write_json(ctx.path("classification.json"), classification_report(c, viol))


def run_revival(ctx: Context) -> None:
    psi = ctx.state()
    times = ctx.cfg.time_grid.times()
    c = ctx.spec.eigenvectors.conj().T @ psi
    w = np.abs(c) ** 2
    f = np.array([abs(np.dot(w, ctx.spec.phases(t))) for t in times])
    write_series_csv(ctx.path("revival.csv"), times, {"fidelity": f})
    _write_json(ctx.path("revival.json"), {
        "T": ctx.classification.T,
        "revival_time": revival_period(ctx.classification),
        "revival_fidelity": revival_fidelity(ctx.spec, ctx.classification, psi),
        "state": ctx.cfg.state,
    })


def run_monotone(ctx: Context) -> None:
    c, b, seed = ctx.classification, ctx.budget, ctx.cfg.seed
    psi = ctx.state()
    U = ctx.unitary()
    O = ctx.pauli(ctx.cfg.observable).to_matrix()
    r = monotone_R(ctx.spec, c, psi, b, seed=seed, n_jobs=ctx.threads)
    g = monotone_G(ctx.spec, c, O, b, seed=seed, n_jobs=ctx.threads)
    d = monotone_D(ctx.spec, c, U, b, seed=seed, n_jobs=ctx.threads)
    _write_json(ctx.path("monotone.json"), {
        "R": r.to_dict(),
        "one_minus_revival_fidelity": 1 - revival_fidelity(ctx.spec, c, psi),
        "G": g.to_dict(),
        "one_minus_correlator": 1 - revival_correlator(ctx.spec, c, O),
        "D": d.to_dict(),
        "inputs": {"state": ctx.cfg.state, "observable": ctx.cfg.observable, "unitary": ctx.cfg.unitary},
    })


def run_otoc(ctx: Context) -> None:
    O1 = ctx.pauli(ctx.cfg.observable).to_matrix()
    O2 = ctx.pauli(ctx.cfg.observable2).to_matrix()
    times = ctx.cfg.time_grid.times()
    vals = np.array([otoc(ctx.spec, O1, O2, t) for t in times])
    write_series_csv(ctx.path("otoc.csv"), times, {"real": vals.real, "imag": vals.imag})


def run_hayden_preskill(ctx: Context) -> None:
    pair = SubsystemPair(ctx.n, ctx.cfg.A, ctx.cfg.output_sites)
    sweep = ScramblingSweep(ctx.spec, pair)
    times = ctx.cfg.time_grid.times()
    avg = sweep.avg_series(times, ctx.threads)
    fid = np.array([sweep.fidelity_from_avg(a) for a in avg])
    write_series_csv(ctx.path("hayden_preskill.csv"), times, {"decoding_fidelity": fid, "avg_otoc": avg})


def run_z1_overlap(ctx: Context) -> None:
    times = ctx.cfg.time_grid.times()
    vals = pauli_weight_series(ctx.spec, ctx.pauli(ctx.cfg.observable), times)
    write_series_csv(ctx.path("z1_overlap.csv"), times, {"overlap": vals})


def run_recovery_experiment(ctx: Context) -> None:
    if ctx.n > MAX_RECOVERY_QUBITS:
        raise SizeGuardError(f"recovery runs are limited to n <= {MAX_RECOVERY_QUBITS}, got n={ctx.n}")
    O = ctx.pauli(ctx.cfg.observable)
    records = []
    for _ in range(ctx.cfg.runs):
        phi = ctx.state()
        run = run_recovery(ctx.spec, ctx.classification, phi, ctx.cfg.t1, ctx.cfg.m, ctx.cfg.p, O)
        rec = run.to_record(seed=ctx.cfg.seed)
        rec["exact_reconstruction"] = run.exact_reconstruction
        rec["closed_form_residual"] = run.closed_form_residual
        records.append(rec)
    _write_json(ctx.path("recovery.json"), {"runs": records})


def run_bound_check(ctx: Context) -> None:
    if ctx.cfg.observable.strip().lower() == "all":
        if ctx.n > 6:
            raise SizeGuardError("bound-check over all Pauli strings is limited to n <= 6")
        paulis = [PauliString("".join(p)) for p in product("IXYZ", repeat=ctx.n)]
    else:
        paulis = [ctx.pauli(s) for s in ctx.cfg.observable.split(";")]
    rows = []
    for P in paulis:
        rep = check_otoc_bound(ctx.spec, ctx.classification, P, budget=ctx.budget, seed=ctx.cfg.seed)
        rows.append({"pauli": str(P), **rep.to_dict()})
    _write_json(ctx.path("bound_check.json"), {"checks": rows, "all_hold": all(r["holds"] for r in rows)})


def run_toy_verify(ctx: Context) -> None:
    if ctx.cfg.hamiltonian.kind != "ToyModel":
        raise ConfigError("toy-verify needs the ToyModel Hamiltonian")
    E = ctx.spec.eigenvalues
    c = ctx.classification
    viol = check_irrational_spacing(c, ctx.spec)

    def deviation(expected):
        ref = np.sort([float(x) for x in expected])
        return float(np.max(np.abs(E - ref)))

    dev_listed = deviation(TOY_MODEL_LISTED_EIGENVALUES)
    dev_tr = deviation(TOY_MODEL_EIGENVALUES)
    report = {
        "eigenvalues": [float(e) for e in E],
        "expected": [str(x) for x in TOY_MODEL_EIGENVALUES],
        "max_deviation": dev_tr,
        "listed": [str(x) for x in TOY_MODEL_LISTED_EIGENVALUES],
        "listed_max_deviation": dev_listed,
        "n_rational": c.n_rational,
        "spacing_violations": [list(p) for p in viol],
        "classification": classification_report(c, viol),
    }
    report["verified"] = dev_tr <= 1e-9 and c.n_rational == 1 and not viol
    _write_json(ctx.path("toy_verify.json"), report)
    if not report["verified"]:
        raise FloatingPointError("toy model spectrum does not match its exact eigenvalues")


RUNNERS = {
    "spectrum": run_spectrum,
    "revival": run_revival,
    "monotone": run_monotone,
    "otoc": run_otoc,
    "hayden-preskill": run_hayden_preskill,
    "z1-overlap": run_z1_overlap,
    "recovery": run_recovery_experiment,
    "bound-check": run_bound_check,
    "toy-verify": run_toy_verify,
}


def run(cfg: ExperimentConfig, out: Path, threads: int = 1) -> list[str]:
    """Execute one experiment; returns the data files written (metadata excluded)."""
    start = time.perf_counter()
    out.mkdir(parents=True, exist_ok=True)
    ctx = Context(cfg, out, threads)
    RUNNERS[cfg.experiment](ctx)
    _write_json(out / "metadata.json", {
        "experiment": cfg.experiment,
        "config": cfg.to_mapping(),
        "seed": cfg.seed,
        "version": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
        "threads": threads,
        "outputs": ctx.outputs,
        "wall_time_s": time.perf_counter() - start,
    })
    return ctx.outputs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonrevival", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="INI or JSON experiment config")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads")
        p.add_argument("--out", type=Path, help="output directory (default: config output or ./out)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            cfg = load_config(args.config, args.experiment)
        else:
            cfg = ExperimentConfig.from_mapping({}, args.experiment)
        if args.seed is not None:
            cfg = cfg.replace(seed=args.seed)
        if args.threads < 1:
            raise ConfigError("--threads must be positive")
        out = args.out or Path(cfg.output_path or "out")
        run(cfg, out, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MemoryError as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (ArithmeticError, ValueError, AssertionError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

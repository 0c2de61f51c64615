"""Experiment configuration: INI or JSON files with one section per concern.

Example::

    [experiment]
    name = hayden-preskill
    seed = 7

    [hamiltonian]
    kind = PXP
    n_qubits = 8

    [time_grid]
    start = 0
    stop = 30
    points = 600

    [subsystems]
    A = 1
    D = 8

JSON input uses the same sections as nested objects. List-valued keys are
comma-separated in INI files.
"""
from __future__ import annotations

import configparser
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .hamiltonians import HamiltonianSpec
from .operators import PauliString
from .spectral import DEFAULT_MAX_DENOMINATOR, DEFAULT_TOLERANCE

__all__ = ["EXPERIMENTS", "ConfigError", "TimeGrid", "ExperimentConfig", "load_config", "parse_pauli"]

EXPERIMENTS = (
    "spectrum", "revival", "monotone", "otoc", "hayden-preskill",
    "z1-overlap", "recovery", "bound-check", "toy-verify",
)
MAX_DENSE_QUBITS = 12

_LIST_KEYS = {("hamiltonian", "rational"), ("hamiltonian", "irrational"),
              ("subsystems", "A"), ("subsystems", "D")}


class ConfigError(ValueError):
    """The configuration is malformed or inconsistent."""


@dataclass(frozen=True)
class TimeGrid:
    start: float = 0.0
    stop: float = 30.0
    points: int = 600

    def __post_init__(self):
        if int(self.points) < 2:
            raise ConfigError("time grid needs at least two points")
        if not np.isfinite([self.start, self.stop]).all() or self.stop <= self.start:
            raise ConfigError("time grid needs finite start < stop")

    def times(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.points))


def parse_pauli(text: str, n_qubits: int) -> PauliString:
    """``"ZIII"`` (one letter per site) or site form such as ``"Z1"`` or ``"X1 Z3"``."""
    s = text.strip().upper()
    if len(s) == n_qubits and set(s) <= set("IXYZ"):
        return PauliString(s)
    sites = {}
    for tok in s.replace(",", " ").split():
        if len(tok) < 2 or tok[0] not in "IXYZ" or not tok[1:].isdigit():
            raise ConfigError(f"cannot parse Pauli token {tok!r} in {text!r}")
        sites[int(tok[1:])] = tok[0]
    if not sites:
        raise ConfigError(f"empty Pauli specification {text!r}")
    try:
        return PauliString.from_sites(n_qubits, sites)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one CLI run needs; ``to_mapping`` and ``from_mapping`` round-trip."""

    experiment: str
    hamiltonian: HamiltonianSpec = field(default_factory=lambda: HamiltonianSpec("PXP", 8))
    time_grid: TimeGrid = TimeGrid()
    A: tuple[int, ...] = (1,)
    D: tuple[int, ...] = ()
    tolerance: float = DEFAULT_TOLERANCE
    max_denominator: int = DEFAULT_MAX_DENOMINATOR
    restarts: int = 8
    iterations: int = 50
    seed: int = 0
    output_path: str | None = None
    state: str = "rational-random"
    observable: str = "Z1"
    observable2: str = "Z2"
    unitary: str = "haar"
    t1: float = 1.0
    m: int = 1
    p: float = 0.1
    runs: int = 1

    @property
    def n_qubits(self) -> int:
        if self.hamiltonian.n_qubits is not None:
            return int(self.hamiltonian.n_qubits)
        if self.hamiltonian.kind == "ToyModel":
            return 2
        p = self.hamiltonian.params
        if self.hamiltonian.kind == "ExplicitMatrix":
            d = _explicit_dim(p.get("path"))
        else:
            d = len(p.get("rational", ())) + len(p.get("irrational", ()))
        return max(d.bit_length() - 1, 0)

    @property
    def output_sites(self) -> tuple[int, ...]:
        """``D``, defaulting to the last site."""
        return self.D or (self.n_qubits,)

    def to_mapping(self) -> dict:
        h = self.hamiltonian
        hm = {"kind": h.kind}
        if h.n_qubits is not None:
            hm["n_qubits"] = int(h.n_qubits)
        for k, v in h.params.items():
            hm[k] = [str(x) for x in v] if isinstance(v, (list, tuple)) else v
        return {
            "experiment": {"name": self.experiment, "seed": self.seed, "output": self.output_path},
            "hamiltonian": hm,
            "time_grid": {"start": self.time_grid.start, "stop": self.time_grid.stop,
                          "points": self.time_grid.points},
            "subsystems": {"A": list(self.A), "D": list(self.D)},
            "classification": {"tolerance": self.tolerance, "max_denominator": self.max_denominator},
            "budget": {"restarts": self.restarts, "iterations": self.iterations},
            "inputs": {"state": self.state, "observable": self.observable,
                       "observable2": self.observable2, "unitary": self.unitary},
            "recovery": {"t1": self.t1, "m": self.m, "p": self.p, "runs": self.runs},
        }

    @classmethod
    def from_mapping(cls, data: dict, experiment: str | None = None) -> "ExperimentConfig":
        try:
            return cls._from_mapping(data, experiment)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid configuration: {exc}") from None

    @classmethod
    def _from_mapping(cls, data: dict, experiment: str | None) -> "ExperimentConfig":
        known = {"experiment", "hamiltonian", "time_grid", "subsystems", "classification",
                 "budget", "inputs", "recovery"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config sections {sorted(unknown)}")
        sec = {k: _normalize_section(k, {} if data.get(k) is None else data[k]) for k in known}
        ex = sec["experiment"]
        name = ex.get("name") or experiment
        if experiment is not None and name != experiment:
            raise ConfigError(f"config is for {name!r} but subcommand is {experiment!r}")
        if name not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
        seed = int(ex.get("seed", 0))
        if not 0 <= seed < 2**64:
            raise ConfigError("seed must be a non-negative 64-bit integer")

        hm = dict(sec["hamiltonian"])
        default_kind = "ToyModel" if name == "toy-verify" else "PXP"
        kind = hm.pop("kind", default_kind)
        if kind not in HamiltonianSpec.KINDS:
            raise ConfigError(f"unknown Hamiltonian kind {kind!r}")
        nq = hm.pop("n_qubits", 8 if kind == "PXP" else None)
        nq = None if nq in (None, "") else int(nq)
        for k in ("E0", "E1"):
            if k in hm:
                hm[k] = float(hm[k])
        if "basis_seed" in hm:
            hm["basis_seed"] = int(hm["basis_seed"])
        ham = HamiltonianSpec(kind, nq, hm)

        tg = sec["time_grid"]
        grid = TimeGrid(float(tg.get("start", 0.0)), float(tg.get("stop", 30.0)), int(tg.get("points", 600)))
        sub = sec["subsystems"]
        cl = sec["classification"]
        bu = sec["budget"]
        inp = sec["inputs"]
        rec = sec["recovery"]
        cfg = cls(
            experiment=name,
            hamiltonian=ham,
            time_grid=grid,
            A=tuple(int(s) for s in sub.get("A", (1,))),
            D=tuple(int(s) for s in sub.get("D", ())),
            tolerance=float(cl.get("tolerance", DEFAULT_TOLERANCE)),
            max_denominator=int(cl.get("max_denominator", DEFAULT_MAX_DENOMINATOR)),
            restarts=int(bu.get("restarts", 8)),
            iterations=int(bu.get("iterations", 50)),
            seed=seed,
            output_path=ex.get("output") or None,
            state=str(inp.get("state", "rational-random")),
            observable=str(inp.get("observable", "Z1")),
            observable2=str(inp.get("observable2", "Z2")),
            unitary=str(inp.get("unitary", "haar")),
            t1=float(rec.get("t1", 1.0)),
            m=int(rec.get("m", 1)),
            p=float(rec.get("p", 0.1)),
            runs=int(rec.get("runs", 1)),
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        n = self.n_qubits
        for name, sites in (("A", self.A), ("D", self.output_sites)):
            bad = [s for s in sites if not 1 <= s <= n]
            if bad:
                raise ConfigError(f"subsystem {name} sites {bad} outside 1..{n}")
        if self.restarts < 1 or self.iterations < 1:
            raise ConfigError("budget restarts and iterations must be positive")
        if self.tolerance <= 0 or self.max_denominator < 1:
            raise ConfigError("classification tolerance must be positive and max_denominator >= 1")
        if not 0 < self.p < 1:
            raise ConfigError("recovery strength p must lie in (0, 1)")
        if self.runs < 1:
            raise ConfigError("recovery runs must be positive")

    def replace(self, **changes) -> "ExperimentConfig":
        data = self.to_mapping()
        if "seed" in changes:
            data["experiment"]["seed"] = changes.pop("seed")
        if "output_path" in changes:
            data["experiment"]["output"] = changes.pop("output_path")
        if changes:
            raise TypeError(f"unsupported overrides {sorted(changes)}")
        return ExperimentConfig.from_mapping(data)


def _explicit_dim(path) -> int:
    """Dimension from the ``dim d`` header of a matrix file."""
    if not path:
        raise ConfigError("ExplicitMatrix needs a path")
    try:
        with open(path) as fh:
            for line in fh:
                head = line.split("#", 1)[0].split()
                if head:
                    break
            else:
                head = []
    except OSError as exc:
        raise ConfigError(f"cannot read matrix file {path}: {exc}") from None
    if len(head) != 2 or head[0] != "dim" or not head[1].isdigit():
        raise ConfigError(f"{path}: expected header 'dim d'")
    return int(head[1])


def _normalize_section(name: str, sec) -> dict:
    if not isinstance(sec, dict):
        raise ConfigError(f"section [{name}] must be a mapping")
    out = {}
    for k, v in sec.items():
        if (name, k) in _LIST_KEYS:
            if isinstance(v, str):
                v = [x.strip() for x in v.split(",") if x.strip()]
            elif isinstance(v, (int, float)):
                v = [v]
            v = list(v)
        out[k] = v
    return out


def load_config(path, experiment: str | None = None) -> ExperimentConfig:
    """Read ``.json`` files as JSON and anything else as INI."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    else:
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        parser.optionxform = str
        try:
            parser.read_string(text, source=str(path))
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None
        data = {s: dict(parser[s]) for s in parser.sections()}
    return ExperimentConfig.from_mapping(data, experiment)

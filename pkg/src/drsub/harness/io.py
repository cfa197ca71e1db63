"""Instance files, graph files, run reports and trajectory CSVs."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..constraints import Box, Constraint, constraint_from_dict
from ..errors import DimensionMismatch, GraphParseError, MalformedInput, NegativeWeight
from ..objectives import Objective, build_objective
from ..solvers.report import SolveReport, SolverConfig

CSV_COLUMNS = ("k", "t", "f", "gap", "gamma")


def read_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def write_json(data, path=None, indent=2) -> str:
    text = json.dumps(data, indent=indent)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def load_graph(path, n: int | None = None, undirected: bool = False) -> np.ndarray:
    """Parse ``i j w`` lines (0-indexed) into a dense weight matrix; duplicates are summed.

    Blank lines and lines starting with ``#`` are skipped. ``undirected`` adds
    each edge in both directions.
    """
    edges = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise GraphParseError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise GraphParseError(f"line {lineno}: expected 'i j w', got {line!r}")
        try:
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise GraphParseError(f"line {lineno}: {exc}") from exc
        if i < 0 or j < 0:
            raise GraphParseError(f"line {lineno}: negative node index")
        if not math.isfinite(w):
            raise GraphParseError(f"line {lineno}: weight is not finite")
        if w < 0:
            raise NegativeWeight(f"line {lineno}: negative weight {w}")
        edges.append((i, j, w))
    size = max([max(i, j) + 1 for i, j, _ in edges], default=0)
    if n is not None:
        if size > n:
            raise GraphParseError(f"node index {size - 1} exceeds n={n}")
        size = n
    W = np.zeros((size, size))
    for i, j, w in edges:
        W[i, j] += w
        if undirected:
            W[j, i] += w
    return W


@dataclass
class InstanceSpec:
    """Objective spec plus constraint spec; either may also be a path to a JSON file."""

    objective: dict | str
    constraint: dict | str | None = None
    label: str = ""
    seed: int = 0
    info: dict = field(default_factory=dict)

    def objective_spec(self) -> dict:
        return read_json(self.objective) if isinstance(self.objective, (str, Path)) else self.objective

    def constraint_spec(self) -> dict | None:
        c = self.constraint
        return read_json(c) if isinstance(c, (str, Path)) else c

    def build(self) -> tuple[Objective, Constraint]:
        obj = build_objective(self.objective_spec())
        spec = self.constraint_spec()
        con = Box.from_domain(obj.domain) if spec is None else constraint_from_dict(spec)
        if con.n != obj.n:
            raise DimensionMismatch(f"objective has n={obj.n}, constraint has n={con.n}")
        return obj, con

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "constraint": self.constraint,
            "label": self.label,
            "seed": self.seed,
            "info": self.info,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceSpec":
        if "family" in data:  # a bare objective file
            return cls(data, None, data.get("label", data["family"]), 0)
        if "objective" not in data:
            raise MalformedInput("instance needs an 'objective' entry")
        return cls(data["objective"], data.get("constraint"), data.get("label", ""), int(data.get("seed", 0)),
                   data.get("info", {}))

    def save(self, path) -> None:
        write_json(self.to_dict(), path)

    @classmethod
    def load(cls, path) -> "InstanceSpec":
        spec = cls.from_dict(read_json(path))
        base = Path(path).parent
        # relative file references resolve against the instance file
        if isinstance(spec.objective, str):
            spec.objective = str(base / spec.objective)
        if isinstance(spec.constraint, str):
            spec.constraint = str(base / spec.constraint)
        if not spec.label:
            spec.label = Path(path).stem
        return spec


@dataclass
class RunReport:
    algorithm: str
    label: str
    config: dict
    trajectory: list[dict]
    solution: list[float]
    solution_f: float
    best_f: float
    f_star: float | None
    certificate: dict
    wallclock: float
    extras: dict = field(default_factory=dict)

    @classmethod
    def from_solve(cls, report: SolveReport, label: str, cfg: SolverConfig, f_star: float | None = None) -> "RunReport":
        traj = [{"k": r.k, "t": r.t, "f": r.f, "gap": r.gap, "gamma": r.gamma, "x": r.x.tolist()} for r in report.trajectory]
        return cls(
            algorithm=report.algorithm,
            label=label,
            config=cfg.to_dict(),
            trajectory=traj,
            solution=report.solution.tolist(),
            solution_f=report.solution_f,
            best_f=report.best_f,
            f_star=f_star,
            certificate=report.certificate.with_f_star(f_star).to_dict(),
            wallclock=report.wallclock,
            extras=_jsonable(report.extras),
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(**data)

    def save(self, path) -> None:
        write_json(self.to_dict(), path)

    @classmethod
    def load(cls, path) -> "RunReport":
        return cls.from_dict(read_json(path))

    def write_csv(self, path) -> None:
        write_trajectory_csv(self.trajectory, path)


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_trajectory_csv(trajectory, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(CSV_COLUMNS)
        for rec in trajectory:
            row = rec if isinstance(rec, dict) else {c: getattr(rec, c) for c in CSV_COLUMNS}
            out.writerow([str(row["k"])] + ["%.17g" % row[c] for c in CSV_COLUMNS[1:]])


def read_trajectory_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [{"k": int(r["k"]), **{c: float(r[c]) for c in CSV_COLUMNS[1:]}} for r in csv.DictReader(fh)]

"""Batch experiments: generate instances, run the optimizer and the exact oracle."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from .errors import DomainError
from .exact import solve_exact, solve_exact_bounded
from .generators import gen_erdos_renyi, gen_selfdamped_tree
from .io import read_instance
from .mcmc import SCHEMA, AnnealConfig, run_chains
from .scontrol import SControlInstance

FAMILIES = ("ER", "TREE", "FILE")
SOLVERS = ("MCMC", "EXACT", "BOTH")

# Reported MCMC averages on ER instances. The delta behind them is unknown,
# so these are for side-by-side reading only.
REFERENCE_ER_MEANS = {5: 2.15, 8: 2.86, 10: 3.33, 12: 3.56, 15: 4.37, 18: 4.84, 20: 5.26, 50: 11.58, 100: 23.45}

CSV_COLUMNS = (
    "n",
    "instances",
    "mean_mcmc_cardinality",
    "mean_exact_cardinality",
    "mcmc_matches_exact",
    "mean_wall_time",
    "reference_mean",
)


def derive_seed(base_seed: int, family: str, n: int, index: int, role: str = "instance") -> int:
    """Stable 63-bit seed so serial and parallel runs see the same streams."""
    digest = hashlib.sha256(f"{base_seed}:{family}:{n}:{index}:{role}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass(frozen=True)
class ExperimentSpec:
    family: str
    sizes: tuple[int, ...] = ()
    instances_per_size: int = 100
    delta: float = 0.5
    seed: int = 0
    solver: str = "BOTH"
    anneal: dict[str, Any] = field(default_factory=dict)
    files: tuple[str, ...] = ()
    exact_max_n: int = 20
    exact_method: str = "enumerate"
    chains: int = 1
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "family", self.family.upper())
        object.__setattr__(self, "solver", self.solver.upper())
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        object.__setattr__(self, "files", tuple(self.files))
        if self.family not in FAMILIES:
            raise DomainError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.solver not in SOLVERS:
            raise DomainError(f"solver must be one of {SOLVERS}, got {self.solver!r}")
        if self.exact_method not in ("enumerate", "forts"):
            raise DomainError(f"exact_method must be 'enumerate' or 'forts', got {self.exact_method!r}")
        if self.instances_per_size < 1:
            raise DomainError("instances_per_size must be at least 1")
        if self.family == "FILE":
            if not self.files:
                raise DomainError("FILE family needs a non-empty 'files' list")
        elif not self.sizes:
            raise DomainError("sizes must be non-empty")
        if self.family == "ER" and not self.delta > 0:
            raise DomainError("delta must be positive")
        AnnealConfig(**self.anneal)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentSpec:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown experiment keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> ExperimentSpec:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class _Task:
    family: str
    n: int
    index: int
    instance_seed: int
    anneal: AnnealConfig
    delta: float
    path: str | None
    solver: str
    exact_max_n: int
    exact_method: str
    chains: int


def _instance_for(task: _Task) -> SControlInstance:
    if task.family == "ER":
        A = gen_erdos_renyi(task.n, task.delta, task.instance_seed)
    elif task.family == "TREE":
        A = gen_selfdamped_tree(task.n, task.instance_seed)
    else:
        A = read_instance(task.path)
    return SControlInstance.from_pattern(A)


def _run_task(task: _Task) -> dict[str, Any]:
    inst = _instance_for(task)
    record: dict[str, Any] = {
        "family": task.family,
        "n": inst.n,
        "index": task.index,
        "instance_seed": task.instance_seed,
        "edges": inst.G.edge_count,
        "mcmc_cardinality": None,
        "mcmc_feasible": None,
        "mcmc_set": None,
        "exact_optimum": None,
    }
    if task.path is not None:
        record["path"] = task.path
    started = time.perf_counter()
    if task.solver in ("MCMC", "BOTH"):
        rep = run_chains(inst, task.anneal, task.chains)
        record["mcmc_cardinality"] = rep.output_cardinality
        record["mcmc_feasible"] = rep.feasible
        record["mcmc_set"] = rep.output_set.sorted()
    if task.solver in ("EXACT", "BOTH") and inst.n <= task.exact_max_n:
        if task.exact_method == "forts":
            res = solve_exact_bounded(inst, inst.n, witness_cap=1)
        else:
            res = solve_exact(inst, max_n=task.exact_max_n, witness_cap=1)
        record["exact_optimum"] = res.optimum
    record["wall_time"] = time.perf_counter() - started
    return record


def _tasks(spec: ExperimentSpec) -> list[_Task]:
    base = AnnealConfig(**spec.anneal)
    tasks = []
    if spec.family == "FILE":
        jobs = [(0, i, p) for i, p in enumerate(spec.files)]
    else:
        jobs = [(n, i, None) for n in spec.sizes for i in range(spec.instances_per_size)]
    for n, i, path in jobs:
        tasks.append(
            _Task(
                family=spec.family,
                n=n,
                index=i,
                instance_seed=derive_seed(spec.seed, spec.family, n, i),
                anneal=replace(base, seed=derive_seed(spec.seed, spec.family, n, i, "anneal")),
                delta=spec.delta,
                path=path,
                solver=spec.solver,
                exact_max_n=spec.exact_max_n,
                exact_method=spec.exact_method,
                chains=spec.chains,
            )
        )
    return tasks


def _mean(xs: list) -> float | None:
    xs = [x for x in xs if x is not None]
    return sum(xs) / len(xs) if xs else None


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    rows: list[dict[str, Any]]
    details: list[dict[str, Any]]

    def to_dict(self) -> dict[str, Any]:
        spec = {f.name: getattr(self.spec, f.name) for f in fields(self.spec)}
        spec["sizes"] = list(spec["sizes"])
        spec["files"] = list(spec["files"])
        return {"schema": SCHEMA, "spec": spec, "rows": self.rows, "details": self.details}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow(["" if row[c] is None else repr(row[c]) for c in CSV_COLUMNS])
        return buf.getvalue()


def summarize(spec: ExperimentSpec, details: list[dict[str, Any]]) -> list[dict[str, Any]]:
    by_n: dict[int, list[dict[str, Any]]] = {}
    for d in details:
        by_n.setdefault(d["n"], []).append(d)
    rows = []
    for n in sorted(by_n):
        recs = by_n[n]
        both = [r for r in recs if r["mcmc_cardinality"] is not None and r["exact_optimum"] is not None]
        rows.append(
            {
                "n": n,
                "instances": len(recs),
                "mean_mcmc_cardinality": _mean([r["mcmc_cardinality"] for r in recs]),
                "mean_exact_cardinality": _mean([r["exact_optimum"] for r in recs]),
                "mcmc_matches_exact": (
                    sum(r["mcmc_cardinality"] == r["exact_optimum"] for r in both) / len(both) if both else None
                ),
                "mean_wall_time": _mean([r["wall_time"] for r in recs]),
                "reference_mean": REFERENCE_ER_MEANS.get(n) if spec.family == "ER" else None,
            }
        )
    return rows


def run_experiment(spec: ExperimentSpec, workers: int | None = None, progress=None) -> ExperimentReport:
    """Run every (size, instance) pair; output order never depends on ``workers``."""
    tasks = _tasks(spec)
    workers = spec.workers if workers is None else workers
    details: list[dict[str, Any]] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for rec in pool.map(_run_task, tasks):
                details.append(rec)
                if progress:
                    progress(rec)
    else:
        for t in tasks:
            rec = _run_task(t)
            details.append(rec)
            if progress:
                progress(rec)
    return ExperimentReport(spec, summarize(spec, details), details)

"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria 5 and 6 run the default annealing schedule on hundreds of
instances and take several minutes each; they carry the ``slow`` marker.
Criterion 7 needs the IEEE 39-bus network, which is not shipped; point
``ZFC_IEEE39`` at a pattern or edge-list file to enable it.
"""
import json
import os
import random
import time

import numpy as np
import pytest

from zfcopt.cli import main as cli_main
from zfcopt.exact import solve_exact
from zfcopt.fixtures import BANDED_EXAMPLE_INPUTS, worked_example, banded_example
from zfcopt.harness import REFERENCE_ER_MEANS, ExperimentSpec, run_experiment
from zfcopt.mcmc import AnnealConfig, build_exact_tpm, empirical_distribution, gibbs_distribution, run, stationary_distribution, total_variation
from zfcopt.pattern import PatternMatrix, VertexSet
from zfcopt.scontrol import SControlInstance, cost, repair, verify, white_residuals
from zfcopt.zeroforcing import closure, is_zfs

from conftest import ACCEPTANCE_LINES, X, instance_zoo, naive_closure


def test_criterion_1_worked_example_golden(criterion):
    t = time.perf_counter()
    inst = SControlInstance.from_pattern(worked_example())
    E = VertexSet.empty(6)
    checks = {
        "closure residual from empty on G(A) is {x1,x6}": closure(inst.G, E).white_residual == X(6, 1, 6),
        "closure residual from {x6} on G(Ax) is {x1}": closure(inst.Gx, X(6, 6), inst.loops).white_residual == X(6, 1),
        "empty set is not a ZFS of G(A)": not is_zfs(inst.G, E),
        "{x1} is a ZFS of G(A)": is_zfs(inst.G, X(6, 1)),
        "{x6} is a ZFS of G(A)": is_zfs(inst.G, X(6, 6)),
        "{x1} ZFS of G(Ax) with barred self-forces": is_zfs(inst.Gx, X(6, 1), inst.loops),
        "{x6} fails on G(Ax)": not is_zfs(inst.Gx, X(6, 6), inst.loops),
        "verify empty is false": not verify(inst, E),
        "verify {x1} is true": verify(inst, X(6, 1)),
        "verify {x6} is false": not verify(inst, X(6, 6)),
        "residuals of empty are ({x1,x6},{x1})": white_residuals(inst, E) == (X(6, 1, 6), X(6, 1)),
    }
    res = solve_exact(inst)
    checks["exact optimum 1 with unique witness {x1}"] = res.optimum == 1 and res.witnesses == (X(6, 1),)
    elapsed = time.perf_counter() - t
    failed = [k for k, ok in checks.items() if not ok]
    ok = not failed and elapsed < 1.0
    criterion(1, ok, f"{len(checks) - len(failed)}/{len(checks)} checks, {elapsed:.3f}s (limit 1s) {failed or ''}")
    assert ok


def test_criterion_2_banded_example(criterion):
    t = time.perf_counter()
    inst = SControlInstance.from_pattern(banded_example())
    S = VertexSet.of(15, BANDED_EXAMPLE_INPUTS)
    feasible = verify(inst, S)
    res = solve_exact(inst, prune=True)
    elapsed = time.perf_counter() - t
    ok = feasible and res.optimum == 4 and S in res.witnesses and elapsed < 10
    criterion(2, ok, f"verify(displayed set)={feasible}, exact optimum={res.optimum}, "
                     f"{len(res.witnesses)} optimal sets, {elapsed:.2f}s (limit 10s)")
    assert ok


def test_criterion_3_stationary_distribution(criterion):
    t = time.perf_counter()
    rng = random.Random(2020)
    worst = {"row": 0.0, "balance": 0.0, "gibbs": 0.0}
    count = 0
    for inst in instance_zoo(20, 6, seed=rng.randrange(1 << 30)):
        count += 1
        for T in (0.3, 1.0, 3.0):
            P = build_exact_tpm(inst, T)
            pi = gibbs_distribution(inst, T)
            flow = pi[:, None] * P
            worst["row"] = max(worst["row"], float(np.max(np.abs(P.sum(axis=1) - 1))))
            worst["balance"] = max(worst["balance"], float(np.max(np.abs(flow - flow.T))))
            worst["gibbs"] = max(worst["gibbs"], float(np.max(np.abs(stationary_distribution(P) - pi))))
    elapsed = time.perf_counter() - t
    ok = count == 20 and all(v < 1e-10 for v in worst.values()) and elapsed < 60
    criterion(3, ok, f"{count} instances x 3 temperatures, max row-sum err {worst['row']:.1e}, "
                     f"detailed balance {worst['balance']:.1e}, stationary-vs-Gibbs {worst['gibbs']:.1e} "
                     f"(tol 1e-10), {elapsed:.1f}s")
    assert ok


def test_criterion_4_empirical_convergence(criterion):
    t = time.perf_counter()
    rows = [r[:3] for r in worked_example().rows()[:3]]
    inst = SControlInstance.from_pattern(PatternMatrix.from_rows(rows))
    freq = empirical_distribution(inst, 1.0, 1_000_000, burn_in=10_000, seed=11)
    exact = stationary_distribution(build_exact_tpm(inst, 1.0))
    tv = total_variation(freq, exact)
    elapsed = time.perf_counter() - t
    ok = tv < 0.02 and elapsed < 60
    criterion(4, ok, f"n=3, 10^6 steps, TV={tv:.5f} (limit 0.02), {elapsed:.1f}s")
    assert ok


@pytest.mark.slow
def test_criterion_5_er_oracle_equivalence(criterion):
    t = time.perf_counter()
    spec = ExperimentSpec(family="ER", sizes=(5, 8, 10, 12), instances_per_size=100, delta=0.5, seed=0)
    rep = run_experiment(spec, workers=1)
    elapsed = time.perf_counter() - t
    both = [d for d in rep.details if d["exact_optimum"] is not None]
    matches = sum(d["mcmc_cardinality"] == d["exact_optimum"] for d in both)
    rate = matches / len(both)
    table = ", ".join(
        f"n={r['n']}: mcmc {r['mean_mcmc_cardinality']:.2f} / exact {r['mean_exact_cardinality']:.2f} "
        f"/ reference {REFERENCE_ER_MEANS[r['n']]:.2f}"
        for r in rep.rows
    )
    ok = len(both) == 400 and rate >= 0.99 and elapsed < 1800
    criterion(5, ok, f"{matches}/{len(both)} match exact ({rate:.1%}, need 99%), {elapsed:.0f}s; {table}")
    assert ok


@pytest.mark.slow
def test_criterion_6_tree_optimality(criterion):
    t = time.perf_counter()
    spec = ExperimentSpec(family="TREE", sizes=(50,), instances_per_size=50, seed=0,
                          exact_method="forts", exact_max_n=50)
    rep = run_experiment(spec, workers=1)
    elapsed = time.perf_counter() - t
    matches = sum(d["mcmc_cardinality"] == d["exact_optimum"] for d in rep.details)
    mean = rep.rows[0]["mean_exact_cardinality"]
    ok = matches == 50 and all(d["mcmc_feasible"] for d in rep.details) and elapsed < 1800
    criterion(6, ok, f"{matches}/50 trees (n=50) match the exact optimum (mean {mean:.2f}), {elapsed:.0f}s")
    assert ok


def test_criterion_7_ieee39(criterion, tmp_path, capsys):
    path = os.environ.get("ZFC_IEEE39")
    if not path:
        line = "criterion 7: SKIP  set ZFC_IEEE39 to an IEEE 39-bus pattern or edge-list file to run"
        ACCEPTANCE_LINES.append(line)
        pytest.skip(line)
    t = time.perf_counter()
    out = tmp_path / "ieee39.json"
    code = cli_main(["solve", path, "--out", str(out)])
    capsys.readouterr()
    elapsed = time.perf_counter() - t
    d = json.loads(out.read_text())
    ok = code == 0 and d["feasible"] and d["output_cardinality"] <= 14 and elapsed < 60
    criterion(7, ok, f"n={d['n']}, {d['output_cardinality']} inputs (limit 14), "
                     f"feasible={d['feasible']}, {elapsed:.1f}s")
    assert ok


def test_criterion_8_iteration_count(criterion):
    inst = SControlInstance.from_pattern(worked_example())
    rep = run(inst, AnnealConfig())
    ok = rep.iterations == 143_000 and AnnealConfig().total_iterations() == 143_000
    criterion(8, ok, f"default schedule ran {rep.iterations} iterations (expected 143000)")
    assert ok


def test_criterion_9_property_suites(criterion):
    t = time.perf_counter()
    violations = {"closure": 0, "cost-minimisers": 0, "repair": 0, "determinism": 0}
    rng = random.Random(9)

    for inst in instance_zoo(50, 10, seed=900):
        n = inst.n
        for G, F in ((inst.G, VertexSet.empty(n)), (inst.Gx, inst.loops)):
            S = VertexSet(n, rng.getrandbits(n))
            black = closure(G, S, F).black
            for _ in range(100):
                if naive_closure(G, set(S), set(F), rng)[0] != set(black):
                    violations["closure"] += 1
            bigger = VertexSet(n, S.mask | rng.getrandbits(n))
            if not black <= closure(G, bigger, F).black or closure(G, black, F).black != black:
                violations["closure"] += 1

    for inst in instance_zoo(40, 10, seed=901):
        n = inst.n
        costs = [cost(inst, VertexSet(n, m)) for m in range(1 << n)]
        best = min(costs)
        argmin = {m for m, c in enumerate(costs) if c == best}
        opt = solve_exact(inst)
        feasible_opt = {m for m in range(1 << n) if m.bit_count() == opt.optimum and verify(inst, VertexSet(n, m))}
        if best != opt.optimum or argmin != feasible_opt:
            violations["cost-minimisers"] += 1
        for _ in range(10):
            S = VertexSet(n, rng.getrandbits(n))
            R = repair(inst, S)
            if not (S <= R and verify(inst, R) and repair(inst, R) == R):
                violations["repair"] += 1

    cfg = AnnealConfig(t_stop=0.01, epoch_len=300, seed=123)
    for inst in instance_zoo(5, 10, seed=902):
        a, b = run(inst, cfg).to_dict(), run(inst, cfg).to_dict()
        a.pop("wall_time"), b.pop("wall_time")
        if a != b:
            violations["determinism"] += 1

    elapsed = time.perf_counter() - t
    ok = not any(violations.values()) and elapsed < 600
    criterion(9, ok, f"violations {violations}, {elapsed:.1f}s (limit 600s)")
    assert ok

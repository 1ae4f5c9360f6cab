"""Command-line entry point: ``zfc-opt <subcommand> ...``.

Machine output (JSON/CSV) uses 0-based vertex ids; human summaries use the
1-based labels ``x1..xn``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .convert import convert_file, write_converted
from .errors import SizeGuardError, ZfcError
from .exact import solve_exact, solve_exact_bounded
from .generators import gen_erdos_renyi, gen_selfdamped_tree
from .harness import ExperimentSpec, run_experiment
from .io import read_instance, write_edge_list, write_pattern
from .mcmc import SCHEMA, AnnealConfig, Mode, run_chains, tpm_diagnostics
from .pattern import VertexSet, graph_of
from .scontrol import CostParams, SControlInstance, diagnose
from .zeroforcing import closure

log = logging.getLogger("zfcopt")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def _fmt(S: VertexSet) -> str:
    return "{" + ", ".join(S.labels()) + "}"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _parse_set(text: str, n: int) -> VertexSet:
    members = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        try:
            v = int(tok)
        except ValueError:
            raise ZfcError(f"bad vertex index {tok!r}") from None
        if not 0 <= v < n:
            raise ZfcError(f"vertex index {v} out of range for n={n} (indices are 0-based)")
        members.append(v)
    return VertexSet.of(n, members)


def _load(args) -> SControlInstance:
    return SControlInstance.from_pattern(read_instance(args.path, args.input_format))


def _anneal(args) -> AnnealConfig:
    return AnnealConfig(
        t0=args.t0,
        alpha=args.alpha,
        t_stop=args.tstop,
        epoch_len=args.epoch,
        epsilon=args.epsilon,
        seed=args.seed,
        mode=Mode(args.mode),
    )


def _write(path: str | None, text: str):
    if path:
        Path(path).write_text(text + ("" if text.endswith("\n") else "\n"), encoding="utf-8")


def cmd_solve(args) -> int:
    inst = _load(args)
    report = run_chains(inst, _anneal(args), args.chains, args.workers)
    payload = report.to_dict()
    payload["input"] = str(args.path)
    _write(args.out, _dump(payload))
    if args.format == "json":
        print(_dump(payload))
    else:
        print(f"instance: {args.path} (n={inst.n}, edges={inst.G.edge_count})")
        print(f"inputs ({report.output_cardinality}): {_fmt(report.output_set)}")
        print(f"feasible: {str(report.feasible).lower()}")
        print(f"mode: {report.mode.value}  iterations: {report.iterations}  seed: {report.seed}")
        if report.repaired:
            print("note: no feasible state was visited; output is the repaired final state")
        print(f"wall time: {report.wall_time:.2f}s")
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_verify(args) -> int:
    inst = _load(args)
    S = _parse_set(args.set, inst.n)
    d = diagnose(inst, S)
    payload = {
        "schema": SCHEMA,
        "set": S.sorted(),
        "controllable": d.controllable,
        "zfs_of_G": d.zfs_of_G,
        "zfs_of_Gx": d.zfs_of_Gx,
        "residual": d.residual.sorted(),
        "residual_x": d.residual_x.sorted(),
    }
    _write(args.out, _dump(payload))
    if args.format == "json":
        print(_dump(payload))
    else:
        print(f"set: {_fmt(S)}")
        print(f"verdict: {str(d.controllable).lower()}")
        print(f"condition 1 (zero forcing set of G(A)): {'pass' if d.zfs_of_G else 'FAIL'}")
        print(f"condition 2 (zero forcing set of G(A_x), no self-force at starred diagonal): "
              f"{'pass' if d.zfs_of_Gx else 'FAIL'}")
        if not d.controllable:
            print(f"residual W(S): {_fmt(d.residual)}")
            print(f"residual W_x(S): {_fmt(d.residual_x)}")
    return EXIT_OK if d.controllable else EXIT_INFEASIBLE


def cmd_zfs(args) -> int:
    inst = _load(args)
    n = inst.n
    S = _parse_set(args.set, n)
    if args.modified:
        G = inst.Gx
        forbidden = inst.loops if args.forbid is None else _parse_set(args.forbid, n)
    else:
        G = graph_of(inst.A)
        forbidden = _parse_set(args.forbid or "", n)
    res = closure(G, S, forbidden)
    payload = {
        "schema": SCHEMA,
        "graph": "G(A_x)" if args.modified else "G(A)",
        "initial": S.sorted(),
        "forbidden": forbidden.sorted(),
        "forces": [list(f) for f in res.forces],
        "black": res.black.sorted(),
        "white_residual": res.white_residual.sorted(),
        "zero_forcing_set": not res.white_residual,
    }
    _write(args.out, _dump(payload))
    if args.format == "json":
        print(_dump(payload))
    else:
        print(f"graph: {payload['graph']}  initial: {_fmt(S)}  forbidden self-forces: {_fmt(forbidden)}")
        for i, f in enumerate(res.labelled_forces(), start=1):
            print(f"  ({i}) {f}")
        print(f"white residual: {_fmt(res.white_residual)}")
        print(f"zero forcing set: {str(not res.white_residual).lower()}")
    return EXIT_OK


def cmd_exact(args) -> int:
    inst = _load(args)
    if args.k_max is not None:
        res = solve_exact_bounded(inst, args.k_max, args.witness_cap)
    else:
        res = solve_exact(inst, args.max_n, args.witness_cap)
    payload = {"schema": SCHEMA, "n": inst.n, "result": res.to_dict() if res else None}
    _write(args.out, _dump(payload))
    if args.format == "json":
        print(_dump(payload))
    elif res is None:
        print(f"no feasible input set with at most {args.k_max} inputs")
    else:
        print(f"optimum: {res.optimum}  (subsets checked: {res.subsets_checked})")
        more = " (truncated)" if res.truncated else ""
        print(f"witnesses{more}:")
        for w in res.witnesses[: args.show]:
            print(f"  {_fmt(w)}")
        if len(res.witnesses) > args.show:
            print(f"  ... {len(res.witnesses) - args.show} more")
    return EXIT_OK if res is not None else EXIT_INFEASIBLE


def cmd_experiment(args) -> int:
    spec = ExperimentSpec.load(args.spec)

    def progress(rec):
        log.info("n=%d #%d mcmc=%s exact=%s", rec["n"], rec["index"], rec["mcmc_cardinality"], rec["exact_optimum"])

    report = run_experiment(spec, workers=args.workers, progress=progress)
    if args.out:
        out = Path(args.out)
        _write(str(out), report.to_json())
        _write(str(out.with_suffix(".csv")), report.to_csv())
    if args.format == "json":
        print(report.to_json())
    elif args.format == "csv":
        print(report.to_csv(), end="")
    else:
        print(f"{'n':>6} {'inst':>5} {'mcmc':>8} {'exact':>8} {'match':>7} {'ref':>7} {'time/s':>8}")
        for r in report.rows:
            def f(x, spec=".2f"):
                return "-" if x is None else format(x, spec)
            print(f"{r['n']:>6} {r['instances']:>5} {f(r['mean_mcmc_cardinality']):>8} "
                  f"{f(r['mean_exact_cardinality']):>8} {f(r['mcmc_matches_exact'], '.0%'):>7} "
                  f"{f(r['reference_mean']):>7} {f(r['mean_wall_time']):>8}")
    return EXIT_OK


def cmd_tpm_check(args) -> int:
    inst = _load(args)
    if inst.n > args.max_n:
        raise SizeGuardError(f"tpm-check is limited to n <= {args.max_n}; instance has n={inst.n}")
    d = tpm_diagnostics(inst, args.temperature, CostParams(args.epsilon), args.max_n)
    payload = {
        "schema": SCHEMA,
        "n": d.n,
        "temperature": d.temperature,
        "max_row_sum_deviation": d.max_row_sum_deviation,
        "max_detailed_balance_violation": d.max_detailed_balance_violation,
        "stationary_vs_gibbs_tv": d.stationary_vs_gibbs_tv,
        "stationary_vs_gibbs_max_abs": d.stationary_vs_gibbs_max_abs,
    }
    _write(args.out, _dump(payload))
    if args.format == "json":
        print(_dump(payload))
    else:
        print(f"n={d.n} states={1 << d.n} T={d.temperature}")
        print(f"max |row sum - 1|            : {d.max_row_sum_deviation:.3e}")
        print(f"max detailed-balance residual: {d.max_detailed_balance_violation:.3e}")
        print(f"TV(stationary, Gibbs)        : {d.stationary_vs_gibbs_tv:.3e}")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.family == "er":
        A = gen_erdos_renyi(args.n, args.delta, args.seed)
    else:
        A = gen_selfdamped_tree(args.n, args.seed)
    if args.as_ == "edges":
        write_edge_list(graph_of(A), args.out)
    else:
        write_pattern(A, args.out)
    print(f"wrote {args.family} instance n={A.n} stars={A.star_count()} to {args.out}")
    return EXIT_OK


def cmd_convert(args) -> int:
    G, labels = convert_file(args.src, args.from_, args.undirected)
    write_converted(G, labels, args.out)
    print(f"wrote {G.n} vertices and {G.edge_count} edges to {args.out}")
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, with_input: bool = True):
    if with_input:
        p.add_argument("path", help="pattern matrix ('0'/'x' rows) or edge list file")
        p.add_argument("--input-format", choices=("auto", "matrix", "edges"), default="auto")
    p.add_argument("--out", help="write machine-readable output to this file")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text", help="stdout format")


def _add_anneal(p: argparse.ArgumentParser):
    d = AnnealConfig()
    p.add_argument("--t0", type=float, default=d.t0)
    p.add_argument("--alpha", type=float, default=d.alpha)
    p.add_argument("--tstop", type=float, default=d.t_stop)
    p.add_argument("--epoch", type=int, default=d.epoch_len)
    p.add_argument("--epsilon", type=float, default=d.epsilon)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=d.mode.value)
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zfc-opt", description="Minimum input sets for strong structural controllability")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="annealed MCMC search for a minimum input set")
    _add_common(p)
    _add_anneal(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check whether a given input set is sufficient")
    _add_common(p)
    p.add_argument("--set", required=True, help="comma-separated 0-based vertex ids, e.g. '0,5'")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("zfs", help="raw zero-forcing closure")
    _add_common(p)
    p.add_argument("--set", default="", help="initial black vertices (0-based)")
    p.add_argument("--forbid", default=None, help="vertices barred from forcing themselves")
    p.add_argument("--modified", action="store_true",
                   help="use G(A_x); self-forces at starred diagonal entries are barred unless --forbid is given")
    p.set_defaults(func=cmd_zfs)

    p = sub.add_parser("exact", help="exhaustive optimum for small instances")
    _add_common(p)
    p.add_argument("--max-n", type=int, default=20)
    p.add_argument("--k-max", type=int, default=None, help="fort-guided search up to this many inputs")
    p.add_argument("--witness-cap", type=int, default=1000)
    p.add_argument("--show", type=int, default=20, help="witnesses to print")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("experiment", help="run a JSON experiment spec")
    p.add_argument("spec")
    _add_common(p, with_input=False)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("tpm-check", help="exact transition-matrix diagnostics (n <= 10)")
    _add_common(p)
    p.add_argument("--temperature", "-T", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--max-n", type=int, default=10)
    p.set_defaults(func=cmd_tpm_check)

    p = sub.add_parser("gen", help="write a generated instance")
    p.add_argument("--family", choices=("er", "tree"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--as", dest="as_", choices=("matrix", "edges"), default="matrix")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("convert", help="convert a MATPOWER case or labelled edge list to a 0-based edge list")
    p.add_argument("src")
    p.add_argument("--from", dest="from_", choices=("matpower", "edges"), required=True)
    p.add_argument("--undirected", action="store_true", help="emit both directions of every edge")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: cannot read {exc.filename}: {exc.strerror}", file=sys.stderr)
    except (ZfcError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

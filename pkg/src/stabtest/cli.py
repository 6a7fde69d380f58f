"""``stabtest`` command line: gen, analyze, sample, test, verify, enumerate.

Every command prints a single JSON document on stdout (or CSV with
``--format csv`` where offered).  Diagnostics go to stderr.  Exit codes:
0 success / "close", 1 "far" or a failed check, 2 usage errors, bad input
and infeasible plans.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import gf2, quantum, sampling, stabilizer, tester, verify

EXIT_OK, EXIT_FAR, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    """Bad input detected after argument parsing; reported with exit code 2."""


def _emit(doc) -> None:
    # json renders floats with repr, the shortest string that round-trips exactly
    sys.stdout.write(json.dumps(doc, allow_nan=False) + "\n")


def _load(path: str) -> quantum.DensityMatrix:
    try:
        return quantum.load_state(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


# ---------- commands

def cmd_gen(args) -> int:
    rho = quantum.gen_state(
        args.kind, args.n, args.seed,
        rank=args.rank, index=args.index, p=args.p, path=args.input,
    )
    if args.out:
        quantum.save_state(rho, args.out)
        _emit({"written": args.out, "n": rho.n, "purity": rho.purity()})
    else:
        _emit(rho.to_json())
    return EXIT_OK


def _tables(rho):
    return {
        "p": quantum.p_table(rho),
        "p_hat": quantum.p_hat_table(rho),
        "q": quantum.q_table(rho),
    }


def cmd_analyze(args) -> int:
    rho = _load(args.file)
    tables = _tables(rho)
    if args.format == "csv":
        sys.stdout.write(tables[args.table].to_csv())
        return EXIT_OK
    doc = {"n": rho.n}
    doc.update(quantum.bias_report(rho).to_json())
    doc["tables"] = {name: t.to_json() for name, t in tables.items()}
    if rho.n <= stabilizer.MAX_ENUM_QUBITS:
        fid, best = stabilizer.stabilizer_fidelity(rho)
        doc["stabilizer_fidelity"] = fid
        doc["best_stabilizer"] = best.to_json()
    else:
        doc["stabilizer_fidelity"] = None
        doc["best_stabilizer"] = None
    _emit(doc)
    return EXIT_OK


def _config(args) -> sampling.SamplerConfig:
    return sampling.SamplerConfig(mode=args.mode, seed=args.seed, shards=args.threads)


def cmd_sample(args) -> int:
    rho = _load(args.file)
    cfg = _config(args)
    xs, outcomes = sampling.eta_samples(rho, cfg, args.shots)
    if args.format == "csv":
        sys.stdout.write(sampling.samples_to_csv(rho.n, xs, outcomes))
        return EXIT_OK
    doc = sampling.summarize(outcomes).to_json()
    doc.update({"n": rho.n, "mode": cfg.mode, "seed": cfg.seed, "threads": cfg.shards})
    _emit(doc)
    return EXIT_OK


def cmd_test(args) -> int:
    try:
        plan = tester.plan_test(args.eps1, args.eps2, args.delta, eta_low=args.eta_low)
    except tester.InfeasiblePlanError as exc:
        print(f"stabtest test: {exc}", file=sys.stderr)
        _emit({"decision": "infeasible", "reason": str(exc)})
        return EXIT_ERROR
    rho = _load(args.file)
    verdict = tester.tolerant_test(rho, plan, _config(args))
    _emit(verdict.to_json())
    return EXIT_OK if verdict.close else EXIT_FAR


def cmd_verify(args) -> int:
    if args.check:
        unknown = [c for c in args.check if c not in verify.REGISTRY]
        if unknown:
            raise CliError(f"unknown check(s): {', '.join(unknown)}")
        names, skip = args.check, False
    else:
        names, skip = list(verify.REGISTRY), True
    if skip:
        names = [c for c in names if args.n <= verify.REGISTRY[c].max_n]
    for c in names:
        if args.n > verify.REGISTRY[c].max_n:
            raise CliError(f"check {c} supports n <= {verify.REGISTRY[c].max_n}")

    def run(name):
        return verify.run_check(name, args.n, args.trials, args.seed)

    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        reports = list(pool.map(run, names))
    _emit([r.to_json() for r in reports])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAR


def cmd_enumerate(args) -> int:
    if args.what == "lagrangians":
        items = [L.to_json() for L in gf2.enumerate_lagrangians(args.n)]
    else:
        items = [s.to_json() for s in stabilizer.enumerate_stabilizer_states(args.n)]
    _emit({"what": args.what, "n": args.n, "count": len(items), "items": items})
    return EXIT_OK


# ---------- parser

def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _sampler_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=sampling.MODES, default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive, default=1,
                   help="shard count; results are reproducible per (seed, threads)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabtest", description="Tolerant stabilizer testing toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a state file")
    g.add_argument("--kind", required=True,
                   choices=[k.replace("_", "-") for k in quantum.STATE_KINDS] + ["from-file"])
    g.add_argument("--n", type=int)
    g.add_argument("--rank", type=int)
    g.add_argument("--index", type=int, help="enumerated stabilizer index (n <= 3)")
    g.add_argument("--p", type=float, help="depolarizing weight")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--in", dest="input", help="source file for --kind from-file")
    g.add_argument("--out", help="write the state here instead of stdout")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="exact bias, tables and stabilizer fidelity")
    a.add_argument("file")
    a.add_argument("--format", choices=("json", "csv"), default="json")
    a.add_argument("--table", choices=("p", "p_hat", "q"), default="p", help="table for --format csv")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sample", help="simulate six-copy shots and estimate eta")
    s.add_argument("file")
    s.add_argument("--shots", type=_positive, required=True)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    _sampler_flags(s)
    s.set_defaults(func=cmd_sample)

    t = sub.add_parser("test", help="tolerant test: close (exit 0) or far (exit 1)")
    t.add_argument("file")
    t.add_argument("--eps1", type=float, required=True)
    t.add_argument("--eps2", type=float, required=True)
    t.add_argument("--delta", type=float, default=tester.DEFAULT_DELTA)
    t.add_argument("--eta-low", type=float, help="custom soundness value replacing (3 eps2 + 1)/4")
    _sampler_flags(t)
    t.set_defaults(func=cmd_test)

    v = sub.add_parser("verify", help="run named numerical checks")
    group = v.add_mutually_exclusive_group(required=True)
    group.add_argument("--suite", choices=("all",))
    group.add_argument("--check", action="append", help="check name (repeatable)")
    v.add_argument("--n", type=_positive, default=2)
    v.add_argument("--trials", type=_positive, default=verify.DEFAULT_TRIALS)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--threads", type=_positive, default=1)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enumerate", help="list Lagrangians or stabilizer states (n <= 3)")
    e.add_argument("--what", choices=("stabilizers", "lagrangians"), required=True)
    e.add_argument("--n", type=_positive, required=True)
    e.set_defaults(func=cmd_enumerate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"stabtest {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point.

Experiment subcommands share the global flags ``--seed --trials --threads
--out --config``; graph subcommands read graph6 strings and print JSON.
The exit status is 0 when every check passed, 1 when some check failed and
2 for usage errors or undecided (truncated) answers.
"""

from __future__ import annotations

import argparse
import json
import sys

from .graph import Graph, Graph6Error, from_graph6, induced, to_graph6
from .harness import ExperimentConfig, run_experiment
from .vminor import BudgetExceeded, is_k_vm_universal, is_vertex_minor, lc_orbit

EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED = 0, 1, 2


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, default=str))


def _global(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None, help="directory for <experiment>.jsonl and .csv")
    p.add_argument("--config", default=None, help="JSON file with ExperimentConfig fields")
    p.add_argument("--timing", action="store_true", help="include wall times in the JSON lines")


# experiment name -> extra flags as (flag, type, config key)
_EXP_FLAGS = {
    "claim-m-verify": [("--n", int, "n"), ("--p", float, "p"), ("--r", int, "r")],
    "lemma21-scan": [("--m", int, "m")],
    "rank-census": [("--s", int, "s")],
    "tv-estimate": [("--s", int, "s"), ("--r", int, "r"), ("--p", float, "p"), ("--samples", int, "samples")],
    "fourier-audit": [("--s", int, "s"), ("--r", int, "r"), ("--p", float, "p")],
    "pivot-pairs": [("--rows", int, "rows"), ("--cols", int, "cols"), ("--p", float, "p")],
    "rank-tail": [("--r", int, "r"), ("--p", float, "p")],
    "bip-delta-verify": [("--sizes", int, "sizes"), ("--p", float, "p")],
}

_FIELDS = set(ExperimentConfig.__dataclass_fields__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vmlab", description="Local complementation and vertex-minor experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, flags in _EXP_FLAGS.items():
        sp = sub.add_parser(name)
        _global(sp)
        for flag, typ, _key in flags:
            sp.add_argument(flag, type=typ, default=None)
    for name in ("orbit", "check-minor", "universal"):
        sp = sub.add_parser(name)
        _global(sp)
        sp.add_argument("--graph6", default=None, help="input graph; omitted means sample G(n, p)")
        sp.add_argument("--cap", type=int, default=1 << 20, help="orbit member cap")
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--p", type=float, default=None)
        if name == "check-minor":
            sp.add_argument("--target-graph6", required=True)
            sp.add_argument("--on", required=True, help="comma separated vertex indices of g for the target")
        if name == "universal":
            sp.add_argument("--k", type=int, default=None)
    return parser


def _config(args, experiment: str, flags) -> ExperimentConfig:
    d: dict = {"experiment": experiment}
    if args.config:
        with open(args.config) as fh:
            d.update(json.load(fh))
        d["experiment"] = experiment
    if args.seed is not None:
        d["master_seed"] = args.seed
    if args.trials is not None:
        d["trials"] = args.trials
    if args.threads is not None:
        d["threads"] = args.threads
    for flag, _typ, key in flags:
        val = getattr(args, flag.lstrip("-").replace("-", "_"), None)
        if val is None:
            continue
        if key in _FIELDS:
            d[key] = val
        else:
            d.setdefault("params", {})[key] = val
    return ExperimentConfig.from_dict(d)


def _run(args, experiment: str, flags) -> int:
    cfg = _config(args, experiment, flags)
    report = run_experiment(cfg, out=args.out, timing=args.timing)
    _emit(report.summary)
    return EXIT_OK if report.ok else EXIT_FAIL


def _graph_arg(text: str) -> Graph:
    return from_graph6(text.strip())


def _cmd_orbit(args) -> int:
    if args.graph6 is None:
        return _run(args, "orbit", [("--n", int, "n"), ("--p", float, "p"), ("--cap", int, "member_cap")])
    g = _graph_arg(args.graph6)
    orb = lc_orbit(g, args.cap)
    _emit({"graph6": to_graph6(g), "members": len(orb), "layers": orb.layers, "truncated": orb.truncated})
    return EXIT_UNDECIDED if orb.truncated else EXIT_OK


def _cmd_check_minor(args) -> int:
    if args.graph6 is None:
        raise ValueError("check-minor needs --graph6")
    g = _graph_arg(args.graph6)
    on = [int(x) for x in args.on.split(",") if x != ""]
    target = _graph_arg(args.target_graph6)
    if target.n != len(on):
        raise ValueError(f"target has {target.n} vertices but --on lists {len(on)}")
    h = Graph._from_rows(target.rows, on)
    dec = is_vertex_minor(g, h, args.cap)
    out = {"verdict": dec.verdict, "on": on}
    if dec.verdict:
        out["word"] = dec.word
        out["witness_graph6"] = to_graph6(dec.witness)
        out["witness_induced_graph6"] = to_graph6(induced(dec.witness, on))
    _emit(out)
    return {True: EXIT_OK, False: EXIT_FAIL, None: EXIT_UNDECIDED}[dec.verdict]


def _cmd_universal(args) -> int:
    if args.graph6 is None:
        return _run(args, "universal", [("--n", int, "n"), ("--p", float, "p"), ("--k", int, "k"),
                                        ("--cap", int, "member_cap")])
    g = _graph_arg(args.graph6)
    res = is_k_vm_universal(g, args.k or 2, args.cap)
    out = {"verdict": res.verdict, "k": res.k, "subsets_checked": res.subsets_checked}
    if res.counterexample:
        subset, missing = res.counterexample
        out["counterexample"] = {"subset": list(subset), "missing_edges": missing.edges()}
    _emit(out)
    return {True: EXIT_OK, False: EXIT_FAIL, None: EXIT_UNDECIDED}[res.verdict]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in _EXP_FLAGS:
            return _run(args, args.command, _EXP_FLAGS[args.command])
        handler = {"orbit": _cmd_orbit, "check-minor": _cmd_check_minor, "universal": _cmd_universal}
        return handler[args.command](args)
    except (ValueError, Graph6Error, BudgetExceeded, OSError) as exc:
        print(f"vmlab: error: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED


if __name__ == "__main__":
    sys.exit(main())

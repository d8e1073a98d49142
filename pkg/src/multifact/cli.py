"""Command-line frontend: decompose, verify, project, stats.

Reports and serialised graphs go to stdout and are byte-identical for
identical input and flags; anything timing- or warning-shaped goes to
stderr.  Exit codes: 0 success, 1 input error, 2 cap reached, 3
verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .cliques import collapse_bipartite
from .core import ContractError, Graph
from .fileio import (
    parse_edge_list,
    parse_multipartite,
    serialise_edge_list,
    serialise_multipartite,
)
from .lattice import size_bound, verify_charseq_theorem, verify_v2_bijection
from .series import (
    DEFAULT_CAP,
    roundtrip_report,
    run_clean,
    run_factor,
    run_weak,
    series_stats,
)
from .transform import project

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CAP = 2
EXIT_FAILED = 3


def random_graph(n: int, p: float, seed: int) -> Graph:
    """G(n, p) instance with labels x0..x{n-1}; same seed, same graph."""
    rng = random.Random(seed)
    labels = [f"x{i}" for i in range(n)]
    edges = [
        (labels[u], labels[v])
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return Graph.from_edge_list(edges, extra_vertices=labels)


def suite_seed(n: int, p: float, i: int) -> int:
    """Per-instance seed of the random sweep; stable across runs and hosts."""
    return n * 7919 + int(p * 10) * 104729 + i


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


def _run_series(g: Graph, mode: str, cap: int | None, low_memory: bool):
    if mode == "clean":
        if cap is not None:
            print("warning: --cap is ignored in clean mode", file=sys.stderr)
        return run_clean(g, low_memory=low_memory)
    runner = run_weak if mode == "weak" else run_factor
    return runner(g, cap=DEFAULT_CAP if cap is None else cap, low_memory=low_memory)


def cmd_decompose(args: argparse.Namespace) -> int:
    try:
        g = parse_edge_list(_read(args.input))
    except OSError as e:
        return _fail(str(e))
    except ContractError as e:
        return _fail(f"{args.input}: {e}")
    run = _run_series(g, args.mode, args.cap, args.low_memory)
    blob = serialise_multipartite(run.final)
    status = run.status.describe()
    if args.output is None:
        # graph on stdout, so the status line moves out of the way
        sys.stdout.write(blob)
        print(status, file=sys.stderr)
    else:
        _emit(blob, args.output)
        print(status)
    return EXIT_OK if run.status.kind == "terminated" else EXIT_CAP


def _verify_report(g: Graph) -> dict:
    run = run_clean(g)
    checks = {
        "charseq_theorem": verify_charseq_theorem(run),
        "v2_bijection": verify_v2_bijection(run),
        "size_bound": size_bound(g, run.final),
        "projection_roundtrip": roundtrip_report(run),
    }
    return {
        "rank": run.status.rank,
        "final_level_sizes": list(run.final.level_sizes()),
        "checks": checks,
        "pass": all(c["pass"] for c in checks.values()),
    }


def _suite_params(tokens: list[str]) -> dict:
    params: dict = {"n": 12, "seeds": 100, "p": 0.3}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if key not in params or not sep or not val:
            raise ContractError(f"suite parameter must be n=, seeds= or p=, got {tok!r}")
        params[key] = float(val) if key == "p" else int(val)
    if params["n"] < 0 or params["seeds"] < 1 or not 0 <= params["p"] <= 1:
        raise ContractError(f"suite parameters out of range: {params}")
    return params


def cmd_verify(args: argparse.Namespace) -> int:
    if args.random is not None:
        if args.input is not None:
            return _fail("give either an input path or --random, not both")
        try:
            params = _suite_params(args.random)
        except ContractError as e:
            return _fail(str(e))
        n, seeds, p = params["n"], params["seeds"], params["p"]
        base = suite_seed(n, p, 0) if args.seed is None else args.seed
        failures: list[dict] = []
        failed = 0
        for i in range(seeds):
            report = _verify_report(random_graph(n, p, base + i))
            if not report["pass"]:
                failed += 1
                if len(failures) < 5:
                    failures.append(
                        {
                            "seed": base + i,
                            "failed": [k for k, c in report["checks"].items() if not c["pass"]],
                            "checks": {
                                k: c for k, c in report["checks"].items() if not c["pass"]
                            },
                        }
                    )
        out = {
            "suite": {"n": n, "p": p, "seeds": seeds, "base_seed": base},
            "failed_instances": failed,
            "failures": failures,
            "pass": failed == 0,
        }
    else:
        if args.input is None:
            return _fail("an input path or --random is required")
        try:
            g = parse_edge_list(_read(args.input))
        except OSError as e:
            return _fail(str(e))
        except ContractError as e:
            return _fail(f"{args.input}: {e}")
        out = {"source": args.input, **_verify_report(g)}
    print(json.dumps(out, indent=2))
    return EXIT_OK if out["pass"] else EXIT_FAILED


def cmd_project(args: argparse.Namespace) -> int:
    try:
        m = parse_multipartite(_read(args.input))
    except OSError as e:
        return _fail(str(e))
    except ContractError as e:
        return _fail(f"{args.input}: {e}")
    try:
        if args.to_graph:
            text = serialise_edge_list(collapse_bipartite(m))
        else:
            if m.top < 2:
                return _fail(f"projection needs at least 3 levels, got {m.top + 1}")
            text = serialise_multipartite(project(m))
    except ContractError as e:
        return _fail(str(e))
    _emit(text, args.output)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        g = parse_edge_list(_read(args.input))
    except OSError as e:
        return _fail(str(e))
    except ContractError as e:
        return _fail(f"{args.input}: {e}")
    run = _run_series(g, args.mode, args.cap, args.low_memory)
    stats = series_stats(run)
    # timing stays off stdout so identical inputs give identical bytes
    total = 0.0
    for step in stats["steps"]:
        ms = step.pop("elapsed_ms")
        total += ms
        print(f"step {step['step']} ({step['rule']}): {ms:.1f} ms", file=sys.stderr)
    print(f"total: {total:.1f} ms", file=sys.stderr)
    stats["final"]["bound"] = size_bound(g, run.final) if args.mode == "clean" else None
    print(json.dumps(stats, indent=2))
    return EXIT_OK if run.status.kind == "terminated" else EXIT_CAP


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; that code is reserved for
    # cap-reached here, so bad flags fall into the input-error bucket
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="multifact",
        description="Multipartite factorisation series of simple graphs.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def series_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--mode", choices=("weak", "factor", "clean"), default="clean")
        p.add_argument(
            "--cap",
            type=int,
            default=None,
            metavar="N",
            help=f"step cap for weak/factor runs (default {DEFAULT_CAP}); clean runs ignore it",
        )
        p.add_argument(
            "--low-memory",
            action="store_true",
            help="keep only the final graph instead of every stage",
        )

    d = sub.add_parser("decompose", help="run a factorisation series on an edge list")
    d.add_argument("input", help="edge-list file")
    d.add_argument("-o", "--output", help="write the final graph here instead of stdout")
    series_flags(d)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="run the clean series and check its properties")
    v.add_argument("input", nargs="?", help="edge-list file")
    v.add_argument(
        "--random",
        nargs="*",
        metavar="KEY=VALUE",
        help="verify a random suite instead, e.g. --random n=12 seeds=100 p=0.3",
    )
    v.add_argument("--seed", type=int, default=None, help="override the suite base seed")
    v.set_defaults(func=cmd_verify)

    pj = sub.add_parser("project", help="undo the top factorisation step")
    pj.add_argument("input", help="multipartite file")
    pj.add_argument("-o", "--output", help="write the result here instead of stdout")
    pj.add_argument(
        "--to-graph",
        action="store_true",
        help="collapse a 2-level graph back to an edge list instead of projecting",
    )
    pj.set_defaults(func=cmd_project)

    st = sub.add_parser("stats", help="per-step series figures as JSON")
    st.add_argument("input", help="edge-list file")
    series_flags(st)
    st.set_defaults(func=cmd_stats)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())

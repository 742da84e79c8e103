"""Command-line front end.

Every random subcommand defaults to ``--seed 42`` so bare invocations are
reproducible. Exit codes: 0 success, 2 invalid input, 3 the compliance
report contains a DISAGREE cell.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import axioms as ax
from .compliance import diff_report, matrix_from_record, run_compliance
from .errors import PcmError
from .indices import index_names, lookup, random_index
from .io import dumps_matrix, load_matrix, witness_document, write_atomic
from .pcm import corner_matrix, random_consistent, random_pcm
from .similarity import SYSTEM_ORDER, format_matrix, jaccard_set_union, similarity_matrix

DEFAULT_SEED = 42
EXIT_OK, EXIT_INVALID, EXIT_DISAGREE = 0, 2, 3
REPORT_SYSTEMS = ("bf", "mz", "ku", "ks", "cs")


class InvalidInput(Exception):
    pass


def _fmt(v: float) -> str:
    return format(v, ".17g")


def _dump_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _cmd_eval(args) -> int:
    A = load_matrix(args.matrix, args.name)
    print(_fmt(lookup(args.index)(A)))
    return EXIT_OK


def _cmd_check(args) -> int:
    h = lookup(args.index)
    axiom = ax.axiom_id(args.system, args.axiom)
    cfg = ax.CheckConfig(trials=args.trials, seed=args.seed)
    verdict = ax.check(h, axiom, cfg)
    print(f"{h.name} {axiom}: {verdict.kind.value}")
    print(verdict.describe())
    if verdict.witness is not None:
        out = Path(args.witness_dir) / f"witness-{h.name}-{axiom}-seed{args.seed}.json"
        write_atomic(out, _dump_json(witness_document(verdict.witness)))
        print(f"witness: {out}")
    return EXIT_OK


def _split(value: str, universe) -> list[str]:
    if value == "all":
        return list(universe)
    return [v.strip() for v in value.split(",") if v.strip()]


def _cmd_report(args) -> int:
    if args.from_json:
        record = json.loads(Path(args.from_json).read_text())
        matrix = matrix_from_record(record)
    else:
        handles = [lookup(n) for n in _split(args.indices, index_names())]
        systems = _split(args.systems, REPORT_SYSTEMS)
        axioms = [a for s in systems for a in ax.SYSTEM_AXIOMS[_system(s)]]
        cfg = ax.CheckConfig(trials=args.trials, seed=args.seed)
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if args.timestamp else None
        progress = None
        if args.verbose:
            progress = lambda i, a: print(f"checking {i} {a}", file=sys.stderr)  # noqa: E731
        matrix = run_compliance(handles, axioms, cfg, timestamp=stamp, progress=progress)
    report = diff_report(matrix)
    if args.out:
        write_atomic(args.out, report.markdown)
    if args.json:
        write_atomic(args.json, report.json_text())
    print(" ".join(f"{k}={v}" for k, v in sorted(report.counts.items())))
    return EXIT_DISAGREE if report.has_disagreement else EXIT_OK


def _system(name: str) -> str:
    key = name.lower()
    if key not in ax.SYSTEM_AXIOMS:
        raise InvalidInput(f"unknown system {name!r}; choose from {sorted(ax.SYSTEM_AXIOMS)}")
    return key


def _cmd_jaccard(args) -> int:
    measure = jaccard_set_union if args.set_union else None
    m = similarity_matrix(SYSTEM_ORDER, measure) if measure else similarity_matrix()
    print(format_matrix(m))
    if args.json:
        doc = {"order": list(SYSTEM_ORDER), "matrix": m.tolist(), "denominator": "set-union" if args.set_union else "sum"}
        write_atomic(args.json, _dump_json(doc))
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.kind == "consistent":
        A = random_consistent(args.n, args.seed)
    elif args.kind == "random":
        A = random_pcm(args.n, args.seed)
    else:
        if args.x is None:
            raise InvalidInput("--kind corner needs --x")
        A = corner_matrix(args.n, args.x)
    write_atomic(args.out, dumps_matrix(A, args.name))
    return EXIT_OK


def _cmd_search(args) -> int:
    h = lookup(args.index)
    cfg = ax.CheckConfig(seed=args.seed, search_budget=args.budget)
    w = ax.search_triad_worsening(h, args.n, cfg)
    if w is None:
        print("none found")
        return EXIT_OK
    doc = witness_document(w)
    print(_dump_json(doc), end="")
    if args.out:
        write_atomic(args.out, _dump_json(doc))
    return EXIT_OK


def _parse_range(text: str) -> range:
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise InvalidInput(f"--n expects A..B, got {text!r}") from exc
    if lo < 2 or hi < lo:
        raise InvalidInput(f"invalid order range {text!r}")
    return range(lo, hi + 1)


def _cmd_ri(args) -> int:
    orders = _parse_range(args.n)
    print("n\tRI")
    for n in orders:
        print(f"{n}\t{_fmt(random_index(n, args.samples, seed=[args.seed, n]))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcmaxioms", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate an index on a matrix file")
    e.add_argument("--index", required=True)
    e.add_argument("--matrix", required=True, help="JSON matrix document or CSV")
    e.add_argument("--name", help="matrix name inside a multi-matrix document")
    e.set_defaults(func=_cmd_eval)

    c = sub.add_parser("check", help="try to falsify one axiom for one index")
    c.add_argument("--index", required=True)
    c.add_argument("--system", required=True, choices=sorted(ax.SYSTEM_AXIOMS))
    c.add_argument("--axiom", help="axiom number within the system")
    c.add_argument("--trials", type=int, default=10_000)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--witness-dir", default=".")
    c.set_defaults(func=_cmd_check)

    r = sub.add_parser("report", help="run the index x axiom grid and compare with published verdicts")
    r.add_argument("--indices", default="all", help="comma list or 'all'")
    r.add_argument("--systems", default="all", help=f"comma list of {','.join(ax.SYSTEM_AXIOMS)} or 'all'")
    r.add_argument("--seed", type=int, default=DEFAULT_SEED)
    r.add_argument("--trials", type=int, default=10_000)
    r.add_argument("--out", help="Markdown report path")
    r.add_argument("--json", help="machine record path")
    r.add_argument("--from-json", help="re-render an existing machine record instead of running")
    r.add_argument("--timestamp", action="store_true", help="stamp the run time (breaks byte-identity)")
    r.add_argument("--verbose", action="store_true")
    r.set_defaults(func=_cmd_report)

    j = sub.add_parser("jaccard", help="print the axiom-system similarity matrix")
    j.add_argument("--set-union", action="store_true", help="use |A u B| instead of |A| + |B|")
    j.add_argument("--json")
    j.set_defaults(func=_cmd_jaccard)

    g = sub.add_parser("gen", help="write a matrix document")
    g.add_argument("--kind", required=True, choices=("consistent", "random", "corner"))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--x", type=float)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--name")
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen)

    s = sub.add_parser("search", help="counterexample search")
    s.add_argument("--kind", required=True, choices=("triad-worsening",))
    s.add_argument("--index", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--budget", type=int, default=ax.CheckConfig().search_budget)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--out", help="also write the witness to this file")
    s.set_defaults(func=_cmd_search)

    i = sub.add_parser("ri", help="Monte Carlo random index table")
    i.add_argument("--n", required=True, help="order or range A..B")
    i.add_argument("--samples", type=int, default=100_000)
    i.add_argument("--seed", type=int, default=DEFAULT_SEED)
    i.set_defaults(func=_cmd_ri)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PcmError, InvalidInput, KeyError, ValueError, OSError, NotImplementedError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

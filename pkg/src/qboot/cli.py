"""Command-line front end.

Exit codes: 0 success (and, for verify, every check passed), 1 usage or
parse error, 2 resource guard, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import algebra, engine, extremal, oracle, suites
from .errors import QBootError, ResourceGuardError
from .hamming_core import DEFAULT_MAX_VERTICES, CubeShape, as_mask, format_set, parse_vertex_list

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_GUARD, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- output


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list) and all(not isinstance(v, (list, dict)) for v in value):
        return " ".join("-" if v is None else str(v) for v in value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def render(command: str, records: list[dict], fmt: str) -> str:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "records": records}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    keys = sorted({k for rec in records for k in rec})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["schema_version", "command"] + keys)
    for rec in records:
        writer.writerow([SCHEMA_VERSION, command] + [_cell(rec.get(k)) for k in keys])
    return buf.getvalue()


def emit(args, command: str, records: list[dict]) -> None:
    text = render(command, records, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- seeds


def _parse_pair(text: str) -> tuple[int, int]:
    try:
        q, n = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--construct expects 'q,n', got {text!r}") from None
    return q, n


def _read_seed_file(path: str, args) -> tuple[CubeShape, object]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        if "records" in data:
            data = data["records"][0]
        seed = extremal.ExtremalSeed.from_dict(data, args.max_vertices)
        return seed.shape, seed.vertices
    shape = _shape_from_args(args)
    codes = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            codes.append(shape.parse_vertex(line))
    return shape, codes


def _shape_from_args(args) -> CubeShape:
    if args.q is None or args.n is None:
        raise UsageError("--q and --n are required for this seed source")
    return CubeShape(args.n, args.q, args.max_vertices)


def load_seed(args) -> tuple[CubeShape, object]:
    sources = [s for s in (args.seed, args.seed_file, args.construct) if s is not None]
    if len(sources) != 1:
        raise UsageError("give exactly one of --seed, --seed-file, --construct")
    if args.construct is not None:
        q, n = _parse_pair(args.construct)
        if (args.q is not None and args.q != q) or (args.n is not None and args.n != n):
            raise UsageError("--construct disagrees with --q/--n")
        seed = extremal.build_extremal_seed(q, n, args.max_vertices)
        return seed.shape, seed.vertices
    if args.seed_file is not None:
        return _read_seed_file(args.seed_file, args)
    shape = _shape_from_args(args)
    return shape, parse_vertex_list(args.seed, shape)


# ---------------------------------------------------------------- commands


def cmd_simulate(args) -> int:
    shape, seed = load_seed(args)
    mask = as_mask(seed, shape)
    rec = engine.run(mask, shape, args.r)
    record = {
        "q": shape.q,
        "n": shape.n,
        "r": args.r,
        "seed": format_set(mask, shape),
        "percolated": rec.percolated,
        "rounds": rec.rounds,
        "infected": int(rec.final.sum()),
    }
    if args.timestamps:
        record["timestamps"] = rec.timestamps()
    emit(args, "simulate", [record])
    return EXIT_OK


def cmd_closure(args) -> int:
    shape, seed = load_seed(args)
    mask = as_mask(seed, shape)
    final = engine.closure(mask, shape, args.r)
    record = {
        "q": shape.q,
        "n": shape.n,
        "r": args.r,
        "seed": format_set(mask, shape),
        "closure": format_set(final, shape),
        "size": int(final.sum()),
        "spans": bool(final.all()),
    }
    if args.r == 2:
        record["components"] = [str(p) for p in algebra.decompose_closed(final, shape).components]
    emit(args, "closure", [record])
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.q is None or args.n is None:
        raise UsageError("construct needs --q and --n")
    seed = extremal.build_extremal_seed(args.q, args.n, args.max_vertices)
    rounds = engine.percolation_time(seed.vertices, seed.shape)
    record = seed.to_dict()
    record["rounds"] = rounds
    record["formula"] = extremal.max_time_formula(args.q, args.n)
    emit(args, "construct", [record])
    return EXIT_OK


def cmd_formula(args) -> int:
    if args.q is None:
        raise UsageError("formula needs --q")
    if args.n is not None:
        ns = [args.n]
    else:
        ns = range((args.max_n if args.max_n is not None else 12) + 1)
    records = [
        {
            "q": args.q,
            "n": n,
            "formula": extremal.max_time_formula(args.q, n),
            "recursive": extremal.max_time_recursive(args.q, n),
        }
        for n in ns
    ]
    emit(args, "formula", records)
    return EXIT_OK


def cmd_oracle(args) -> int:
    shape = _shape_from_args(args)
    if args.minimal:
        cap = args.cap if args.cap is not None else shape.size
        sets = oracle.minimal_spanning_sets(shape, cap, args.budget)
        records = [
            {"q": shape.q, "n": shape.n, "size_cap": cap, "size": len(s),
             "vertices": [shape.format_vertex(v) for v in s]}
            for s in sets
        ]
        emit(args, "oracle-minimal", records)
        return EXIT_OK
    if args.cap is None:
        report = oracle.max_time_exhaustive(shape)
    else:
        report = oracle.max_time_capped(shape, args.cap, args.budget)
    record = report.to_dict()
    record.pop("shape")
    emit(args, "oracle", [{"q": shape.q, "n": shape.n, **record}])
    return EXIT_OK


def cmd_verify(args) -> int:
    name = args.suite
    if name is None:
        raise UsageError("verify needs --suite")
    if name != "all" and name not in suites.SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(suites.SUITES)}, all")
    opts = suites.Options(
        q=args.q if args.q is not None else 3,
        max_n=args.max_n,
        k=args.k,
        l=args.l,
        samples=args.samples,
        rng_seed=args.rng_seed,
    )
    results = suites.run_suite(name, opts)
    records = sorted((r.to_dict() for r in results), key=lambda r: (r["suite"], r["item"]))
    emit(args, "verify", records)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_verify_all(args) -> int:
    args.suite = "all"
    return cmd_verify(args)


COMMANDS = {
    "simulate": cmd_simulate,
    "closure": cmd_closure,
    "construct": cmd_construct,
    "formula": cmd_formula,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "verify-lemma": cmd_verify,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--q", type=int, help="alphabet size")
    common.add_argument("--n", type=int, help="dimension")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write here instead of stdout")
    common.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES,
                        help="memory guard on q^n")

    seeded = _Parser(add_help=False)
    seeded.add_argument("--r", type=int, default=2, help="infection threshold")
    seeded.add_argument("--seed", help="vertices, comma-separated (semicolons when q > 10)")
    seeded.add_argument("--seed-file", help="one vertex per line with # comments, or seed JSON")
    seeded.add_argument("--construct", metavar="Q,N", help="use the extremal seed for (q, n)")

    parser = _Parser(prog="qboot", description="Bootstrap percolation on q-ary hypercubes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common, seeded], help="run the process from a seed")
    p.add_argument("--timestamps", action="store_true", help="include per-vertex infection times")
    sub.add_parser("closure", parents=[common, seeded], help="eventually infected set")
    sub.add_parser("construct", parents=[common], help="extremal seed attaining M_q(n)")
    p = sub.add_parser("formula", parents=[common], help="closed-form M_q(n)")
    p.add_argument("--max-n", type=int)
    p = sub.add_parser("oracle", parents=[common], help="brute-force maximum percolation time")
    p.add_argument("--cap", type=int, help="only seeds of at most this size (lower-bound mode)")
    p.add_argument("--minimal", action="store_true", help="list minimal spanning sets instead")
    p.add_argument("--budget", type=float, help="work budget in vertex-updates (env PERC_BUDGET)")
    for name in ("verify", "verify-lemma", "verify-all"):
        p = sub.add_parser(name, parents=[common], help="run verification suites")
        p.add_argument("--suite", help=f"one of {', '.join(suites.SUITES)}, all")
        p.add_argument("--max-n", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--l", type=int)
        p.add_argument("--samples", type=int, default=200)
        p.add_argument("--rng-seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "budget", None) is not None:
        args.budget = int(args.budget)
    try:
        return COMMANDS[args.command](args)
    except ResourceGuardError as exc:
        print(f"qboot: resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, QBootError, ValueError, KeyError, OSError) as exc:
        print(f"qboot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

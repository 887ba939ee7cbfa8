"""Command-line front end: ``metricext {extend,verify,compare,gen}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from itertools import combinations
from pathlib import Path

import numpy as np

from .generate import random_instance, random_metric, symmetric_group_instance
from .group import GroupError, extend_invariant_I, validate_group
from .operators import DiagVariant, ExtensionContext, extend
from .space import Instance, InstanceError, load_instance
from .verify import OPERATORS, reports_table, run_invariant_suite


class UsageError(Exception):
    pass


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def matrix_csv(matrix: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(range(matrix.shape[1]))
    for row in matrix:
        writer.writerow(repr(float(v)) for v in row)
    return buf.getvalue()


def _load_p(args, instance: Instance) -> np.ndarray:
    if args.p:
        data = json.loads(Path(args.p).read_text())
        p = np.array(data["p"] if isinstance(data, dict) else data, dtype=float)
    elif instance.p is not None:
        p = instance.p
    else:
        raise UsageError("no p given: add a 'p' field to the instance or pass --p")
    m = len(instance.subset)
    if p.shape != (m, m):
        raise UsageError(f"p must be {m}x{m}, got shape {p.shape}")
    return p


def _group(instance: Instance):
    if instance.group is None:
        return None
    return validate_group(instance.group, instance.subset, instance.space)


def run_extend(args) -> int:
    instance = load_instance(args.instance)
    if args.op == "I" and instance.group is None:
        raise UsageError("operator I requires a group")
    p = _load_p(args, instance)
    ctx = ExtensionContext.from_instance(instance)
    variant = DiagVariant(args.variant)
    if args.op == "I":
        result = extend_invariant_I(ctx, p, _group(instance), variant)
    else:
        result = extend(ctx, p, args.op, variant)
    if args.format == "csv":
        _write(matrix_csv(result.matrix), args.output)
        return 0
    payload = result.metadata()
    payload["points"] = list(range(ctx.n))
    payload["matrix"] = result.matrix.tolist()
    if args.depth is not None:
        if args.op != "T":
            raise UsageError("--depth applies to the series operator T")
        partial = ctx.partial_sum(p, args.depth, variant, with_tail=False)
        payload["partial_sums"] = {
            "depth": args.depth,
            "matrix": partial.tolist(),
            "max_abs_difference_from_T": float(np.abs(partial - ctx.extend_T(p, variant).matrix).max()),
        }
    _write(json.dumps(payload, indent=2) + "\n", args.output)
    return 0


def run_verify(args) -> int:
    instance = load_instance(args.instance)
    if args.op == "I" and instance.group is None:
        raise UsageError("operator I requires a group")
    reports = run_invariant_suite(instance, args.op, args.variant, args.seed, args.trials)
    if args.format == "json":
        _write(json.dumps([r.to_dict() for r in reports], indent=2) + "\n", args.output)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "status", "tolerance", "witness", "notes"])
        for r in reports:
            writer.writerow([r.name, r.label, r.tolerance, json.dumps(r.witness), r.notes])
        _write(buf.getvalue(), args.output)
    else:
        _write(reports_table(reports) + "\n", args.output)
    return 1 if any(r.blocking for r in reports) else 0


def run_compare(args) -> int:
    instance = load_instance(args.instance)
    ops = [op for op in OPERATORS if op != "I" or instance.group is not None]
    table = {op: {r.name: r.label for r in run_invariant_suite(instance, op, args.variant, args.seed, args.trials)}
             for op in ops}
    ctx = ExtensionContext.from_instance(instance)
    p = instance.p if instance.p is not None else random_metric(len(instance.subset), np.random.default_rng(args.seed))
    mats = {}
    for op in ops:
        if op == "I":
            mats[op] = extend_invariant_I(ctx, p, _group(instance), DiagVariant(args.variant)).matrix
        else:
            mats[op] = extend(ctx, p, op, args.variant).matrix
    norms = {f"{u}-{v}": float(np.linalg.norm(mats[u] - mats[v])) for u, v in combinations(ops, 2)}
    claims = sorted({name for row in table.values() for name in row})
    blocking = any(status == "fail" for row in table.values() for status in row.values())
    if args.format == "json":
        _write(json.dumps({"claims": table, "difference_norms": norms}, indent=2) + "\n", args.output)
        return 1 if blocking else 0
    width = max(map(len, claims))
    lines = [f"{'claim':<{width}}  " + "  ".join(f"{op:<14}" for op in ops)]
    for claim in claims:
        lines.append(f"{claim:<{width}}  " + "  ".join(f"{table[op][claim]:<14}" for op in ops))
    lines.append("")
    lines.append("Frobenius norm of pairwise differences:")
    lines.extend(f"  {k:<6} {v:.6g}" for k, v in norms.items())
    text = "\n".join(lines) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["claim", *ops])
        for claim in claims:
            writer.writerow([claim, *(table[op][claim] for op in ops)])
        text = buf.getvalue()
    _write(text, args.output)
    return 1 if blocking else 0


def run_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.symmetric:
        data = symmetric_group_instance(rng)
    else:
        if args.n < 1 or args.x < 2 or args.x > args.n:
            raise UsageError(f"need 2 <= --x <= --n, got --n {args.n} --x {args.x}")
        data = random_instance(rng, args.n, args.x, None if args.matrix else args.dim)
    _write(json.dumps(data) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metricext", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, ops=OPERATORS, formats=("json", "csv")):
        p.add_argument("instance", help="instance JSON file")
        if ops:
            p.add_argument("--op", choices=ops, default="T")
        p.add_argument("--variant", choices=[v.value for v in DiagVariant], default=DiagVariant.BASE_DIAGONAL.value)
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        p.add_argument("--format", choices=formats, default=formats[0])

    ext = sub.add_parser("extend", help="extend p from X x X to Y x Y")
    common(ext)
    ext.add_argument("--p", help="JSON file holding p (a matrix, or an object with a 'p' field)")
    ext.add_argument("--depth", type=int, help="also report partial sums of the series up to this level")
    ext.set_defaults(func=run_extend)

    ver = sub.add_parser("verify", help="run the property checks for one operator")
    common(ver, formats=("table", "json", "csv"))
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--trials", type=int, default=5)
    ver.set_defaults(func=run_verify)

    cmp_ = sub.add_parser("compare", help="property checks of every operator side by side")
    common(cmp_, ops=None, formats=("table", "json", "csv"))
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.add_argument("--trials", type=int, default=5)
    cmp_.set_defaults(func=run_compare)

    gen = sub.add_parser("gen", help="write a random instance")
    gen.add_argument("--n", type=int, default=10, help="number of points")
    gen.add_argument("--x", type=int, default=3, help="size of the subset X")
    gen.add_argument("--dim", type=int, default=2, help="dimension of the point cloud")
    gen.add_argument("--matrix", action="store_true", help="random metric by shortest-path closure instead of points")
    gen.add_argument("--symmetric", action="store_true", help="symmetric point cloud with a cyclic or dihedral group")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=run_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, GroupError, UsageError, ValueError, OSError) as exc:
        print(f"metricext {args.subcommand}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: gen, density, sumset, analyze, classify, verify.  Set
descriptions are JSON, inline or from a file; rationals in reports are
always {"num", "den"} pairs.  Exit codes: 0 success / all pass,
1 verification failure or counterexample, 2 usage error, 3 internal
limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import density as dens
from . import suites as suite_mod
from .generators import SetDescription, parse_description, sumset_description
from .kneser import analyze_sumset
from .zmod import LimitExceededError, ResidueSet, classify_structure

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


class UsageError(ValueError):
    pass


def _load_set(arg: str) -> SetDescription:
    """Parse an inline JSON object or a path to one."""
    text = arg
    if not arg.lstrip().startswith("{"):
        try:
            with open(arg, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read set description {arg!r}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in set description: {exc}") from exc
    try:
        return parse_description(obj)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _rows_to_csv(rows: list[dict], columns: list[str]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            cell = str(row.get(col, ""))
            if "," in cell or '"' in cell:
                cell = '"' + cell.replace('"', '""') + '"'
            cells.append(cell)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    desc = _load_set(args.set)
    members = desc.members(args.horizon)
    if args.format == "json":
        _emit(_json_dumps({"family": desc.family, "horizon": args.horizon, "members": members}), args.output)
    else:
        _emit("\n".join(map(str, members)) + "\n", args.output)
    return EXIT_OK


_CHAIN_ALIASES = {"pow2": "powers_of_two", "pow4": "powers_of_four"}


def _cmd_density(args) -> int:
    desc = _load_set(args.set)
    if args.mode == "windows":
        report = dens.window_densities(desc, args.horizon).to_json_dict()
        _emit(_json_dumps(report), args.output)
        return EXIT_OK
    chain = dens.modulus_chain(_CHAIN_ALIASES.get(args.chain, args.chain), args.depth)
    if args.mode == "buck-upper":
        estimate = dens.buck_upper(desc, chain, args.horizon)
    else:
        estimate = dens.buck_lower(desc, chain, args.horizon)
    if args.format == "csv":
        rows = [
            {
                "m": m,
                "count": int(r * m),
                "ratio_num": r.numerator,
                "ratio_den": r.denominator,
                "kind": estimate.kind,
            }
            for m, r in estimate.sequence
        ]
        _emit(_rows_to_csv(rows, ["m", "count", "ratio_num", "ratio_den", "kind"]), args.output)
    else:
        _emit(_json_dumps(estimate.to_json_dict()), args.output)
    return EXIT_OK


def _cmd_sumset(args) -> int:
    parts = [_load_set(s) for s in args.sets]
    total = sumset_description(parts)
    members = total.members(args.horizon)
    moduli = [int(m) for m in args.mods.split(",") if m]
    table = []
    for m in moduli:
        attained, exact = dens.attained_residues(total, m, args.horizon)
        table.append(
            {
                "m": m,
                "count": attained.cardinality,
                "residues": list(attained.members),
                "kind": "exact-profile" if exact else "sampled",
            }
        )
    payload = {"members": members, "profiles": table, "horizon": args.horizon}
    if args.format == "csv":
        rows = [
            {"m": t["m"], "count": t["count"], "kind": t["kind"],
             "residues": " ".join(map(str, t["residues"]))}
            for t in table
        ]
        _emit(_rows_to_csv(rows, ["m", "count", "kind", "residues"]), args.output)
    else:
        _emit(_json_dumps(payload), args.output)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    parts = [_load_set(s) for s in args.sets]
    report = analyze_sumset(parts, q_max=args.qmax, horizon=args.horizon)
    _emit(_json_dumps(report.to_json_dict()), args.output)
    return EXIT_OK


def _cmd_classify(args) -> int:
    try:
        s = ResidueSet.of(args.mod, args.elems)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cls = classify_structure(s, args.require_nonempty_remainder)
    payload: dict = {"modulus": args.mod, "members": sorted(args.elems), "tag": cls.tag}
    if cls.ap_witness is not None:
        payload["ap_witness"] = {
            "start": cls.ap_witness.start,
            "difference": cls.ap_witness.difference,
            "length": cls.ap_witness.length,
        }
    if cls.qp_witness is not None:
        payload["qp_witness"] = {
            "subgroup_generator": cls.qp_witness.subgroup.generator,
            "shift": cls.qp_witness.shift,
            "trace": sorted(cls.qp_witness.trace),
            "periodic_part": sorted(cls.qp_witness.periodic_part),
        }
    _emit(_json_dumps(payload), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    workers = int(os.environ.get("BUCKDENS_THREADS", "1") or "1")
    try:
        results = suite_mod.run_suite(args.suite, seed=args.seed, workers=workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    all_rows = []
    for res in results:
        for row in res.rows:
            all_rows.append({"suite": res.name, **row})
    if args.format == "json":
        payload = {
            "suites": [
                {"name": r.name, "passed": r.passed, "rows": list(r.rows)} for r in results
            ],
            "passed": all(r.passed for r in results),
            "seed": args.seed,
        }
        _emit(_json_dumps(payload), args.output)
    elif args.format == "csv":
        _emit(_rows_to_csv(all_rows, ["suite", "check", "passed", "detail"]), args.output)
    else:
        lines = []
        for res in results:
            for row in res.rows:
                mark = "PASS" if row["passed"] else "FAIL"
                detail = f" -- {row['detail']}" if row["detail"] else ""
                lines.append(f"[{mark}] {res.name}: {row['check']}{detail}")
            lines.append(f"suite {res.name}: {'PASS' if res.passed else 'FAIL'}")
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="buckdens",
        description="Exact modular-density calculus and sumset structure analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="text"):
        p.add_argument("--format", choices=("text", "json", "csv"), default=fmt_default)
        p.add_argument("--output", default=None, help="write the report to a file")

    p = sub.add_parser("gen", help="list members of a set description")
    p.add_argument("set", help="family JSON, inline or a file path")
    p.add_argument("--horizon", type=int, default=dens.DEFAULT_HORIZON)
    common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("density", help="density estimates for a set description")
    p.add_argument("set")
    p.add_argument("--mode", choices=("buck-upper", "buck-lower", "windows"), default="buck-upper")
    p.add_argument(
        "--chain",
        choices=dens.CHAIN_KINDS + ("pow2", "pow4"),
        default="powers_of_two",
        help="modulus chain kind (pow2/pow4 are aliases)",
    )
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--horizon", type=int, default=dens.DEFAULT_HORIZON)
    common(p, fmt_default="json")
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("sumset", help="members and residue profiles of a sumset")
    p.add_argument("sets", nargs="+", help="two or more set descriptions")
    p.add_argument("--horizon", type=int, default=dens.DEFAULT_HORIZON)
    p.add_argument("--mods", default="2,4,8,16", help="comma-separated profile moduli")
    common(p, fmt_default="json")
    p.set_defaults(func=_cmd_sumset)

    p = sub.add_parser("analyze", help="minimal-modulus structure report for a sumset")
    p.add_argument("sets", nargs="+", help="one (doubled) or more set descriptions")
    p.add_argument("--qmax", type=int, default=None)
    p.add_argument("--horizon", type=int, default=dens.DEFAULT_HORIZON)
    common(p, fmt_default="json")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("classify", help="structure class of a subset of Z/mZ")
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--elems", type=int, nargs="+", required=True)
    p.add_argument("--require-nonempty-remainder", action="store_true")
    common(p, fmt_default="json")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=suite_mod.SUITE_NAMES + ("all",))
    p.add_argument("--seed", type=int, default=suite_mod.DEFAULT_SEED)
    common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LimitExceededError as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

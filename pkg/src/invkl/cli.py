"""Command line interface: tables, verification, characters, cells.

Exit codes: 0 on success, 2 on configuration or usage errors, 3 when a
mathematical invariant fails (the message names the violated identity and
the first counterexample is serialized to stderr).  Output is assembled
after all computation finishes and is byte-identical across --jobs values.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

from .canonical import CanonicalBasis
from .cells import DEFAULT_CELL_CAP, check_hf_relation, compute_cells, involutions_per_cell
from .coxeter import build_system
from .errors import InvariantError
from .invmodule import InvolutionModule
from .klclassic import KLTable
from .specialize import SpecializedModule
from .verify import SUITE_NAMES, run_suites

__all__ = ["main", "build_parser"]

_EXPERIMENTAL_LETTERS = ("I",)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="invkl",
        description=(
            "Kazhdan-Lusztig tables and canonical bases for the Hecke module "
            "spanned by (twisted) involutions of a finite Coxeter group."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--type", required=True, metavar="LABEL",
        help='system descriptor, e.g. "A3", "B2", "I2(5)", "A2xA1"',
    )
    common.add_argument(
        "--twisted", default=None, metavar="delta=I,J,...",
        help="diagram involution as a permutation of generator indices",
    )
    common.add_argument(
        "--max-length", type=int, default=None,
        help="restrict table rows to columns of at most this length",
    )
    common.add_argument(
        "--format", choices=("json", "csv", "text"), default="json",
    )
    common.add_argument(
        "--jobs", type=int, default=1, help="worker threads for table builds"
    )
    common.add_argument(
        "--experimental", action="store_true",
        help="allow non-crystallographic types such as I2(5)",
    )
    common.add_argument("--out", default=None, help="output path (default stdout)")

    p_table = sub.add_parser(
        "table", parents=[common],
        help="involution Kazhdan-Lusztig table (P-sigma, optionally classical P)",
    )
    p_table.add_argument(
        "--classic", action="store_true",
        help="include the classical polynomial of each involution pair",
    )

    sub.add_parser("kl", parents=[common], help="classical Kazhdan-Lusztig table")
    sub.add_parser("verify", parents=[common], help="run all verification suites")
    sub.add_parser("character", parents=[common], help="u=1 characters per class")

    p_cells = sub.add_parser("cells", parents=[common], help="two-sided cells")
    p_cells.add_argument(
        "--max-elements", type=int, default=DEFAULT_CELL_CAP,
        help="element-count gate for the cell computation",
    )
    return parser


def _make_system(args):
    if args.jobs < 1:
        raise ValueError("--jobs must be at least 1")
    system = build_system(args.type, delta=args.twisted)
    if not system.crystallographic and not args.experimental:
        raise ValueError(
            f"type {args.type!r} is experimental; pass --experimental to allow it"
        )
    return system


def _system_header(system):
    return {
        "type": system.type_label,
        "rank": system.rank,
        "delta": list(system.delta) if system.is_twisted else None,
    }


def _word_str(word):
    return ".".join(str(s) for s in word) if word else "e"


def _emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(payload):
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def _csv_lines(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(str(x) for x in row) + "\n")
    return buf.getvalue()


def _involution_pairs(system, module, max_length):
    pairs = []
    for wid in module.involution_ids:
        if max_length is not None and system.length_of(wid) > max_length:
            continue
        for yid in module.involution_ids:
            if system.bruhat_leq_ids(yid, wid):
                pairs.append((yid, wid))
    pairs.sort(
        key=lambda p: (
            system.length_of(p[1]),
            system.word_of(p[1]),
            system.length_of(p[0]),
            system.word_of(p[0]),
        )
    )
    return pairs


def cmd_table(args):
    system = _make_system(args)
    module = InvolutionModule(system)
    basis = CanonicalBasis(module).build(jobs=args.jobs)
    kl = KLTable(system) if args.classic else None
    entries = []
    for yid, wid in _involution_pairs(system, module, args.max_length):
        entry = {
            "y_word": list(system.word_of(yid)),
            "w_word": list(system.word_of(wid)),
            "sigma_poly": basis.sigma_kl(yid, wid).to_json_obj(),
        }
        if kl is not None:
            entry["classic_poly"] = kl.kl_poly_ids(yid, wid).to_json_obj()
        entries.append(entry)
    if args.format == "json":
        _emit(args, _dump_json(
            {"command": "table", "system": _system_header(system), "entries": entries}
        ))
    elif args.format == "csv":
        header = ["y_word", "w_word", "poly"] + (
            ["classic_poly"] if kl is not None else []
        )
        rows = []
        for yid, wid in _involution_pairs(system, module, args.max_length):
            row = [
                _word_str(system.word_of(yid)),
                _word_str(system.word_of(wid)),
                basis.sigma_kl(yid, wid).pair_string(),
            ]
            if kl is not None:
                row.append(kl.kl_poly_ids(yid, wid).pair_string())
            rows.append(row)
        _emit(args, _csv_lines(header, rows))
    else:
        lines = [f"involution table for {system!r}"]
        for entry in entries:
            text = (
                f"P[{_word_str(tuple(entry['y_word']))}, "
                f"{_word_str(tuple(entry['w_word']))}] = "
                f"{basis.sigma_kl(system.element_id_from_word(entry['y_word']), system.element_id_from_word(entry['w_word']))}"
            )
            lines.append(text)
        _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_kl(args):
    system = _make_system(args)
    kl = KLTable(system)
    elements = kl.build_full(jobs=args.jobs, max_length=args.max_length)
    pairs = []
    for w in elements:
        for y in elements:
            if y.length <= w.length and system.bruhat_leq_ids(y.id, w.id):
                pairs.append((y, w))
    pairs.sort(key=lambda p: (p[1].length, p[1].word, p[0].length, p[0].word))
    if args.format == "json":
        entries = [
            {
                "y_word": list(y.word),
                "w_word": list(w.word),
                "poly": kl.kl_poly_ids(y.id, w.id).to_json_obj(),
            }
            for y, w in pairs
        ]
        _emit(args, _dump_json(
            {"command": "kl", "system": _system_header(system), "entries": entries}
        ))
    elif args.format == "csv":
        rows = [
            [
                _word_str(y.word),
                _word_str(w.word),
                kl.kl_poly_ids(y.id, w.id).pair_string(),
            ]
            for y, w in pairs
        ]
        _emit(args, _csv_lines(["y_word", "w_word", "poly"], rows))
    else:
        lines = [f"classical table for {system!r}"]
        lines += [
            f"P[{_word_str(y.word)}, {_word_str(w.word)}] = "
            f"{kl.kl_poly_ids(y.id, w.id)}"
            for y, w in pairs
        ]
        _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_verify(args):
    system = _make_system(args)
    results = run_suites(system, jobs=args.jobs)
    payload = {
        "command": "verify",
        "system": _system_header(system),
        "suites": [
            {
                "name": r.name,
                "checks": r.checks,
                "failures": len(r.failures),
                "advisory": r.advisory,
                "skipped": r.skipped or None,
            }
            for r in results
        ],
    }
    hard_failures = [r for r in results if not r.ok() and not r.advisory]
    payload["ok"] = not hard_failures
    if args.format == "json":
        _emit(args, _dump_json(payload))
    else:
        lines = [f"verification of {system!r}"]
        for r in results:
            if r.skipped:
                status = f"skipped ({r.skipped})"
            elif r.ok():
                status = f"{r.checks} checks passed"
            else:
                kind = "advisory " if r.advisory else ""
                status = f"{r.checks} checks, {len(r.failures)} {kind}FAILURES"
            lines.append(f"  {r.name:<20} {status}")
        lines.append("result: " + ("PASS" if payload["ok"] else "FAIL"))
        _emit(args, "\n".join(lines) + "\n")
    if hard_failures:
        first = hard_failures[0]
        sys.stderr.write(
            "invariant violated in suite "
            + first.name
            + ": "
            + json.dumps(first.failures[0], default=str)
            + "\n"
        )
        return 3
    return 0


def cmd_character(args):
    system = _make_system(args)
    spec = SpecializedModule(InvolutionModule(system))
    rows = spec.class_function_report()
    mismatch = [r for r in rows if r["chi_m1"] != r["chi_induced"]]
    if args.format == "json":
        _emit(args, _dump_json(
            {
                "command": "character",
                "system": _system_header(system),
                "dimension": len(spec.basis),
                "classes": rows,
                "induced_matches": not mismatch,
            }
        ))
    elif args.format == "csv":
        table = [
            [
                _word_str(tuple(r["class_rep_word"])),
                r["class_size"],
                r["chi_m1"],
                r["chi_induced"],
            ]
            for r in rows
        ]
        _emit(args, _csv_lines(
            ["class_rep_word", "class_size", "chi_m1", "chi_induced"], table
        ))
    else:
        lines = [f"u=1 characters for {system!r} (dimension {len(spec.basis)})"]
        for r in rows:
            lines.append(
                f"  class {_word_str(tuple(r['class_rep_word'])):<12} "
                f"size {r['class_size']:<4} chi={r['chi_m1']} "
                f"induced={r['chi_induced']}"
            )
        _emit(args, "\n".join(lines) + "\n")
    if mismatch:
        sys.stderr.write(
            "invariant violated: induced character sum differs at class "
            + json.dumps(mismatch[0])
            + "\n"
        )
        return 3
    return 0


def cmd_cells(args):
    system = _make_system(args)
    kl = KLTable(system)
    partition = compute_cells(kl, cap=args.max_elements)
    module = InvolutionModule(system)
    counts = involutions_per_cell(partition, module)
    cells_payload = []
    for cell, count in zip(partition.cells, counts):
        min_length = min(system.length_of(w) for w in cell)
        reps = sorted(
            system.word_of(w) for w in cell if system.length_of(w) == min_length
        )
        cells_payload.append(
            {
                "size": len(cell),
                "involution_count": count,
                "representatives": [list(w) for w in reps],
            }
        )
    if args.format == "json":
        _emit(args, _dump_json(
            {
                "command": "cells",
                "system": _system_header(system),
                "cells": cells_payload,
            }
        ))
    elif args.format == "csv":
        rows = [
            [
                c["size"],
                c["involution_count"],
                ";".join(_word_str(tuple(w)) for w in c["representatives"]),
            ]
            for c in cells_payload
        ]
        _emit(args, _csv_lines(["size", "involution_count", "representatives"], rows))
    else:
        lines = [f"two-sided cells of {system!r}"]
        for c in cells_payload:
            reps = " ".join(_word_str(tuple(w)) for w in c["representatives"])
            lines.append(
                f"  size {c['size']:<5} involutions {c['involution_count']:<4} "
                f"minimal members: {reps}"
            )
        _emit(args, "\n".join(lines) + "\n")
    return 0


_COMMANDS = {
    "table": cmd_table,
    "kl": cmd_kl,
    "verify": cmd_verify,
    "character": cmd_character,
    "cells": cmd_cells,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except InvariantError as exc:
        sys.stderr.write(f"invariant violated: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())

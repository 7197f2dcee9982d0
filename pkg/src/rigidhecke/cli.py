"""Command-line interface: classes, table, verify, reduce.

Exit codes are a stable contract: 0 success, 1 verification or computation
failure, 2 usage/input error.  Output is deterministic: identical
invocations produce byte-identical output regardless of --jobs.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import rigidtab
from .conj import UnstableAtBound, newton_zero_classes
from .exactpoly import render_in_Q
from .hecke import HeckeContext
from .rootdata import PRESET_NAMES, DatumFormatError, load_datum, preset
from .weyl import WeylData

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_weyl(args) -> WeylData:
    if args.preset:
        return WeylData(preset(args.preset))
    return WeylData(load_datum(args.datum))


def cmd_classes(args) -> int:
    try:
        wd = _load_weyl(args)
        classes = newton_zero_classes(wd, args.max_length)
    except UnstableAtBound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (DatumFormatError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records = [r.to_json(wd) for r in classes]
    if args.format == "json":
        text = json.dumps({"datum": wd.datum.name, "classes": records}, indent=2) + "\n"
    elif args.format == "csv":
        lines = ["label,rep,min_length,newton,elliptic"]
        for r in records:
            lines.append(
                f"{r['label']},{r['rep']},{r['min_length']},"
                f"({' '.join(r['newton'])}),{str(r['elliptic']).lower()}"
            )
        text = "\n".join(lines) + "\n"
    else:
        lines = ["| label | rep | min_length | newton | elliptic |", "|---|---|---|---|---|"]
        for r in records:
            lines.append(
                f"| {r['label']} | {r['rep']} | {r['min_length']} | "
                f"({', '.join(r['newton'])}) | {str(r['elliptic']).lower()} |"
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _parse_spec(spec: str) -> dict:
    out = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, val = part.partition("=")
        if not val:
            raise ValueError(f"bad --spec entry {part!r} (want name=rational)")
        out[name.strip()] = Fraction(val.strip())
    return out


def cmd_table(args) -> int:
    if not args.preset:
        print("error: table requires --preset (panel manifests are preset-bound)", file=sys.stderr)
        return EXIT_USAGE
    if args.preset not in rigidtab.MANIFESTS:
        print(f"error: no table manifest for preset {args.preset!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        pc = rigidtab.build_preset_context(args.preset, L=args.max_length)
        man = pc.manifest
        qtable = pc.ctx.table.q_table()
        cells = [(i, j) for i in range(len(pc.rows)) for j in range(len(pc.modules))]

        def cell(ij):
            i, j = ij
            return render_in_Q(pc.modules[j].trace(pc.rows[i].rep))

        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                values = list(pool.map(cell, cells))
        else:
            values = [cell(ij) for ij in cells]
        entries = [
            [values[i * len(pc.modules) + j] for j in range(len(pc.modules))]
            for i in range(len(pc.rows))
        ]
        table = rigidtab.RigidTable(
            man.name, man.row_labels, tuple(c.label for c in man.columns),
            entries, qtable, man.columns,
        )
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.spec:
        try:
            assignment = _parse_spec(args.spec)
            vals = table.evaluate(assignment)
        except (ValueError, KeyError, ZeroDivisionError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if args.format == "json":
            text = json.dumps(
                {
                    "name": table.name,
                    "spec": {k: str(v) for k, v in sorted(assignment.items())},
                    "rows": list(table.row_labels),
                    "cols": list(table.col_labels),
                    "entries": [[str(v) for v in row] for row in vals],
                },
                indent=2,
            ) + "\n"
        elif args.format == "csv":
            lines = [",".join([table.name] + list(table.col_labels))]
            for lab, row in zip(table.row_labels, vals):
                lines.append(",".join([lab] + [str(v) for v in row]))
            text = "\n".join(lines) + "\n"
        else:
            head = [table.name] + list(table.col_labels)
            lines = ["| " + " | ".join(head) + " |", "|" + "|".join(["---"] * len(head)) + "|"]
            for lab, row in zip(table.row_labels, vals):
                lines.append("| " + " | ".join([lab] + [str(v) for v in row]) + " |")
            text = "\n".join(lines) + "\n"
    elif args.format == "json":
        text = json.dumps(table.to_json_dict(), indent=2) + "\n"
    elif args.format == "csv":
        text = table.to_csv()
    else:
        text = table.to_markdown()
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in rigidtab.SUITES:
        print(f"error: unknown suite {args.suite!r}; have {rigidtab.SUITES}", file=sys.stderr)
        return EXIT_USAGE
    if args.preset and args.preset in rigidtab.MANIFESTS:
        pc = rigidtab.build_preset_context(args.preset, L=args.max_length)
    elif args.suite in ("lengths", "classes", "counts"):
        # datum-only suites: build a bare context without a module panel
        try:
            wd = _load_weyl(args)
        except (DatumFormatError, KeyError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        man = rigidtab.PresetManifest(
            wd.datum.name, None, (), (), (), lambda qt: None, ""
        )
        classes = newton_zero_classes(wd, args.max_length)
        pc = rigidtab.PresetContext(
            man, wd, HeckeContext(wd), classes, list(classes), []
        )
    else:
        print(
            "error: this suite needs a preset module panel (use --preset)",
            file=sys.stderr,
        )
        return EXIT_USAGE
    try:
        checks = rigidtab.run_suite(pc, args.suite)
    except Exception as exc:
        print(f"error: suite {args.suite} crashed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = {
        "suite": args.suite,
        "checks": [
            {"name": c.name, "status": c.status, "detail": c.detail} for c in checks
        ],
    }
    text = json.dumps(report, indent=2) + "\n"
    _emit(text, args.out)
    if args.out:
        for c in checks:
            print(f"{c.status.upper():4} {c.name}: {c.detail}")
    ok = all(c.ok for c in checks)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reduce(args) -> int:
    try:
        wd = _load_weyl(args)
    except (DatumFormatError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    letters = [w.strip() for w in args.word.split(",") if w.strip()]
    try:
        e = wd.evaluate_word(letters)
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ctx = HeckeContext(wd)
    classes = newton_zero_classes(wd, args.max_length)
    comb = ctx.cocenter_reduce(e, classes, extend=True)
    # trace verification against the preset module panel where available;
    # the panel is rebuilt over the same (unmerged) parameter context
    status = "skipped (no preset module panel)"
    code = EXIT_OK
    if args.preset and args.preset in rigidtab.MANIFESTS:
        manifest = rigidtab.MANIFESTS[args.preset]
        ok = True
        for spec in manifest.columns:
            mod = rigidtab.resolve_column(ctx, spec)
            rhs = ctx.zero()
            for rec, c in comb.entries:
                rhs = rhs + c * mod.trace(rec.rep)
            if mod.trace(e) != rhs:
                ok = False
        status = "ok" if ok else "FAILED"
        if not ok:
            code = EXIT_FAIL
    _emit(f"{comb.render()}\ntrace-verification: {status}\n", args.out)
    return code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rigidhecke",
        description="Exact rigid-cocenter computations for affine Hecke algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, preset_required=False):
        g = p.add_mutually_exclusive_group(required=preset_required)
        g.add_argument("--preset", choices=PRESET_NAMES, help="built-in root datum")
        g.add_argument("--datum", help="JSON root datum file")
        p.add_argument("--max-length", type=int, default=8, help="class enumeration bound")
        p.add_argument("--format", choices=("md", "csv", "json"), default="md")
        p.add_argument("--out", help="write output to a file instead of stdout")
        p.add_argument("--jobs", type=int, default=1, help="parallel cell computation")

    p_classes = sub.add_parser("classes", help="enumerate Newton-zero conjugacy classes")
    common(p_classes, preset_required=True)
    p_classes.set_defaults(fn=cmd_classes)

    p_table = sub.add_parser("table", help="build a rigid character table")
    common(p_table, preset_required=True)
    p_table.add_argument("--spec", help="evaluate at name=rational,... parameter values")
    p_table.set_defaults(fn=cmd_table)

    p_verify = sub.add_parser("verify", help="run verification suites")
    common(p_verify, preset_required=True)
    p_verify.add_argument("--suite", default="all", help=f"one of {rigidtab.SUITES}")
    p_verify.set_defaults(fn=cmd_verify)

    p_reduce = sub.add_parser("reduce", help="reduce T_w to the T_O spanning set")
    common(p_reduce, preset_required=True)
    p_reduce.add_argument("--word", required=True, help="comma-separated generators, e.g. s1,s0,s1")
    p_reduce.set_defaults(fn=cmd_reduce)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

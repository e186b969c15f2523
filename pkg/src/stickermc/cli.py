"""Command line: check, encode, simulate, oracle, audit.

Exit codes: 0 when the property holds (or the audit passes, or the layers
agree), 1 when it does not, 2 on usage, parse or validation errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from importlib import resources
from pathlib import Path

from .automata import build_formula_fsa
from .checker import (DEFAULT_RUN_CAP, check_ctl, compute_bound, cross_validate, default_code_table,
                      m1_path, pipeline)
from .core import Literal, RunPath, emittable_letters
from .encoding import (REFERENCE_TABLE, CodeTable, audit_code_table, encode_formula_fsa, encode_run,
                       generate_code_table, strands_to_fasta)
from .frontend import (ALL_KINDS, CtlConstruct, Kind, LtlObligation, Obligation, parse_formula,
                       parse_model, reduce, render)
from .hybridization import run_slots, tile_slots

EXIT_HOLDS, EXIT_FAILS, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    pass


def _data(name: str) -> str:
    return resources.files("stickermc").joinpath("data").joinpath(name).read_text()


def load_model(spec: str):
    """A model file path, or ``m1`` for the bundled reference model."""
    if spec == "m1":
        return parse_model(_data("m1.lfsa"))
    try:
        text = Path(spec).read_text()
    except OSError as exc:
        raise CliError(f"cannot read model {spec}: {exc.strerror}") from None
    return parse_model(text)


def load_table(spec: str | None) -> CodeTable | None:
    if spec is None:
        return None
    if spec == "tab3":
        return CodeTable.from_text(_data("tab3.ct"))
    try:
        return CodeTable.from_text(Path(spec).read_text())
    except OSError as exc:
        raise CliError(f"cannot read code table {spec}: {exc.strerror}") from None


def _obligation(args) -> LtlObligation:
    if getattr(args, "formula_fsa", None):
        if args.formula_fsa != "phi1":
            raise CliError(f"unknown formula automaton {args.formula_fsa!r} (known: phi1)")
        return LtlObligation(Obligation.PHI1, Literal("p", True), Literal("q", True))
    if not args.formula:
        raise CliError("need --formula or --formula-fsa")
    return reduce(parse_formula(args.formula)).obligation


def _table_for(args, a):
    if getattr(args, "generate", False):
        return generate_code_table(a.alphabet, len(a.states), seed=args.seed)
    table = load_table(args.table)
    return table.truncated(len(a.states)) if table is not None else default_code_table(a)


def verdict_report(v) -> dict:
    red = v.reduction
    report = {
        "construct": render(v.construct),
        "reduction": {"obligation": str(red.obligation), "negate": red.negate_verdict},
        "bound": v.bound,
        "runsChecked": v.runs_checked,
        "answer": v.answer_text,
        "perRun": [{"path": str(run), "accepted": ok} for run, ok in v.per_run],
    }
    if v.witness is not None:
        report["witness"] = str(v.witness)
    if getattr(v, "warning", None):
        report["warning"] = v.warning
    return report


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def verdict_text(report: dict) -> str:
    red = report["reduction"]
    lines = [
        f"construct    {report['construct']}",
        f"reduction    {red['obligation']}{'  (verdict negated)' if red['negate'] else ''}",
        f"bound        {report['bound']}",
        f"runs checked {report['runsChecked']}",
    ]
    for row in report["perRun"]:
        lines.append(f"  {row['path']:<40s} {'accepted' if row['accepted'] else 'rejected'}")
    if "witness" in report:
        lines.append(f"witness      {report['witness']}")
    if "warning" in report:
        lines.append(f"warning      {report['warning']}")
    lines.append(f"answer       {report['answer']}")
    return "\n".join(lines) + "\n"


def _write_artifacts(directory: str, g: LtlObligation, table) -> dict:
    pipe = pipeline(g, table)
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"codeTable": out / "code_table.ct", "library": out / "library.fasta"}
    paths["codeTable"].write_text(pipe.table.to_text())
    paths["library"].write_text(pipe.library.to_fasta())
    return {k: str(v) for k, v in paths.items()}


def cmd_check(args) -> int:
    model = load_model(args.model)
    c = parse_formula(args.formula)
    table = load_table(args.table)
    v = check_ctl(model, c, args.bound, table, args.cap)
    report = verdict_report(v)
    if args.artifacts:
        report["dnaArtifacts"] = _write_artifacts(args.artifacts, v.reduction.obligation, table)
    sys.stdout.write(dump_json(report) if args.report == "json" else verdict_text(report))
    return EXIT_HOLDS if v.answer else EXIT_FAILS


def cmd_encode(args) -> int:
    if args.word:
        names = [w.strip() for w in args.word.split(",") if w.strip()]
        table = load_table(args.table) or REFERENCE_TABLE
        if args.generate:
            table = generate_code_table(names, table.m, seed=args.seed)
        strand = encode_run(names, table, label="run")
        sys.stdout.write(f"# {len(strand.bases)} nt\n")
        sys.stdout.write(strands_to_fasta([strand]))
        return EXIT_HOLDS
    g = _obligation(args)
    a = build_formula_fsa(g)
    ct = _table_for(args, a)
    lib = encode_formula_fsa(a, ct)
    sys.stdout.write(f"# obligation {g}\n# code table\n")
    sys.stdout.write("".join(f"# {line}\n" for line in ct.to_text().splitlines()))
    sys.stdout.write(lib.to_fasta())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "code_table.ct").write_text(ct.to_text())
        (out / "library.fasta").write_text(lib.to_fasta())
    return EXIT_HOLDS


def cmd_simulate(args) -> int:
    g = _obligation(args)
    pipe = pipeline(g, load_table(args.table))
    a, ct, lib = pipe.fsa, pipe.table, pipe.library
    if args.word:
        emissions = [[w.strip()] for w in args.word.split(",") if w.strip()]
        label = args.word
    else:
        model = load_model(args.model).with_propositions(g.propositions())
        run = m1_path(args.path) if args.path else RunPath(tuple(int(s) if s.isdigit() else s
                                                               for s in args.run.split(",")))
        run = RunPath.of(model, run.states)
        emissions = [sorted(l.name for l in emittable_letters(v, a.alphabet)) for v in run.valuations(model)]
        label = str(run)
    slots, widths = run_slots(emissions, ct)
    names = [s.label for s in lib.transition_strands()]
    if args.groups is None:
        groups = [tuple(names)]
    else:
        if not 0 <= args.groups <= len(names):
            raise CliError(f"group size must be between 0 and {len(names)}")
        groups = list(itertools.combinations(names, args.groups))
    sys.stdout.write(f"# run {label}  emissions {' '.join('/'.join(e) or '-' for e in emissions)}\n")
    complete = 0
    for i, group in enumerate(groups, 1):
        t = tile_slots(slots, lib.restricted(group), widths)
        complete += t.complete
        detail = " ".join(f"{n}@{s}-{e}" for n, s, e in t.cover)
        if not t.complete and t.uncovered:
            detail += "  uncovered " + " ".join(f"{s}-{e}" for s, e in t.uncovered)
        sys.stdout.write(f"group {i:2d}  {','.join(group) or '-':<24s} {'complete' if t.complete else 'incomplete':10s} {detail}\n")
    return EXIT_HOLDS if complete else EXIT_FAILS


def _constructs(args) -> list:
    if args.all_constructs:
        p, q = Literal("p"), Literal("q")
        return [CtlConstruct(k, p, q if k in (Kind.AU, Kind.EU) else None) for k in ALL_KINDS]
    if not args.formula:
        raise CliError("need --formula or --all-constructs")
    return [parse_formula(args.formula)]


def cmd_oracle(args) -> int:
    model = load_model(args.model)
    L = args.bound or compute_bound(model)
    ok = True
    sys.stdout.write(f"{'construct':<12s} {'dna':>4s} {'oracle':>7s} {'runs':>6s}  agree\n")
    for c in _constructs(args):
        rep = cross_validate(model, c, L, load_table(args.table), args.cap)
        ok &= rep.agree
        line = f"{render(c):<12s} {rep.dna.answer_text:>4s} {rep.oracle.answer_text:>7s} {rep.runs_checked:>6d}  {'yes' if rep.agree else 'NO'}"
        if rep.first_difference:
            run, dna_holds, oracle_holds = rep.first_difference
            line += f"  first difference on {run}: dna {dna_holds}, oracle {oracle_holds}"
        sys.stdout.write(line + "\n")
    return EXIT_HOLDS if ok else EXIT_FAILS


def cmd_audit(args) -> int:
    table = load_table(args.table)
    min_hit = args.min_hit or table.code_length + 1
    report = audit_code_table(table, min_hit)
    sys.stdout.write(report.to_text())
    return EXIT_HOLDS if report.passed else EXIT_FAILS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stickermc", description="Sticker-automaton CTL model checking simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    def table_opts(p, default=None):
        p.add_argument("--table", default=default, help="'tab3' or a code-table file")

    p = sub.add_parser("check", help="check a CTL construct on a model")
    p.add_argument("--model", required=True, help="model file, or 'm1'")
    p.add_argument("--formula", required=True)
    p.add_argument("--bound", type=int, help="states per run (default: computed bound)")
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.add_argument("--artifacts", metavar="DIR", help="write code table and sticker library here")
    p.add_argument("--cap", type=int, default=DEFAULT_RUN_CAP)
    table_opts(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("encode", help="dump code table and strands")
    p.add_argument("--formula")
    p.add_argument("--formula-fsa", choices=("phi1",))
    p.add_argument("--word", help="comma-separated letters, e.g. s,u,q")
    p.add_argument("--generate", action="store_true", help="generate a code table")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="DIR")
    table_opts(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("simulate", help="tile one run strand, optionally per sticker group")
    p.add_argument("--model", default="m1")
    p.add_argument("--formula")
    p.add_argument("--formula-fsa", choices=("phi1",))
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--path", type=int, help="path (0,1)^k,2 of the reference model")
    where.add_argument("--run", help="comma-separated state ids")
    where.add_argument("--word", help="comma-separated letters")
    p.add_argument("--groups", type=int, help="transition stickers per group")
    table_opts(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="cross-validate the DNA layer against the oracle")
    p.add_argument("--model", required=True)
    p.add_argument("--formula")
    p.add_argument("--all-constructs", action="store_true")
    p.add_argument("--bound", type=int)
    p.add_argument("--cap", type=int, default=DEFAULT_RUN_CAP)
    table_opts(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("audit", help="cross-hybridisation audit of a code table")
    table_opts(p, default="tab3")
    p.add_argument("--min-hit", type=int)
    p.set_defaults(func=cmd_audit)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_HOLDS
    try:
        return args.func(args)
    except (CliError, ValueError, KeyError, OverflowError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"stickermc {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

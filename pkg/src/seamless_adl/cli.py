"""Command-line entry point: ``seamless-adl <subcommand> <file> [options]``.

Exit codes: 0 success with no error diagnostics, 1 error diagnostics found
(``check``, ``validate``, ``gaps``), 2 usage, file access or unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import exporter
from .adl import load, serialize
from .diagnostics import has_errors
from .metamodel import ElementKind
from .model import ArchitectureModel, UnknownElementError
from .tracer import BACKWARD, FORWARD, TraceOptions, coverage, impact, trace, trace_matrix
from .validator import RuleConfig, RuleConfigError, gap_report, validate

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2


class CliError(Exception):
    """Invocation problem: reported on stderr, exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default; keep it explicit
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
    model, diagnostics = load(data, path)
    if any(d.code == "E-ENCODING" for d in diagnostics):
        raise CliError(exporter.render_diagnostics(diagnostics).rstrip())
    return model, diagnostics


def _read_clean(path: str) -> ArchitectureModel:
    """Load for analysis commands, which refuse inputs that failed to load."""
    model, diagnostics = _read(path)
    if has_errors(diagnostics):
        raise CliError(f"{path} has errors; run 'check' for details\n"
                       + exporter.render_diagnostics(diagnostics).rstrip())
    return model


def _kind(token: str) -> ElementKind:
    try:
        return ElementKind.parse(token)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _options(args) -> TraceOptions:
    return TraceOptions("extended" if args.extended else "default", args.depth)


def cmd_check(args):
    _, diagnostics = _read(args.file)
    return exporter.render_diagnostics(diagnostics, args.format), has_errors(diagnostics)


def cmd_validate(args):
    config = RuleConfig()
    if args.rules:
        try:
            config = RuleConfig.load(args.rules)
        except OSError as exc:
            raise CliError(f"cannot read {args.rules}: {exc.strerror or exc}") from None
        except RuleConfigError as exc:
            raise CliError(str(exc)) from None
    model, diagnostics = _read(args.file)
    diagnostics = diagnostics + validate(model, config)
    return exporter.render_diagnostics(diagnostics, args.format), has_errors(diagnostics)


def cmd_gaps(args):
    model, load_diags = _read(args.file)
    report = gap_report(model)
    found = has_errors(load_diags) or any(has_errors(g.diagnostics) for g in report.values())
    if args.format == "json":
        body = json.dumps({token: {
            "connecting_kind": gap.seam.connecting_kind.value,
            "coverage": gap.coverage,
            "realized": gap.numerator,
            "total": gap.denominator,
            "diagnostics": json.loads(exporter.render_diagnostics(gap.diagnostics, "json")),
        } for token, gap in report.items()}, indent=2) + "\n"
        return body, found
    lines = []
    for token, gap in report.items():
        lines.append(f"{token} {gap.seam.name}: {gap.numerator}/{gap.denominator} "
                     f"({gap.coverage:.2f})")
        lines += ["  " + exporter.diagnostic_to_text(d) for d in gap.diagnostics]
    return "\n".join(lines) + "\n", found


def cmd_trace(args):
    model = _read_clean(args.file)
    result = trace(model, args.from_id, args.direction, _options(args))
    if args.format == "json":
        return exporter.trace_to_json(result) + "\n", False
    if args.format == "dot":
        return exporter.trace_to_dot(model, result), False
    return exporter.trace_to_text(result), False


def cmd_impact(args):
    model = _read_clean(args.file)
    ids = impact(model, args.on, _options(args))
    if args.format == "json":
        return json.dumps(ids) + "\n", False
    return "".join(f"{eid}\n" for eid in ids), False


def cmd_matrix(args):
    model = _read_clean(args.file)
    pairs = trace_matrix(model, _kind(args.from_kind), _kind(args.to_kind), _options(args))
    if args.format == "json":
        return json.dumps([list(p) for p in pairs]) + "\n", False
    return "".join(f"{src} {dst}\n" for src, dst in pairs), False


def cmd_coverage(args):
    model = _read_clean(args.file)
    report = coverage(model)
    if args.format == "json":
        return json.dumps({token: {"realized": c.numerator, "total": c.denominator,
                                   "coverage": c.ratio}
                           for token, c in report.items()}, indent=2) + "\n", False
    return "".join(f"{token} {c.seam.name} {c.numerator}/{c.denominator} {c.ratio:.2f}\n"
                   for token, c in report.items()), False


def cmd_export(args):
    model = _read_clean(args.file)
    if args.format == "plantuml":
        return exporter.export_plantuml_deployment(model), False
    if args.format == "json":
        return exporter.model_to_json(model) + "\n", False
    try:
        return exporter.export_dot(model, args.scope), False
    except ValueError as exc:
        raise CliError(str(exc)) from None


def cmd_doc(args):
    model = _read_clean(args.file)
    return exporter.render_archdoc(model, validate(model), coverage(model)), False


def cmd_fmt(args):
    return serialize(_read_clean(args.file)), False


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seamless-adl",
                     description="Parse, validate and trace layered architecture descriptions.")
    parser.add_argument("-o", "--output", help="write the result here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_text, formats=("text", "json")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file")
        if formats:
            p.add_argument("--format", choices=formats, default=formats[0])
        p.set_defaults(func=func)
        return p

    def trace_flags(p):
        p.add_argument("--extended", action="store_true",
                       help="also follow ownership and deployment links")
        p.add_argument("--depth", type=int, default=None)

    command("check", cmd_check, "parse and lower only")
    p = command("validate", cmd_validate, "run the rule catalog")
    p.add_argument("--rules", help="rule configuration file")
    command("gaps", cmd_gaps, "per-seam gap report")
    p = command("trace", cmd_trace, "trace closure from one element", ("text", "json", "dot"))
    p.add_argument("--from", dest="from_id", required=True)
    p.add_argument("--direction", choices=(FORWARD, BACKWARD), default=FORWARD)
    trace_flags(p)
    p = command("impact", cmd_impact, "elements affected by changing one element")
    p.add_argument("--on", required=True)
    trace_flags(p)
    p = command("matrix", cmd_matrix, "traceability matrix between two element kinds")
    p.add_argument("--from-kind", required=True)
    p.add_argument("--to-kind", required=True)
    trace_flags(p)
    command("coverage", cmd_coverage, "seam coverage ratios")
    p = command("export", cmd_export, "diagrams and JSON", ("dot", "plantuml", "json"))
    p.add_argument("--scope", default="all", help="all, a layer name, or seam1..seam4")
    command("doc", cmd_doc, "generated Markdown architecture document", None)
    command("fmt", cmd_fmt, "canonical serialization", None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "depth", None) is not None and args.depth < 0:
        parser.error("--depth must be non-negative")
    try:
        body, found_errors = args.func(args)
    except CliError as exc:
        print(f"seamless-adl: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownElementError as exc:
        print(f"seamless-adl: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if body and not body.endswith("\n"):
        body += "\n"
    if args.output:
        try:
            Path(args.output).write_text(body, encoding="utf-8")
        except OSError as exc:
            print(f"seamless-adl: cannot write {args.output}: {exc.strerror or exc}",
                  file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(body)
    return EXIT_FINDINGS if found_errors else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

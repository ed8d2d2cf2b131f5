"""Command-line driver: parse, validate, then run one operation.

Exit codes: 0 success, 1 model errors (parse/validation/lookup failures),
2 usage errors.  Diagnostics and usage messages go to stderr; stdout carries
only the command payload so output can be piped.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from . import model as m
from .classes import evaluate_class
from .definitions import (
    DefinitionError,
    describe_object,
    extensional_definition,
    intensional_definition,
    lexicon,
)
from .exporters import ExportOptions, print_dsl, to_dot, to_json
from .parser import ParseError, parse, parse_class_expr
from .reasoner import validate

COMMANDS = ("check", "tree", "query", "define", "describe", "lexicon", "export")


@dataclass
class CliConfig:
    command: str
    input: str
    output: Optional[str] = None
    flags: dict = field(default_factory=dict)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otl", description="Work with .otl conceptual system files."
    )
    parser.add_argument("--version", action="version", version=f"otl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", metavar="FILE", help="input .otl file")
        p.add_argument("-o", "--output", metavar="PATH", help="write payload to PATH instead of stdout")
        return p

    add("check", "validate a file and report diagnostics")
    tree = add("tree", "emit the concept hierarchy as DOT")
    tree.add_argument("--derived", action="store_true", help="include derived subsumption edges")
    tree.add_argument("--objects", action="store_true", help="include object nodes")
    query = add("query", "evaluate a class expression over the objects")
    query.add_argument("--class", dest="class_expr", metavar="EXPR", required=True)
    define = add("define", "generate a concept definition")
    define.add_argument("concept", metavar="CONCEPT")
    define.add_argument("--extensional", action="store_true", help="enumerate direct subordinates instead")
    describe = add("describe", "describe an object")
    describe.add_argument("object", metavar="OBJECT")
    lex = add("lexicon", "print the term/definition table for a language")
    lex.add_argument("--lang", metavar="TAG", required=True)
    export = add("export", "serialize the model")
    export.add_argument("--format", dest="format", choices=("json", "dsl"), required=True)
    return parser


def _load(path: str, stderr) -> Optional[m.Model]:
    try:
        with open(path, encoding="utf-8") as handle:
            source = handle.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror}", file=stderr)
        return None
    result = parse(source, path)
    diagnostics = list(result.diagnostics)
    model = result.model
    if model is not None:
        diagnostics.extend(validate(model))
    for diag in diagnostics:
        print(diag.render(), file=stderr)
    if model is None or m.has_errors(diagnostics):
        return None
    return model


def _emit(payload: str, output: Optional[str], stdout, stderr) -> int:
    if output is None:
        stdout.write(payload)
        return 0
    try:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(payload)
    except OSError as exc:
        print(f"error: cannot write {output}: {exc.strerror}", file=stderr)
        return 1
    return 0


def run(argv: list[str], stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help/--version/usage errors
        code = exc.code if isinstance(exc.code, int) else 2
        return code

    config = CliConfig(
        command=args.command,
        input=args.input,
        output=args.output,
        flags={
            k: v
            for k, v in vars(args).items()
            if k not in ("command", "input", "output")
        },
    )

    model = _load(config.input, stderr)
    if model is None:
        return 1

    try:
        if config.command == "check":
            return 0
        if config.command == "tree":
            opts = ExportOptions(
                include_objects=config.flags["objects"],
                include_derived_edges=config.flags["derived"],
            )
            return _emit(to_dot(model, opts), config.output, stdout, stderr)
        if config.command == "query":
            expr = parse_class_expr(config.flags["class_expr"])
            members = evaluate_class(model, expr)
            payload = "".join(oid + "\n" for oid in sorted(members))
            return _emit(payload, config.output, stdout, stderr)
        if config.command == "define":
            name = config.flags["concept"]
            if name not in model.concepts:
                _explain_wrong_kind(model, name, "concept", stderr)
                return 1
            if config.flags["extensional"]:
                definition = extensional_definition(model, name)
            else:
                definition = intensional_definition(model, name)
            return _emit(definition.render() + "\n", config.output, stdout, stderr)
        if config.command == "describe":
            name = config.flags["object"]
            if name not in model.objects:
                _explain_wrong_kind(model, name, "object", stderr)
                return 1
            return _emit(describe_object(model, name) + "\n", config.output, stdout, stderr)
        if config.command == "lexicon":
            return _emit(lexicon(model, config.flags["lang"]), config.output, stdout, stderr)
        # export
        payload = to_json(model) if config.flags["format"] == "json" else print_dsl(model)
        return _emit(payload, config.output, stdout, stderr)
    except (ParseError, DefinitionError, m.OtlError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1


def _explain_wrong_kind(model: m.Model, name: str, wanted: str, stderr) -> None:
    def an(word: str) -> str:
        return "an" if word[0] in "aeiou" else "a"

    try:
        found = m.resolve(model, name)
        print(
            f"error: '{name}' is {an(found.kind)} {found.kind}, not {an(wanted)} {wanted}",
            file=stderr,
        )
    except m.OtlError:
        print(f"error: unknown {wanted} '{name}'", file=stderr)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

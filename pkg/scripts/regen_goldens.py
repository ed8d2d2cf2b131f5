#!/usr/bin/env python3
"""Regenerate the golden files under tests/golden from the fixtures.

Run from the repository root after an intentional output-format change, then
review the diff by hand before committing: the goldens pin byte-exact
behavior.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from otl import (  # noqa: E402
    ExportOptions,
    extensional_definition,
    intensional_definition,
    lexicon,
    parse,
    to_dot,
    to_json,
    validate_or_raise,
)

FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = ROOT / "tests" / "golden"


def build(name: str):
    result = parse((FIXTURES / name).read_text(encoding="utf-8"), name)
    assert result.model is not None, [d.render() for d in result.diagnostics]
    return validate_or_raise(result.model)


def write(name: str, payload: str) -> None:
    path = GOLDEN / name
    path.write_text(payload, encoding="utf-8")
    print(f"wrote {path.relative_to(ROOT)} ({len(payload)} bytes)")


def main() -> None:
    GOLDEN.mkdir(exist_ok=True)
    mouse = build("mouse.otl")
    write("mouse.otl.json", to_json(mouse))
    write("mouse.dot", to_dot(mouse))
    write(
        "mouse_tree_full.dot",
        to_dot(mouse, ExportOptions(include_objects=True, include_derived_edges=True)),
    )
    write("define_optical_mouse.txt", intensional_definition(mouse, "OpticalMouse").render() + "\n")
    write(
        "define_pointing_device_ext.txt",
        extensional_definition(mouse, "PointingDevice").render() + "\n",
    )
    write("lexicon_mouse_en.txt", lexicon(mouse, "en"))


if __name__ == "__main__":
    main()

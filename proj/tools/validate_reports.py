#!/usr/bin/env python3
"""Validate scenarios and reports against the schemas in docs/."""
import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource

DOCS = pathlib.Path(__file__).resolve().parent.parent / "docs"


def load(name):
    return json.loads((DOCS / name).read_text())


def main(argv):
    if len(argv) < 3 or argv[1] not in ("scenario", "report"):
        print("usage: validate_reports.py scenario|report FILE...", file=sys.stderr)
        return 2
    scenario, report = load("schema.json"), load("report_schema.json")
    registry = Registry().with_resources([
        (scenario["$id"], Resource.from_contents(scenario)),
        (report["$id"], Resource.from_contents(report)),
    ])
    schema = scenario if argv[1] == "scenario" else report
    validator = jsonschema.Draft202012Validator(schema, registry=registry)
    bad = 0
    for path in argv[2:]:
        errors = sorted(validator.iter_errors(json.loads(pathlib.Path(path).read_text())),
                        key=lambda e: list(e.path))
        for e in errors[:5]:
            print(f"{path}: {'/'.join(map(str, e.path)) or '<root>'}: {e.message}", file=sys.stderr)
        bad += bool(errors)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))

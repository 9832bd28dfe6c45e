#!/usr/bin/env python3
"""Validate scenario files against scenarios/schema.json."""
import json
import pathlib
import sys

import jsonschema


def main(argv):
    root = pathlib.Path(argv[1]) if len(argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "scenarios"
    schema = json.loads((root / "schema.json").read_text())
    validator = jsonschema.Draft7Validator(schema)
    bad = 0
    files = sorted(p for p in root.glob("*.json") if p.name != "schema.json")
    for path in files:
        errors = sorted(validator.iter_errors(json.loads(path.read_text())), key=lambda e: list(e.absolute_path))
        for e in errors:
            print(f"{path.name}: /{'/'.join(map(str, e.absolute_path))}: {e.message}")
        bad += bool(errors)
        if not errors:
            print(f"{path.name}: ok")

    # the schema has to reject what the parser rejects
    probe = json.loads((root / "gaas_n10.json").read_text())
    probe["geometry"]["pitch_m"] = 1e-6
    if validator.is_valid(probe):
        print("schema accepted both pitch_m and f_idt_GHz")
        bad += 1
    return 1 if bad or not files else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))

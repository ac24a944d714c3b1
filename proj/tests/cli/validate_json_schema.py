#!/usr/bin/env python3
"""Runs `scarf awi --format json` over the test fixtures and validates the
output against the published schema, including a document with error rows."""
import json
import subprocess
import sys

import jsonschema


def awi_json(cli, fixtures, *extra):
    cmd = [cli, "awi", "--format", "json",
           "--registry", f"{fixtures}/facilities.csv",
           "--snapshot", f"{fixtures}/stress.csv",
           "--gazetteer", f"{fixtures}/gazetteer.csv", *extra]
    proc = subprocess.run(cmd, capture_output=True, text=True, check=False)
    return proc.returncode, json.loads(proc.stdout)


def main(cli, schema_path, fixtures):
    with open(schema_path, encoding="utf-8") as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    cases = [
        ((), 0),
        (("--horizon", "short"), 0),
        (("--horizon", "monthly=6"), 0),
        (("--gamma", "inf"), 0),
        (("--scenario", "optimistic"), 3),
    ]
    failures = 0
    for extra, want in cases:
        code, doc = awi_json(cli, fixtures, *extra)
        errors = list(validator.iter_errors(doc))
        if code != want or errors:
            failures += 1
            print(f"FAIL {extra}: exit {code} (want {want})")
            for e in errors:
                print("   ", e.message)
    print("ok" if failures == 0 else f"{failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:4]))

"""Run every JSON-producing subcommand and validate the output against docs/output-schema.json."""
import json
import os
import subprocess
import sys
import tempfile

import jsonschema


def run(binary, *args):
    proc = subprocess.run([binary, *args], capture_output=True, text=True, check=False)
    if proc.returncode != 0:
        sys.exit(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr}")
    return proc.stdout


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)

    with tempfile.TemporaryDirectory() as tmp:
        csv = os.path.join(tmp, "d5.csv")
        with open(csv, "w") as f:
            f.write(run(binary, "simulate", "--design", "5", "--n", "150", "--seed", "4"))
        cases = [
            ["estimate", csv, "--groups", "0;1;2"],
            ["estimate", csv, "--groups", "0-3;4-7", "--h", "0.7", "--threshold", "closed_form"],
            ["estimate", csv, "--groups", "0;1;2;3", "--strategy", "bipartitions", "--max-partitions", "3"],
            ["montecarlo", "--design", "2", "--n", "100", "--reps", "3", "--seed", "2"],
            ["singvals", "--design", "1", "--n", "200", "--full-spectrum"],
            ["singvals", csv, "--groups", "0;1;2", "--pair", "0,2", "--delta", "0.7"],
            ["pdelta", "--design", "2", "--n", "300", "--m0", "4"],
        ]
        failures = 0
        for args in cases:
            doc = json.loads(run(binary, *args))
            errors = sorted(validator.iter_errors(doc), key=str)
            status = "ok" if not errors else "INVALID"
            print(f"{status}: {' '.join(a for a in args if a != csv)}")
            for e in errors[:5]:
                print(f"    {e.message} at {list(e.absolute_path)}")
            failures += bool(errors)
            # round trip: re-serialised output still validates and compares equal
            assert json.loads(json.dumps(doc)) == doc
            # the schema must reject a document missing its command tag
            broken = dict(doc)
            del broken["command"]
            if validator.is_valid(broken):
                print(f"    schema accepted a document without 'command' ({args[0]})")
                failures += 1
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()

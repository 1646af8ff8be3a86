"""Validate the sample configurations against the schema and run describe on each."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

here = pathlib.Path(__file__).parent
schema = json.loads((here / "config.schema.json").read_text())
binary = sys.argv[1]

for cfg in sorted((here / "configs").glob("*.json")):
    jsonschema.validate(json.loads(cfg.read_text()), schema)
    with tempfile.TemporaryDirectory() as out:
        subprocess.run([binary, "describe", "--config", str(cfg), "--out", out], check=True, capture_output=True)
        report = json.loads((pathlib.Path(out) / "describe.json").read_text())
        # the resolved copy written back is itself a valid configuration
        jsonschema.validate(report["config"], schema)
    print("ok", cfg.name)

# Copyright 2026 The Parrot Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Checks shipped documents against the schemas under docs/."""

import json
import pathlib
import sys

import jsonschema

root = pathlib.Path(sys.argv[1])


def load(p):
    with open(p, encoding="utf-8") as f:
        return json.load(f)


program = load(root / "docs" / "program.schema.json")
trace = load(root / "docs" / "trace.schema.json")
jsonschema.Draft202012Validator.check_schema(program)
jsonschema.Draft202012Validator.check_schema(trace)

failures = 0


def expect(schema, doc, ok, label):
    global failures
    errors = list(jsonschema.Draft202012Validator(schema).iter_errors(doc))
    if bool(errors) == ok:
        failures += 1
        print(f"FAIL {label}: {'rejected' if errors else 'accepted'}")
        for e in errors[:3]:
            print("   ", e.message)
    else:
        print(f"ok   {label}")


for p in sorted((root / "assets" / "examples").glob("*.json")):
    expect(program, load(p), True, p.name)
for p in sorted((root / "tests" / "data").glob("*.trace.json")):
    expect(trace, load(p), p.name != "bad_hex.trace.json", p.name)
for p in sorted((root / "tests" / "golden").glob("*/results.json")):
    expect(trace, load(p), True, str(p.relative_to(root)))

bad = load(root / "assets" / "examples" / "guess_game.json")
bad["processors"][0]["body"][0]["op"] = "frobnicate"
expect(program, bad, False, "unknown op")
expect(program, {"layouts": {"x": [{"name": "a", "width": 12}]}}, False, "bad width")

sys.exit(1 if failures else 0)

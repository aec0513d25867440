# Copyright 2026 The ModelHub Authors
# SPDX-License-Identifier: Apache-2.0

"""Reference reading of the annotation grammar, written with Python regexes.

Prints the expected manifest and diagnostic summary for each file given on
the command line as one JSON document keyed by file name.

Usage: python3 annotation_oracle.py FILE[:TAG] ... > expected.json
"""

import hashlib
import json
import os
import re
import sys

KEYWORDS = {
    "Model": "Model", "Description": "Description",
    "Interface Object": "InterfaceObject", "Interface File": "InterfaceFile",
    "Helper Object": "HelperObject", "Variable": "Variable",
    "Function": "Function", "Constraint": "Constraint",
    "Objective": "Objective", "Problem": "Problem", "Solver": "Solver",
    "Execution": "Execution", "Output Object": "OutputObject",
    "Output File": "OutputFile",
}


def parse(data, tag):
    marker = re.compile(rb"^[ \t\r]*" + re.escape(tag.encode()) + rb"@(.*)$")
    manifest = {"name": "", "description": None, "comment_tag": tag,
                "source_digest": hashlib.sha256(data).hexdigest(),
                "components": []}
    errors, warnings = [], []
    target = None  # "model", "component", "invalid" or None
    open_idx = None
    offset = 0
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    for lineno, raw in enumerate(lines, start=1):
        start = offset
        offset += len(raw) + 1
        offset = min(offset, len(data))
        m = marker.match(raw)
        if not m:
            continue
        body = m.group(1).decode()
        if ":" not in body:
            warnings.append(lineno)
            continue
        head, value = body.split(":", 1)
        keyword = " ".join(head.split())
        value = value.strip(" \t\r\n")
        if keyword not in KEYWORDS:
            warnings.append(lineno)
            continue
        kind = KEYWORDS[keyword]
        if kind == "Description":
            if target == "component":
                comp = manifest["components"][-1]
                if value:
                    comp["description"] = (comp["description"] + " " + value
                                           if comp["description"] else value)
            elif target == "model":
                if value:
                    d = manifest["description"]
                    manifest["description"] = d + " " + value if d else value
            elif target == "invalid":
                warnings.append(lineno)
            else:
                errors.append(lineno)
            continue
        if open_idx is not None:
            manifest["components"][open_idx]["span"]["end"] = start
            open_idx = None
        if kind == "Model":
            manifest["name"] = value
            target = "model"
            continue
        if not value:
            errors.append(lineno)
            target = "invalid"
            continue
        manifest["components"].append({
            "kind": kind, "name": value, "description": None,
            "span": {"start": start, "end": start},
            "order": len(manifest["components"]),
        })
        open_idx = len(manifest["components"]) - 1
        target = "component"
    if open_idx is not None:
        manifest["components"][open_idx]["span"]["end"] = len(data)
    return {"manifest": manifest, "error_lines": errors}


def main():
    out = {}
    for arg in sys.argv[1:]:
        path, _, tag = arg.partition(":")
        with open(path, "rb") as f:
            data = f.read()
        out[os.path.basename(path)] = parse(data, tag or "#")
    json.dump(out, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()

"""Shared CSV writer for the experiment scripts."""

import csv
import json
import sys
from pathlib import Path


def write_rows(path, config: dict, columns: list[str], rows: list[dict]) -> None:
    """Write ``rows`` as CSV preceded by a ``# config:`` line; ``-`` means stdout."""
    out = sys.stdout if str(path) == "-" else None
    if out is None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        out = open(path, "w", newline="")
    try:
        out.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    finally:
        if out is not sys.stdout:
            out.close()
            print(f"wrote {path}", file=sys.stderr)

"""Versioned CSV schemas shared by the CLI and downstream figure scripts.

Every file starts with a comment line

    # kdvlab csv v1 schema=<name> config=<12-hex config hash>

followed by the column header and data rows.  Floats are written with 17
significant digits so round-tripping is exact.
"""

from __future__ import annotations

import csv
import hashlib
import io
from pathlib import Path

FORMAT_VERSION = 1

SCHEMAS = {
    "trace": ("t", "l2_norm", "amplitude", "peak_position"),
    "snapshot": ("x", "u"),
    "errors": ("t", "l2_error", "phase_offset", "amplitude_ratio"),
    "eigenreport": ("re_sigma", "im_sigma", "re_lambda", "im_lambda", "drift_ratio", "resolved"),
    "raster": ("im_zim", "im_zex", "max_sigma"),
    "prediction": ("t", "c", "predicted_l2"),
    "survey": ("scheme", "alpha", "dt", "N", "termination", "t_end"),
    "comparison": ("epsilon", "alpha", "dt", "scheme", "t_measured", "t_predicted", "rel_error"),
}


class SchemaError(ValueError):
    pass


def config_hash(config: dict) -> str:
    blob = "\n".join(f"{k}={config[k]}" for k in sorted(config))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def format_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_csv(path, schema: str, rows, config: dict | None = None, comments=()) -> None:
    """Write rows under the named schema; extra comment lines follow the stamp."""
    if schema not in SCHEMAS:
        raise SchemaError(f"unknown schema {schema!r}")
    cols = SCHEMAS[schema]
    h = config_hash(config or {})
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(f"# kdvlab csv v{FORMAT_VERSION} schema={schema} config={h}\n")
        for line in comments:
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(cols)
        for row in rows:
            if len(row) != len(cols):
                raise SchemaError(
                    f"row of width {len(row)} against {len(cols)}-column schema {schema!r}"
                )
            w.writerow([format_value(v) for v in row])


def read_csv(path, expect_schema: str | None = None):
    """Read a stamped CSV; returns (meta dict, list of row dicts).

    Numeric-looking cells are converted to float; the stamp's schema and
    config hash land in meta along with any extra comment lines.
    """
    path = Path(path)
    text = path.read_text()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# kdvlab csv"):
        raise SchemaError(f"{path}: missing schema stamp")
    stamp = lines[0][1:].split()
    meta = {"comments": []}
    for tok in stamp:
        if tok.startswith("v") and tok[1:].isdigit():
            meta["version"] = int(tok[1:])
        elif "=" in tok:
            k, v = tok.split("=", 1)
            meta[k] = v
    if meta.get("version") != FORMAT_VERSION:
        raise SchemaError(f"{path}: unsupported format version {meta.get('version')}")
    if expect_schema is not None and meta.get("schema") != expect_schema:
        raise SchemaError(
            f"{path}: schema {meta.get('schema')!r}, expected {expect_schema!r}"
        )
    body = []
    for ln in lines[1:]:
        if ln.startswith("#"):
            meta["comments"].append(ln[1:].strip())
        elif ln.strip():
            body.append(ln)
    if not body:
        raise SchemaError(f"{path}: no header row")
    rdr = csv.reader(io.StringIO("\n".join(body)))
    header = next(rdr)
    rows = []
    for raw in rdr:
        row = {}
        for k, v in zip(header, raw):
            try:
                row[k] = float(v)
            except ValueError:
                row[k] = v
        rows.append(row)
    return meta, rows

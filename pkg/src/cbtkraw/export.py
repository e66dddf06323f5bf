"""CSV and JSON serialisation of models, kernels and reports.

Every JSON document carries ``"schema": "cbt-krawtchouk/v1"``. Floats in JSON
use Python's shortest round-trip repr; CSV cells use 17 significant digits.
"""

from __future__ import annotations

import csv
import io
import json

from .errors import DomainError
from .params import ModelParams

SCHEMA = "cbt-krawtchouk/v1"


class ConfigError(DomainError):
    pass


def fmt(value):
    return format(float(value), ".17g")


def state_label(x):
    return ";".join(str(v) for v in x)


def document(kind, **payload):
    return {"schema": SCHEMA, "kind": kind, **payload}


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def table_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def enumeration_dict(enum):
    return {"n": enum.n, "N": enum.N, "order": "graded-colex", "states": [list(s) for s in enum]}


def kernel_json(kern):
    return document("kernel", params=kern.params.to_dict(),
                    enumeration=enumeration_dict(kern.enumeration),
                    matrix=kern.matrix.tolist(), stationary=kern.stationary.tolist())


def kernel_csv(kern):
    """Rows are destination states, columns source states."""
    labels = [state_label(s) for s in kern.enumeration]
    rows = ([labels[j]] + [float(v) for v in kern.matrix[j]] for j in range(kern.size))
    return table_csv(["to\\from"] + labels, rows)


def gram_csv(report):
    labels = [state_label(m) for m in report.degrees]
    rows = ([labels[i]] + [float(v) for v in report.matrix[i]] for i in range(len(labels)))
    return table_csv(["degree"] + labels, rows)


def occupancy_csv(report, enumeration):
    rows = ([state_label(s), int(report.occupancy[i]), float(report.stationary[i])]
            for i, s in enumerate(enumeration))
    return table_csv(["state", "count", "stationary"], rows)


def load_config(path):
    """Read a JSON model manifest; returns the raw dict after schema checks."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    if data.get("schema") != SCHEMA:
        raise ConfigError(f"config schema must be {SCHEMA!r}, got {data.get('schema')!r}")
    return data


def model_from(data):
    try:
        return ModelParams.from_dict(data)
    except KeyError as exc:
        raise ConfigError(f"config is missing {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

"""Trace and result serialization: delimited CSV and JSON, with loaders
that reproduce the arrays exactly (round-trip safe via repr-precision floats).
"""

from __future__ import annotations

import csv
import json
from typing import Optional

import numpy as np

from .engine import TRACE_COLUMNS, EpisodeResult, FailureReason

TRACE_SCHEMA_VERSION = 1
CSV_HEADER = TRACE_COLUMNS + ["contact"]


def result_summary(result: EpisodeResult) -> dict:
    return {
        "success": bool(result.success),
        "completion_s": (None if result.completion_time is None
                         else float(result.completion_time)),
        "failure_reason": (None if result.failure_reason is None
                           else result.failure_reason.value),
        "n_ticks": int(result.n_ticks),
        "final_contact": result.final_contact.value,
    }


def trace_to_csv(result: EpisodeResult, path) -> None:
    floats = result.floats
    contact = result.contact_codes
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for i in range(len(floats)):
            writer.writerow([repr(float(v)) for v in floats[i]] + [int(contact[i])])


def trace_to_json(result: EpisodeResult, path) -> None:
    payload = {
        "schema_version": TRACE_SCHEMA_VERSION,
        "columns": list(TRACE_COLUMNS),
        "result": result_summary(result),
        "rows": [list(map(float, row)) for row in result.floats],
        "contact": [int(c) for c in result.contact_codes],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_trace_json(path) -> tuple[np.ndarray, np.ndarray, dict]:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("schema_version") != TRACE_SCHEMA_VERSION:
        raise ValueError(f"unsupported trace schema {payload.get('schema_version')}")
    if payload.get("columns") != list(TRACE_COLUMNS):
        raise ValueError("trace column layout mismatch")
    floats = np.asarray(payload["rows"], dtype=float).reshape(-1, len(TRACE_COLUMNS))
    contact = np.asarray(payload["contact"], dtype=np.int8)
    return floats, contact, payload["result"]


def load_trace_csv(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError("trace csv header mismatch")
        floats = []
        contact = []
        for row in reader:
            floats.append([float(v) for v in row[:-1]])
            contact.append(int(row[-1]))
    return (np.asarray(floats, dtype=float).reshape(-1, len(TRACE_COLUMNS)),
            np.asarray(contact, dtype=np.int8))

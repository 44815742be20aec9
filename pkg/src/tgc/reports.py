"""Structured verification reports."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from pathlib import Path


def make_report(check: str, params: dict, counterexamples: list, timings: dict | None = None, **extra) -> dict:
    doc = {
        "check": check,
        "params": params,
        "status": "fail" if counterexamples else "pass",
        "counterexamples": counterexamples,
        "timings": timings or {},
    }
    doc.update(extra)
    return doc


@contextmanager
def timed(timings: dict, name: str):
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[name] = round(time.perf_counter() - start, 4)


def write_report(doc: dict, path: str | None) -> str:
    text = json.dumps(doc, indent=2, sort_keys=True, default=str)
    if path:
        Path(path).write_text(text + "\n")
    return text

"""Deterministic JSON reports."""
from __future__ import annotations

import json
import os
import tempfile

REPORT_SCHEMA_VERSION = 1

COUNTED = ("pass", "fail", "error")


def build_report(cfg, results: dict) -> dict:
    summary = {v: 0 for v in ("pass", "fail", "skip", "info", "error")}
    for block in results.values():
        summary[block["verdict"]] += 1
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "config_hash": cfg.hash(),
        "config": cfg.semantic(),
        "tasks": results,
        "summary": summary,
    }


def exit_code(report: dict) -> int:
    s = report["summary"]
    return 0 if s["fail"] == 0 and s["error"] == 0 else 1


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_report(report: dict, path: str):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(dumps(report))
    os.replace(tmp, path)

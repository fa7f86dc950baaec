"""Text and structured (JSON) rendering of verification reports.

Structured schema, version 1::

    {
      "schema": "polarlift.report",
      "schema_version": 1,
      "reports": [
        {"entry_id": str, "s": float, "seed": int,
         "normalization": {...},
         "claims": [{"claim", "verdict", "residual", "tolerance",
                     "dimensions", "expected", "samples", "detail"}, ...],
         "wall_time": float | null}
      ],
      "skipped": [{"entry_id": str, "reason": str}]
    }

``wall_time`` is null unless timings are requested, so that repeated runs
with one seed are byte-identical.  Breaking changes bump ``schema_version``.
"""
from __future__ import annotations

import json
from dataclasses import asdict

from .pipeline import ClaimRecord, VerificationReport

SCHEMA = "polarlift.report"
SCHEMA_VERSION = 1


def _report_dict(r: VerificationReport, timings: bool) -> dict:
    d = asdict(r)
    if not timings:
        d["wall_time"] = None
    return d


def to_structured(reports, skipped=(), timings: bool = False) -> str:
    doc = {
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "reports": [_report_dict(r, timings) for r in reports],
        "skipped": [{"entry_id": e, "reason": why} for e, why in skipped],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_structured(text: str) -> list[VerificationReport]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"not a {SCHEMA} document")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')}")
    out = []
    for r in doc["reports"]:
        claims = [ClaimRecord(**c) for c in r["claims"]]
        out.append(VerificationReport(r["entry_id"], r["s"], r["seed"], r["normalization"],
                                      claims, r["wall_time"]))
    return out


def _dims(d: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in d.items())


def to_text(reports, skipped=(), timings: bool = False) -> str:
    lines = []
    for r in reports:
        norm = r.normalization
        head = f"entry {r.entry_id}  s={r.s:.6g}  seed={r.seed}"
        if norm:
            head += f"  g = {norm.get('scale', 1):g} * {norm.get('form', '')}"
        if timings and r.wall_time is not None:
            head += f"  time={r.wall_time:.2f}s"
        lines.append(head)
        lines.append(f"  {'claim':<16} {'verdict':<9} {'residual':>10} {'tol':>8}  dimensions")
        for c in r.claims:
            lines.append(f"  {c.claim:<16} {c.verdict:<9} {c.residual:>10.2e} "
                         f"{c.tolerance:>8.1e}  {_dims(c.dimensions)}")
            if c.verdict in ("fail", "rejected") and c.detail:
                lines.append(f"  {'':<16} {c.detail}")
        lines.append("")
    for entry_id, why in skipped:
        lines.append(f"entry {entry_id}  skipped: {why}")
    n_pass = sum(r.passed for r in reports)
    lines.append(f"{n_pass}/{len(reports)} runs passed")
    return "\n".join(lines) + "\n"


def emit_report(reports, format: str = "text", skipped=(), timings: bool = False) -> str:
    if isinstance(reports, VerificationReport):
        reports = [reports]
    if format == "text":
        return to_text(reports, skipped, timings)
    if format == "structured":
        return to_structured(reports, skipped, timings)
    raise ValueError(f"unknown format {format!r}")

"""Report assembly and rendering.

Reports are plain documents (dicts) built from scan, trace, and
timeline outputs.  Every row carries its source so findings can be
tied back to an image path or an explorer record.  Given identical
inputs and a pinned generation timestamp, rendering is byte-stable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from typing import Iterable, Sequence

from . import __version__
from .codec.detect import detect_identifiers
from .graph.timeline import TimelineEvent
from .graph.trace import AttributionResult
from .scanner.hits import ArtifactKind, ScanResult
from .timestamps import format_utc

TOOL_NAME = "walletsift"

_REDACTED_RE = re.compile(r"([0-9A-Za-z]*)\*+([0-9A-Za-z]*)")


def partial_match(pattern: str, candidates: Iterable[str]) -> list[str]:
    """Resolve a redacted identifier like ``4af2*****8643``.

    Redacted forms are never matched by the text detector; this is the
    explicit query for them.  The pattern must be one prefix and one
    suffix around a single masked run.
    """
    matched = _REDACTED_RE.fullmatch(pattern)
    if matched is None:
        raise ValueError(
            f"not a redacted identifier pattern (prefix***suffix): {pattern!r}"
        )
    prefix, suffix = matched.group(1), matched.group(2)
    if not prefix and not suffix:
        raise ValueError("pattern must keep a prefix or suffix")
    return sorted(
        {
            candidate
            for candidate in candidates
            if len(candidate) >= len(prefix) + len(suffix)
            and candidate.startswith(prefix)
            and candidate.endswith(suffix)
        }
    )


def report_schema() -> dict:
    text = (
        resources.files("walletsift.data")
        .joinpath("report.schema.json")
        .read_text("utf-8")
    )
    return json.loads(text)


def _identifier_rows(value: str, source: dict) -> list[dict]:
    rows = []
    for detection in detect_identifiers(value):
        row = {
            "token": detection.token,
            "category": detection.category,
            "valid": detection.valid,
            "coin": None,
            "kind": None,
            "source": source,
        }
        if detection.address is not None:
            row["coin"] = detection.address.coin.value
            row["kind"] = detection.address.kind.value
        rows.append(row)
    return rows


@dataclass
class Report:
    report_kind: str
    generated_at: datetime
    case: dict | None = None
    artifacts: list[dict] = field(default_factory=list)
    identifiers: list[dict] = field(default_factory=list)
    traces: list[dict] = field(default_factory=list)
    timeline: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "tool": TOOL_NAME,
            "tool_version": __version__,
            "report_kind": self.report_kind,
            "generated_at": format_utc(self.generated_at),
            "case": self.case,
            "artifacts": self.artifacts,
            "identifiers": self.identifiers,
            "traces": self.traces,
            "timeline": self.timeline,
            "warnings": self.warnings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), indent=2, sort_keys=True) + "\n"

    def to_markdown(self) -> str:
        doc = self.to_doc()
        lines = [
            f"# {TOOL_NAME} {doc['report_kind']} report",
            "",
            f"- Generated: {doc['generated_at']}",
            f"- Tool: {TOOL_NAME} {doc['tool_version']}",
        ]
        if doc["case"]:
            case = doc["case"]
            lines += ["", "## Case", "", f"- Case id: {case.get('case_id', '?')}"]
            for image in case.get("images", []):
                lines.append(
                    f"- Image `{image['id']}` ({image['kind']}, "
                    f"{image['file_count']} files) from {image['root_label']}"
                )
        if doc["artifacts"]:
            lines += [
                "",
                f"## Artefacts ({len(doc['artifacts'])})",
                "",
                "| Kind | Value | Coin | Observed | Source |",
                "| --- | --- | --- | --- | --- |",
            ]
            for row in doc["artifacts"]:
                lines.append(
                    "| {kind} | `{value}` | {coin} | {observed} | `{source}` |".format(
                        kind=row["kind"],
                        value=_trim(row["value"]),
                        coin=row["coin"] or "",
                        observed=row["observed_at"] or "",
                        source=row["image_id"] + ":" + row["source_path"],
                    )
                )
        if doc["identifiers"]:
            lines += [
                "",
                f"## Identifiers ({len(doc['identifiers'])})",
                "",
                "| Token | Category | Valid | Coin | Kind | Source |",
                "| --- | --- | --- | --- | --- | --- |",
            ]
            for row in doc["identifiers"]:
                lines.append(
                    "| `{token}` | {category} | {valid} | {coin} | {kind} | `{source}` |".format(
                        token=_trim(row["token"]),
                        category=row["category"],
                        valid="yes" if row["valid"] else "no",
                        coin=row["coin"] or "",
                        kind=row["kind"] or "",
                        source=_source_key(row["source"]),
                    )
                )
        for trace_doc in doc["traces"]:
            lines += ["", "## Trace", ""]
            lines += _trace_lines(trace_doc)
        if doc["timeline"]:
            lines += [
                "",
                f"## Timeline ({len(doc['timeline'])})",
                "",
                "| Timestamp | Kind | Event |",
                "| --- | --- | --- |",
            ]
            for row in doc["timeline"]:
                lines.append(
                    f"| {row['timestamp']} | {row['source_kind']} | {row['description']} |"
                )
        if doc["warnings"]:
            lines += ["", f"## Warnings ({len(doc['warnings'])})", ""]
            lines += [f"- {warning}" for warning in doc["warnings"]]
        return "\n".join(lines) + "\n"


def _trim(value: str, limit: int = 80) -> str:
    return value if len(value) <= limit else value[: limit - 1] + "…"


def _source_key(source: dict) -> str:
    if "path" in source:
        return f"{source.get('image_id', '?')}:{source['path']}"
    return source.get("origin", "?")


def _trace_lines(trace_doc: dict) -> list[str]:
    result = trace_doc["result"]
    lines = [
        f"- Seed: `{result['seed']}`",
        f"- Direction: {result['direction']}, mode: {result['mode']}, "
        f"max depth: {result['max_depth']}",
    ]
    terminal = result["terminal"]
    if terminal["attributed"]:
        lines.append(
            f"- Attributed to **{', '.join(terminal['entities'])}** "
            f"at depth {result['depth']}"
        )
        for match in terminal["matches"]:
            lines.append(f"  - via `{match['address']}` ({match['matched_key']})")
    else:
        lines.append(f"- Unattributed: {terminal['reason']}")
    if result["hops"]:
        lines.append("- Path:")
        for hop in result["hops"]:
            lines.append(f"  1. `{hop['txid']}` ({hop['role']})")
    provenance = trace_doc.get("provenance", [])
    if provenance:
        lines.append("- Records consulted:")
        for item in provenance:
            lines.append(
                f"  - `{item['txid']}` from {item['source_name']} ({item['origin']})"
            )
    return lines


def _case_summary(case) -> dict:
    return {
        "case_id": case.case_id,
        "created_at": format_utc(case.created_at),
        "notes": case.notes,
        "images": [
            {
                "id": image.id,
                "kind": image.kind.value,
                "root_label": image.root_label,
                "file_count": len(image),
            }
            for image in case.images
        ],
    }


def scan_report(
    case,
    results: Sequence[ScanResult],
    generated_at: datetime | None = None,
    extra_corpus: Sequence[tuple[dict, str]] = (),
) -> Report:
    """Assemble scan results into a report.

    ``extra_corpus`` is (source, text) pairs whose text should also be
    swept for on-chain identifiers, e.g. decoded email files.
    """
    generated_at = generated_at or datetime.now(tz=timezone.utc)
    artifacts: list[dict] = []
    identifiers: list[dict] = []
    warnings: list[str] = []
    for image in case.images:
        warnings.extend(image.warnings)
    for result in results:
        warnings.extend(result.warnings)
        for hit in result.hits:
            doc = hit.to_doc()
            artifacts.append(doc)
            source = {"image_id": hit.image_id, "path": hit.source_path}
            identifiers.extend(_identifier_rows(hit.value, source))
    for source, text in extra_corpus:
        identifiers.extend(_identifier_rows(text, source))
    deduped = []
    seen = set()
    for row in identifiers:
        key = (row["token"], _source_key(row["source"]))
        if key not in seen:
            seen.add(key)
            deduped.append(row)
    deduped.sort(key=lambda row: (_source_key(row["source"]), row["token"]))
    return Report(
        report_kind="scan",
        generated_at=generated_at,
        case=_case_summary(case),
        artifacts=artifacts,
        identifiers=deduped,
        warnings=warnings,
    )


def trace_report(
    results: Sequence[AttributionResult],
    provenance: Sequence[dict] = (),
    generated_at: datetime | None = None,
) -> Report:
    generated_at = generated_at or datetime.now(tz=timezone.utc)
    traces = [
        {"result": result.to_doc(), "provenance": list(provenance)}
        for result in results
    ]
    return Report(report_kind="trace", generated_at=generated_at, traces=traces)


def timeline_report(
    events: Sequence[TimelineEvent],
    case=None,
    generated_at: datetime | None = None,
) -> Report:
    generated_at = generated_at or datetime.now(tz=timezone.utc)
    return Report(
        report_kind="timeline",
        generated_at=generated_at,
        case=_case_summary(case) if case is not None else None,
        timeline=[event.to_doc() for event in events],
    )
